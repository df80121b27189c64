// Copyright 2026 The dcg-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "dcgforge/opcore.hpp"

#include <charconv>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dcg {

/// Control constraints: minimum switching time and maximum drive strength.
struct ControlLimits {
  double tau_min = 0.0;
  double h_max = std::numeric_limits<double>::infinity();
};

class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A fixed pulse envelope h0 on [0, 1]. Shapes are plain values compared by
/// name; the envelope itself is a free function.
struct PulseShape {
  std::string name;
  double (*h0)(double) = nullptr;
  double integral = 0.0;  // ∫₀¹ h0
  double peak = 0.0;      // max |h0|
  bool piecewise_constant = false;

  double value(double s, bool reversed) const { return h0(reversed ? 1.0 - s : s); }

  static PulseShape rectangular() {
    return {"rect", [](double) { return 1.0; }, 1.0, 1.0, true};
  }

  /// 2·min(s, 1−s): symmetric, so reversal is a no-op pointwise.
  static PulseShape triangular() {
    return {"tri", [](double s) { return 2.0 * std::min(s, 1.0 - s); }, 0.5, 1.0, false};
  }

  /// 2s: asymmetric, so reversal matters.
  static PulseShape ramp() {
    return {"ramp", [](double s) { return 2.0 * s; }, 1.0, 2.0, false};
  }

  static PulseShape from_name(std::string_view n) {
    if (n == "rect") return rectangular();
    if (n == "tri") return triangular();
    if (n == "ramp") return ramp();
    throw std::invalid_argument("unknown pulse shape '" + std::string(n) + "'");
  }

  friend bool operator==(const PulseShape& a, const PulseShape& b) { return a.name == b.name; }
};

/// One switchable control term from the repertoire {X_i, Y_i, Z_i Z_j}, or
/// the identity for explicit idle intervals.
struct Generator {
  enum class Kind : std::uint8_t { Idle, X, Y, ZZ };

  Kind kind = Kind::Idle;
  int qubit = -1;
  int partner = -1;

  static Generator idle() { return {}; }
  static Generator x(int q) { return {Kind::X, q, -1}; }
  static Generator y(int q) { return {Kind::Y, q, -1}; }
  static Generator zz(int q0, int q1) {
    if (q0 == q1) throw std::invalid_argument("ZZ generator needs two distinct qubits");
    return {Kind::ZZ, std::min(q0, q1), std::max(q0, q1)};
  }

  std::string label() const {
    switch (kind) {
      case Kind::Idle: return "I";
      case Kind::X: return "X";
      case Kind::Y: return "Y";
      case Kind::ZZ: return "ZZ";
    }
    return "?";
  }

  std::string qubits() const {
    switch (kind) {
      case Kind::Idle: return "-";
      case Kind::ZZ: return std::to_string(qubit) + "," + std::to_string(partner);
      default: return std::to_string(qubit);
    }
  }

  int max_qubit() const { return std::max(qubit, partner); }

  /// Hermitian, involutory Pauli operator on the system register (zero for idle).
  DenseOperator system_operator(int n_system) const {
    const QubitLayout l{n_system, 0};
    if (max_qubit() >= n_system) {
      throw OperatorError("generator " + label() + qubits() + " exceeds " +
                          std::to_string(n_system) + " system qubits");
    }
    switch (kind) {
      case Kind::Idle: return DenseOperator::zero(l);
      case Kind::X: return embed_pauli(Pauli::X, qubit, l);
      case Kind::Y: return embed_pauli(Pauli::Y, qubit, l);
      case Kind::ZZ: return embed_pauli(Pauli::Z, qubit, l) * embed_pauli(Pauli::Z, partner, l);
    }
    return DenseOperator::zero(l);
  }

  friend bool operator==(const Generator&, const Generator&) = default;
  friend auto operator<=>(const Generator&, const Generator&) = default;
};

/// A bounded-strength pulse: every listed generator is driven with the same
/// profile amplitude·h0(s)·(1+ε) for `duration`. Several generators model
/// simultaneous single-qubit drives (collective pulses).
struct ControlSegment {
  std::vector<Generator> generators;
  double amplitude = 0.0;
  double duration = 0.0;
  PulseShape shape = PulseShape::rectangular();
  bool reversed = false;
  double epsilon = 0.0;

  static ControlSegment idle(double duration) {
    return {{Generator::idle()}, 0.0, duration, PulseShape::rectangular(), false, 0.0};
  }

  bool is_idle() const {
    return amplitude == 0.0 ||
           std::all_of(generators.begin(), generators.end(),
                       [](const Generator& g) { return g.kind == Generator::Kind::Idle; });
  }

  /// ∫ profile dt with ε = 0.
  double area() const { return amplitude * duration * shape.integral; }

  double realized_peak() const { return std::abs(amplitude * (1.0 + epsilon)) * shape.peak; }

  /// Σ_k G_k on the system register.
  DenseOperator drive_operator(int n_system) const {
    DenseOperator sum = DenseOperator::zero({n_system, 0});
    for (const Generator& g : generators) sum = sum + g.system_operator(n_system);
    return sum;
  }

  friend bool operator==(const ControlSegment& a, const ControlSegment& b) {
    return a.generators == b.generators && a.amplitude == b.amplitude &&
           a.duration == b.duration && a.shape == b.shape && a.reversed == b.reversed &&
           a.epsilon == b.epsilon;
  }
};

/// Profile value at local time t ∈ [0, duration].
inline double profile_value(const ControlSegment& seg, double t) {
  if (t < 0.0 || t > seg.duration) {
    throw std::out_of_range("profile_value: t=" + std::to_string(t) + " outside [0, " +
                            std::to_string(seg.duration) + "]");
  }
  const double s = seg.duration > 0.0 ? t / seg.duration : 0.0;
  return seg.amplitude * (1.0 + seg.epsilon) * seg.shape.value(s, seg.reversed);
}

/// Time-contiguous list of segments on an n_system-qubit register.
class PulseSequence {
 public:
  PulseSequence() = default;
  explicit PulseSequence(int n_system, std::vector<ControlSegment> segs = {})
      : n_system_(n_system), segments_(std::move(segs)) {}

  int n_system() const { return n_system_; }
  const std::vector<ControlSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : segments_) t += s.duration;
    return t;
  }

  /// Number of τ-long slots the sequence occupies.
  long slot_count(double tau) const { return std::lround(total_duration() / tau); }

  double start_time(std::size_t k) const {
    double t = 0.0;
    for (std::size_t i = 0; i < k; ++i) t += segments_.at(i).duration;
    return t;
  }

  void push_back(ControlSegment s) { segments_.push_back(std::move(s)); }

  void append(const PulseSequence& other) {
    if (other.n_system_ != n_system_) throw OperatorError("append: register size mismatch");
    segments_.insert(segments_.end(), other.segments_.begin(), other.segments_.end());
  }

  /// Copy with every segment's systematic scaling error set to `eps`.
  PulseSequence with_epsilon(double eps) const {
    PulseSequence out = *this;
    for (auto& s : out.segments_) s.epsilon = eps;
    return out;
  }

  friend PulseSequence operator+(PulseSequence a, const PulseSequence& b) {
    a.append(b);
    return a;
  }

 private:
  int n_system_ = 1;
  std::vector<ControlSegment> segments_;
};

/// U_ctrl of one segment with ε = 0. Same-segment generators commute, so the
/// time-ordered exponential is exp(−i·area·ΣG) for any shape.
inline DenseOperator segment_unitary(const ControlSegment& seg, int n_system) {
  if (seg.is_idle()) return DenseOperator::identity({n_system, 0});
  return expm_unitary(seg.drive_operator(n_system), seg.area());
}

/// Ideal control propagator: time-ordered product of segment unitaries.
inline DenseOperator intended_unitary(const PulseSequence& seq) {
  DenseOperator u = DenseOperator::identity({seq.n_system(), 0});
  for (const auto& seg : seq.segments()) u = segment_unitary(seg, seq.n_system()) * u;
  return u;
}

struct Violation {
  std::size_t segment = 0;
  std::string what;
};

inline std::vector<Violation> validate(const PulseSequence& seq, const ControlLimits& limits) {
  std::vector<Violation> out;
  // Relative slack so that durations assembled from sums of τ still pass.
  constexpr double kSlack = 1e-12;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& s = seq.segments()[k];
    if (s.duration < limits.tau_min * (1.0 - kSlack)) {
      out.push_back({k, "duration " + std::to_string(s.duration) + " < tau_min " +
                            std::to_string(limits.tau_min)});
    }
    if (s.realized_peak() > limits.h_max * (1.0 + kSlack)) {
      out.push_back({k, "amplitude " + std::to_string(s.realized_peak()) + " > h_max " +
                            std::to_string(limits.h_max)});
    }
    if (s.duration <= 0.0) out.push_back({k, "non-positive duration"});
  }
  return out;
}

inline void require_valid(const PulseSequence& seq, const ControlLimits& limits) {
  const auto report = validate(seq, limits);
  if (!report.empty()) {
    throw ConstraintError("segment " + std::to_string(report.front().segment) + ": " +
                          report.front().what);
  }
}

/// Single segment with amplitude chosen so that ∫profile = φ, realizing
/// exp(−iφG).
inline ControlSegment primitive_gate(const Generator& g, double phi, double duration,
                                     const PulseShape& shape = PulseShape::rectangular(),
                                     const ControlLimits& limits = {}) {
  if (duration <= 0.0) throw ConstraintError("primitive_gate: duration must be positive");
  ControlSegment seg{{g}, phi / (duration * shape.integral), duration, shape, false, 0.0};
  require_valid(PulseSequence(std::max(1, g.max_qubit() + 1), {seg}), limits);
  return seg;
}

/// Identity-implementing pair: the shape compressed into τ at +2θ, then its
/// time reverse at −2θ. Each half carries the same area as seq_h2(θ), which is
/// what makes the two first-order error phases coincide for every shape.
inline PulseSequence seq_h1(double theta, double tau, const Generator& g, int n_system,
                            const PulseShape& shape = PulseShape::rectangular(),
                            const ControlLimits& limits = {}) {
  PulseSequence seq(n_system, {{{g}, 2.0 * theta, tau, shape, false, 0.0},
                               {{g}, -2.0 * theta, tau, shape, true, 0.0}});
  require_valid(seq, limits);
  return seq;
}

/// Primitive gate stretched over 2τ at amplitude θ: exp(−i·2τθ·∫h0·G).
inline PulseSequence seq_h2(double theta, double tau, const Generator& g, int n_system,
                            const PulseShape& shape = PulseShape::rectangular(),
                            const ControlLimits& limits = {}) {
  PulseSequence seq(n_system, {{{g}, theta, 2.0 * tau, shape, false, 0.0}});
  require_valid(seq, limits);
  return seq;
}

// ---------------------------------------------------------------------------
// Text serialization: one tab-separated line per (segment, generator):
//   t_start t_end generator qubits amplitude shape reversed epsilon
// Lines sharing a time interval and drive belong to one parallel segment.

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline std::string to_text(const PulseSequence& seq) {
  std::ostringstream os;
  os << "# n_system=" << seq.n_system() << "\n";
  os << "# t_start\tt_end\tgenerator\tqubits\tamplitude\tshape\treversed\tepsilon\n";
  double t = 0.0;
  for (const auto& s : seq.segments()) {
    const double t_end = t + s.duration;
    for (const auto& g : s.generators) {
      os << detail::fmt_double(t) << '\t' << detail::fmt_double(t_end) << '\t' << g.label() << '\t'
         << g.qubits() << '\t' << detail::fmt_double(s.amplitude) << '\t' << s.shape.name << '\t'
         << (s.reversed ? 1 : 0) << '\t' << detail::fmt_double(s.epsilon) << '\n';
    }
    t = t_end;
  }
  return os.str();
}

inline PulseSequence parse_sequence(std::string_view text) {
  struct Row {
    double t0, t1, amp, eps;
    Generator g;
    std::string shape;
    bool reversed;
  };
  std::vector<Row> rows;
  int n_system = 0;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view key = "# n_system=";
      if (line.starts_with(key)) n_system = std::stoi(line.substr(key.size()));
      continue;
    }
    const auto f = detail::split(line, '\t');
    if (f.size() != 8) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 8 fields");
    }
    Row r{};
    r.t0 = detail::parse_double(f[0]);
    r.t1 = detail::parse_double(f[1]);
    r.amp = detail::parse_double(f[4]);
    r.shape = f[5];
    r.reversed = f[6] == "1";
    r.eps = detail::parse_double(f[7]);
    const auto qs = detail::split(f[3], ',');
    if (f[2] == "I") r.g = Generator::idle();
    else if (f[2] == "X") r.g = Generator::x(std::stoi(qs.at(0)));
    else if (f[2] == "Y") r.g = Generator::y(std::stoi(qs.at(0)));
    else if (f[2] == "ZZ") r.g = Generator::zz(std::stoi(qs.at(0)), std::stoi(qs.at(1)));
    else throw std::invalid_argument("line " + std::to_string(lineno) + ": bad generator '" + f[2] + "'");
    n_system = std::max(n_system, r.g.max_qubit() + 1);
    rows.push_back(std::move(r));
  }
  PulseSequence seq(std::max(1, n_system));
  for (std::size_t i = 0; i < rows.size();) {
    const Row& head = rows[i];
    ControlSegment seg{{}, head.amp, head.t1 - head.t0, PulseShape::from_name(head.shape),
                       head.reversed, head.eps};
    std::size_t j = i;
    while (j < rows.size() && rows[j].t0 == head.t0 && rows[j].t1 == head.t1 &&
           rows[j].amp == head.amp && rows[j].shape == head.shape &&
           rows[j].reversed == head.reversed && rows[j].eps == head.eps) {
      seg.generators.push_back(rows[j].g);
      ++j;
    }
    seq.push_back(std::move(seg));
    i = j;
  }
  return seq;
}

}  // namespace dcg
