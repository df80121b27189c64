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

#include "dcgforge/compile.hpp"
#include "dcgforge/dynamics.hpp"
#include "dcgforge/random.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

namespace dcg {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BathState : std::uint8_t { MaximallyMixed, BasisAverage, PureSample };

inline std::string to_string(BathState b) {
  switch (b) {
    case BathState::MaximallyMixed: return "maximally_mixed";
    case BathState::BasisAverage: return "basis_average";
    case BathState::PureSample: return "pure_sample";
  }
  return "?";
}

inline std::vector<double> log10_range(double start, double stop, double step) {
  if (step == 0.0 || (stop - start) / step < 0.0) {
    throw ConfigError("range " + detail::fmt_double(start) + ":" + detail::fmt_double(stop) + ":" +
                      detail::fmt_double(step) + " is empty or infinite");
  }
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (long k = 0; k < n; ++k) out.push_back(std::pow(10.0, start + static_cast<double>(k) * step));
  return out;
}

/// Parameters of the cat-state benchmark. Times are in units of τ_min.
struct BenchConfig {
  int n_system = 3;
  int n_bath = 5;
  double gamma = 1.0;
  std::vector<double> a_values = log10_range(-1.0, -5.8, -0.4);
  std::vector<double> epsilon_values{0.0, 1e-3, 1e-2};
  double tau = 1.0;
  PulseShape shape = PulseShape::rectangular();
  std::vector<CompileMode> modes{CompileMode::Primitive, CompileMode::Dcg};
  BathState bath_state = BathState::MaximallyMixed;
  std::uint64_t seed = 1;
  double h_max = 2.0;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (n_system < 2) throw ConfigError("n_system must be at least 2 for a cat state");
    if (n_bath < 0 || n_bath > 6) throw ConfigError("n_bath must be in [0, 6]");
    if (gamma < 0.0) throw ConfigError("gamma must be non-negative");
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");
    if (!(h_max > 0.0)) throw ConfigError("h_max must be positive");
    for (double a : a_values) {
      if (a < 0.0) throw ConfigError("A values must be non-negative");
    }
    if (modes.empty()) throw ConfigError("no modes selected");
  }

  ControlLimits limits() const { return {tau, h_max}; }

  /// Stable textual form; the CSV header carries its hash.
  std::string canonical() const {
    std::ostringstream os;
    os << "n_system=" << n_system << ";n_bath=" << n_bath << ";gamma=" << detail::fmt_double(gamma)
       << ";tau=" << detail::fmt_double(tau) << ";shape=" << shape.name << ";bath_state=" << to_string(bath_state)
       << ";seed=" << seed << ";h_max=" << detail::fmt_double(h_max) << ";a_values=";
    for (double a : a_values) os << detail::fmt_double(a) << ',';
    os << ";epsilon_values=";
    for (double e : epsilon_values) os << detail::fmt_double(e) << ',';
    os << ";modes=";
    for (auto m : modes) os << to_string(m) << ',';
    return os.str();
  }

  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

/// Flat `key=value` text; `#` starts a comment. Lists are comma separated and
/// `a_log10` accepts `start:stop:step`.
inline BenchConfig parse_config(std::string_view text) {
  BenchConfig cfg;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  auto numbers = [](const std::string& v) {
    std::vector<double> out;
    for (const auto& f : detail::split(v, ',')) {
      if (!f.empty()) out.push_back(detail::parse_double(f));
    }
    return out;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "n_system") cfg.n_system = std::stoi(val);
      else if (key == "n_bath") cfg.n_bath = std::stoi(val);
      else if (key == "gamma") cfg.gamma = detail::parse_double(val);
      else if (key == "tau") cfg.tau = detail::parse_double(val);
      else if (key == "h_max") cfg.h_max = detail::parse_double(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(val));
      else if (key == "shape") cfg.shape = PulseShape::from_name(val);
      else if (key == "a_values") cfg.a_values = numbers(val);
      else if (key == "epsilon_values") cfg.epsilon_values = numbers(val);
      else if (key == "a_log10") {
        const auto r = detail::split(val, ':');
        if (r.size() == 3) {
          cfg.a_values = log10_range(detail::parse_double(r[0]), detail::parse_double(r[1]), detail::parse_double(r[2]));
        } else {
          cfg.a_values.clear();
          for (double v : numbers(val)) cfg.a_values.push_back(std::pow(10.0, v));
        }
      } else if (key == "modes") {
        cfg.modes.clear();
        for (const auto& m : detail::split(val, ',')) cfg.modes.push_back(parse_mode(m));
      } else if (key == "bath_state") {
        if (val == "maximally_mixed") cfg.bath_state = BathState::MaximallyMixed;
        else if (val == "basis_average") cfg.bath_state = BathState::BasisAverage;
        else if (val.starts_with("pure_sample")) {
          cfg.bath_state = BathState::PureSample;
          // pure_sample(SEED) also sets the seed.
          if (const auto lp = val.find('('); lp != std::string::npos) {
            cfg.seed = std::stoull(val.substr(lp + 1, val.find(')') - lp - 1));
          }
        } else throw ConfigError("unknown bath_state '" + val + "'");
      } else {
        throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(lineno) + " (" + key + "): " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

/// Heisenberg spin bath: H_B = Γ Σ_{a<b} σ⃗_a·σ⃗_b over bath spins and
/// H_SB = A Σ_{i,a} σ⃗_i·σ⃗_a. Spin operators are Pauli matrices (no ½).
inline ErrorModel build_bath_hamiltonian(const BenchConfig& cfg, double a_coupling) {
  const QubitLayout l{cfg.n_system, cfg.n_bath};
  const QubitLayout bl = l.bath_only();
  Matrix hb = Matrix::Zero(bl.dim(), bl.dim());
  for (int a = 0; a < cfg.n_bath; ++a) {
    for (int b = a + 1; b < cfg.n_bath; ++b) {
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        hb += cfg.gamma * (embed_pauli(p, a, bl) * embed_pauli(p, b, bl)).matrix();
      }
    }
  }
  std::vector<Coupling> cs;
  for (int i = 0; i < cfg.n_system; ++i) {
    for (int a = 0; a < cfg.n_bath; ++a) {
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        cs.push_back({PauliString::single(cfg.n_system, i, p), a_coupling * embed_pauli(p, a, bl)});
      }
    }
  }
  return {l, DenseOperator(std::move(hb), bl), std::move(cs)};
}

/// H on qubit 0, then CNOT(0, k) for every other qubit: |0…0⟩ → GHZ.
inline std::vector<GateSpec> cat_circuit(int n_system = 3) {
  std::vector<GateSpec> c{GateSpec::hadamard(0)};
  for (int k = 1; k < n_system; ++k) c.push_back(GateSpec::cnot(0, k));
  return c;
}

inline Eigen::VectorXcd cat_state(int n_system) {
  const Index d = Index{1} << n_system;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  v(0) = v(d - 1) = 1.0 / std::numbers::sqrt2;
  return v;
}

/// 1 − sqrt(⟨cat|ρ|cat⟩) for a system density matrix.
inline double fidelity_loss(const DenseOperator& rho_out) {
  if (rho_out.n_bath() != 0) throw OperatorError("fidelity_loss expects a reduced system state");
  const double tr = rho_out.trace().real();
  if (std::abs(tr - 1.0) > 1e-6) throw OperatorError("fidelity_loss: trace " + std::to_string(tr) + " deviates from 1");
  const Eigen::VectorXcd cat = cat_state(rho_out.n_system());
  const double f = std::clamp((cat.adjoint() * rho_out.matrix() * cat)(0, 0).real(), 0.0, 1.0);
  return 1.0 - std::sqrt(f);
}

/// 1 − sqrt(1 − L) evaluated without cancellation for small L.
inline double loss_from_leakage(double leakage) {
  leakage = std::clamp(leakage, 0.0, 1.0);
  return leakage / (1.0 + std::sqrt(1.0 - leakage));
}

struct BenchmarkRecord {
  double a = 0.0;
  double epsilon = 0.0;
  CompileMode mode = CompileMode::Primitive;
  double fidelity_loss = 0.0;
  long slot_count = 0;
  double wall_time = 0.0;
  double rho_trace = 1.0;
};

/// Initial joint state as weighted pure columns: ρ = Σ_k w_k |c_k⟩⟨c_k| with
/// the system in |0…0⟩.
inline std::pair<Matrix, std::vector<double>> initial_columns(const BenchConfig& cfg) {
  const QubitLayout l{cfg.n_system, cfg.n_bath};
  const Index db = l.bath_dim();
  if (cfg.bath_state == BathState::PureSample) {
    Rng rng(cfg.seed);
    Matrix w = Matrix::Zero(l.dim(), 1);
    w.block(0, 0, db, 1) = random_state(db, rng);
    return {std::move(w), {1.0}};
  }
  // Maximally mixed and basis-averaged baths coincide: I/2^nb = mean of |b⟩⟨b|.
  Matrix w = Matrix::Zero(l.dim(), db);
  for (Index b = 0; b < db; ++b) w(b, b) = 1.0;
  return {std::move(w), std::vector<double>(static_cast<std::size_t>(db), 1.0 / static_cast<double>(db))};
}

/// One benchmark point: compile the cat circuit, propagate the joint state and
/// score the reduced system state against the cat state.
inline BenchmarkRecord run_point(const BenchConfig& cfg, double a_coupling, double epsilon, CompileMode mode) {
  const auto t0 = std::chrono::steady_clock::now();
  CompileOptions opt;
  opt.tau = cfg.tau;
  opt.shape = cfg.shape;
  opt.epsilon = epsilon;
  const PulseSequence seq = compile_circuit(cat_circuit(cfg.n_system), mode, cfg.n_system, opt);
  require_valid(seq, cfg.limits());

  Propagator prop(build_bath_hamiltonian(cfg, a_coupling));
  auto [cols, weights] = initial_columns(cfg);
  cols = prop.apply(seq, std::move(cols));

  const QubitLayout l{cfg.n_system, cfg.n_bath};
  const Index ds = l.system_dim();
  const Index db = l.bath_dim();
  const Eigen::VectorXcd cat = cat_state(cfg.n_system);
  double leakage = 0.0;
  double trace = 0.0;
  for (Index k = 0; k < cols.cols(); ++k) {
    // Column as a ds×db matrix M(i, b); (I − |cat⟩⟨cat|)M is summed directly so
    // tiny leakage is not lost to cancellation against ⟨cat|ρ|cat⟩ ≈ 1.
    const Eigen::Map<const Matrix> m(cols.col(k).data(), db, ds);  // m(b, i)
    const Matrix mt = m.transpose();
    const Matrix orth = mt - cat * (cat.adjoint() * mt);
    leakage += weights[static_cast<std::size_t>(k)] * orth.squaredNorm();
    trace += weights[static_cast<std::size_t>(k)] * mt.squaredNorm();
  }

  BenchmarkRecord r;
  r.a = a_coupling;
  r.epsilon = epsilon;
  r.mode = mode;
  r.fidelity_loss = loss_from_leakage(leakage / trace);
  r.slot_count = seq.slot_count(cfg.tau);
  r.rho_trace = trace;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Reduced system state after running the point's sequence (diagnostics).
inline DenseOperator output_state(const BenchConfig& cfg, double a_coupling, double epsilon, CompileMode mode) {
  CompileOptions opt;
  opt.tau = cfg.tau;
  opt.shape = cfg.shape;
  opt.epsilon = epsilon;
  const PulseSequence seq = compile_circuit(cat_circuit(cfg.n_system), mode, cfg.n_system, opt);
  Propagator prop(build_bath_hamiltonian(cfg, a_coupling));
  auto [cols, weights] = initial_columns(cfg);
  cols = prop.apply(seq, std::move(cols));
  const QubitLayout l{cfg.n_system, cfg.n_bath};
  Matrix rho = Matrix::Zero(l.dim(), l.dim());
  for (Index k = 0; k < cols.cols(); ++k) rho += weights[static_cast<std::size_t>(k)] * cols.col(k) * cols.col(k).adjoint();
  return partial_trace_bath(DenseOperator(std::move(rho), l));
}

/// (epsilon ascending, mode, A descending).
inline bool record_order(const BenchmarkRecord& x, const BenchmarkRecord& y) {
  if (x.epsilon != y.epsilon) return x.epsilon < y.epsilon;
  if (x.mode != y.mode) return to_string(x.mode) < to_string(y.mode);
  return x.a > y.a;
}

struct CsvOptions {
  bool timing = true;  // false writes wall_time_s = 0 for byte-stable output
};

inline void write_csv_header(std::ostream& os, const BenchConfig& cfg) {
  std::ostringstream h;
  h << std::hex << std::setw(16) << std::setfill('0') << cfg.hash();
  const auto circuit = cat_circuit(cfg.n_system);
  std::size_t primitives = 0;
  for (const auto& g : circuit) primitives += decompose_gate(g).size();
  os << "# dcg-forge sweep\n"
     << "# config_hash=" << h.str() << "\n"
     << "# seed=" << cfg.seed << "\n"
     << "# config: " << cfg.canonical() << "\n"
     << "# normalization: spin operators are Pauli matrices (I = sigma, not sigma/2); "
     << "time unit tau = tau_min = " << detail::fmt_double(cfg.tau) << "; gamma and A in units of 1/tau_min\n"
     << "# circuit: H(0) then CNOT(0,k); " << primitives << " primitives (H = 2, exact CNOT = 7); dcg = 16 slots per primitive\n"
     << "# metric: fidelity_loss = 1 - sqrt(<cat|rho_out|cat>)\n"
     << "epsilon,mode,A,fidelity_loss,slot_count,wall_time_s\n";
}

inline void write_csv_rows(std::ostream& os, const std::vector<BenchmarkRecord>& records, const CsvOptions& opt = {}) {
  for (const auto& r : records) {
    os << detail::fmt_double(r.epsilon) << ',' << to_string(r.mode) << ',' << detail::fmt_double(r.a) << ','
       << detail::fmt_double(r.fidelity_loss) << ',' << r.slot_count << ','
       << detail::fmt_double(opt.timing ? r.wall_time : 0.0) << '\n';
  }
}

/// Evaluates every (A, ε, mode) point, in parallel when threads allow, and
/// returns records in CSV order. If a point fails, the records finished so
/// far are written to `csv` (when given) before the error propagates.
inline std::vector<BenchmarkRecord> sweep(const BenchConfig& cfg, std::ostream* csv = nullptr, const CsvOptions& csv_opt = {},
                                          const std::function<void(const BenchmarkRecord&)>& on_record = {}) {
  cfg.validate();
  struct Task {
    double a, eps;
    CompileMode mode;
  };
  std::vector<Task> tasks;
  for (double e : cfg.epsilon_values) {
    for (CompileMode m : cfg.modes) {
      for (double a : cfg.a_values) tasks.push_back({a, e, m});
    }
  }
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const unsigned workers = std::max(1U, std::min<unsigned>(cfg.threads == 0 ? hw : cfg.threads,
                                                           static_cast<unsigned>(tasks.size())));
  std::vector<BenchmarkRecord> done;
  std::exception_ptr failure;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      try {
        BenchmarkRecord r = run_point(cfg, tasks[i].a, tasks[i].eps, tasks[i].mode);
        std::lock_guard lock(mu);
        done.push_back(r);
        if (on_record) on_record(r);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::future<void>> pool;
  for (unsigned w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  std::sort(done.begin(), done.end(), record_order);
  if (csv) {
    write_csv_header(*csv, cfg);
    write_csv_rows(*csv, done, csv_opt);
    csv->flush();
  }
  if (failure) std::rethrow_exception(failure);
  return done;
}

}  // namespace dcg
