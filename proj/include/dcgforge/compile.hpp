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

#include "dcgforge/euler.hpp"
#include "dcgforge/pulses.hpp"

namespace dcg {

/// A gate from the universal set (X/Y rotations, ZZ phase gates, NOOP) or a
/// composite (Hadamard, CNOT) that decompose_gate expands. `angle` is the
/// pulse area φ of rotation gates, which implement exp(−iφG).
struct GateSpec {
  enum class Kind : std::uint8_t { Noop, X, Y, ZZ, Hadamard, Cnot };

  Kind kind = Kind::Noop;
  int q0 = -1;
  int q1 = -1;
  double angle = 0.0;

  static GateSpec noop() { return {}; }
  static GateSpec x(int q, double phi) { return {Kind::X, q, -1, phi}; }
  static GateSpec y(int q, double phi) { return {Kind::Y, q, -1, phi}; }
  static GateSpec zz(int a, int b, double phi) { return {Kind::ZZ, a, b, phi}; }
  static GateSpec hadamard(int q) { return {Kind::Hadamard, q, -1, 0.0}; }
  static GateSpec cnot(int control, int target) { return {Kind::Cnot, control, target, 0.0}; }

  bool is_primitive() const { return kind == Kind::X || kind == Kind::Y || kind == Kind::ZZ; }
  int max_qubit() const { return std::max(q0, q1); }

  Generator generator() const {
    switch (kind) {
      case Kind::X: return Generator::x(q0);
      case Kind::Y: return Generator::y(q0);
      case Kind::ZZ: return Generator::zz(q0, q1);
      default: throw std::logic_error("gate " + str() + " has no single generator");
    }
  }

  std::string str() const {
    switch (kind) {
      case Kind::Noop: return "noop";
      case Kind::X: return "x:" + std::to_string(q0) + ":" + detail::fmt_double(angle);
      case Kind::Y: return "y:" + std::to_string(q0) + ":" + detail::fmt_double(angle);
      case Kind::ZZ:
        return "zz:" + std::to_string(q0) + "," + std::to_string(q1) + ":" + detail::fmt_double(angle);
      case Kind::Hadamard: return "h:" + std::to_string(q0);
      case Kind::Cnot: return "cnot:" + std::to_string(q0) + "," + std::to_string(q1);
    }
    return "?";
  }

  /// Parses `noop`, `x:Q:PHI`, `y:Q:PHI`, `zz:A,B:PHI`, `h:Q`, `cnot:C,T`.
  static GateSpec parse(std::string_view text) {
    const auto parts = detail::split(text, ':');
    const std::string& k = parts.at(0);
    auto need = [&](std::size_t n) {
      if (parts.size() != n) throw std::invalid_argument("malformed gate spec '" + std::string(text) + "'");
    };
    auto pair = [&](const std::string& s) {
      const auto q = detail::split(s, ',');
      if (q.size() != 2) throw std::invalid_argument("expected qubit pair in '" + std::string(text) + "'");
      return std::pair{std::stoi(q[0]), std::stoi(q[1])};
    };
    if (k == "noop") { need(1); return noop(); }
    if (k == "x") { need(3); return x(std::stoi(parts[1]), detail::parse_double(parts[2])); }
    if (k == "y") { need(3); return y(std::stoi(parts[1]), detail::parse_double(parts[2])); }
    if (k == "zz") {
      need(3);
      const auto [a, b] = pair(parts[1]);
      return zz(a, b, detail::parse_double(parts[2]));
    }
    if (k == "h") { need(2); return hadamard(std::stoi(parts[1])); }
    if (k == "cnot") {
      need(2);
      const auto [c, t] = pair(parts[1]);
      return cnot(c, t);
    }
    throw std::invalid_argument("unknown gate '" + k + "'");
  }

  /// Exact unitary on an n_system register.
  DenseOperator target_unitary(int n_system) const {
    const QubitLayout l{n_system, 0};
    if (max_qubit() >= n_system) throw OperatorError("gate " + str() + " exceeds the register");
    switch (kind) {
      case Kind::Noop: return DenseOperator::identity(l);
      case Kind::X: case Kind::Y: case Kind::ZZ:
        return expm_unitary(generator().system_operator(n_system), angle);
      case Kind::Hadamard:
        return (1.0 / std::numbers::sqrt2) * (embed_pauli(Pauli::X, q0, l) + embed_pauli(Pauli::Z, q0, l));
      case Kind::Cnot: {
        const DenseOperator id = DenseOperator::identity(l);
        const DenseOperator zc = embed_pauli(Pauli::Z, q0, l);
        const DenseOperator xt = embed_pauli(Pauli::X, q1, l);
        return 0.5 * (id + zc) + 0.5 * ((id - zc) * xt);
      }
    }
    return DenseOperator::identity(l);
  }
};

/// Expansion into X/Y/ZZ primitives, in application order. Hadamard takes 2;
/// an exact CNOT needs 7 from this repertoire (the control qubit needs an
/// S-type phase, which costs three X/Y rotations).
inline std::vector<GateSpec> decompose_gate(const GateSpec& g) {
  constexpr double q = std::numbers::pi / 4;
  switch (g.kind) {
    case GateSpec::Kind::Hadamard:
      // H = X·exp(−iπ/4·Y) exactly, and X = i·exp(−iπ/2·X).
      return {GateSpec::y(g.q0, q), GateSpec::x(g.q0, 2 * q)};
    case GateSpec::Kind::Cnot: {
      const int c = g.q0;
      const int t = g.q1;
      return {GateSpec::x(c, -q), GateSpec::y(c, -q), GateSpec::y(t, -q), GateSpec::x(c, q),
              GateSpec::zz(c, t, q), GateSpec::y(t, q), GateSpec::x(t, -q)};
    }
    default: return {g};
  }
}

enum class CompileMode : std::uint8_t { Primitive, Dcg };

inline std::string to_string(CompileMode m) { return m == CompileMode::Primitive ? "primitive" : "dcg"; }

inline CompileMode parse_mode(std::string_view s) {
  if (s == "primitive") return CompileMode::Primitive;
  if (s == "dcg") return CompileMode::Dcg;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected primitive|dcg)");
}

struct CompileOptions {
  double tau = 1.0;
  PulseShape shape = PulseShape::rectangular();
  ControlLimits limits{};
  double epsilon = 0.0;
};

/// π pulse about generator k of the group: every listed drive at once, area π/2.
inline ControlSegment generator_pulse(const DDGroupRep& rep, int k, const CompileOptions& opt) {
  return {rep.drives.at(static_cast<std::size_t>(k)), (std::numbers::pi / 2) / (opt.tau * opt.shape.integral),
          opt.tau, opt.shape, false, opt.epsilon};
}

/// Eulerian-cycle NOOP: one collective π pulse per Cayley edge.
inline PulseSequence compile_noop(int n_system, const CompileOptions& opt = {}) {
  const DDGroupRep rep = dd_group_z2z2(n_system);
  const CayleyGraph graph = cayley_graph(rep);
  const EulerWalk walk = eulerian_cycle(graph, graph.identity);
  PulseSequence seq(n_system);
  for (int e : walk.edges) seq.push_back(generator_pulse(rep, graph.edges[static_cast<std::size_t>(e)].generator, opt));
  require_valid(seq, opt.limits);
  return seq;
}

/// Dynamically corrected gate along the Eulerian path of the modified Cayley
/// graph: generator edges become π pulses, M_I edges seq_h1 and the final M_U
/// edge seq_h2 on the gate's own generator. 16 slots for a rotation gate.
inline PulseSequence compile_dcg(const GateSpec& gate, int n_system, const CompileOptions& opt = {}) {
  if (gate.kind == GateSpec::Kind::Noop) return compile_noop(n_system, opt);
  if (!gate.is_primitive()) {
    throw std::invalid_argument("compile_dcg: " + gate.str() + " is not a primitive gate; decompose it first");
  }
  const DDGroupRep rep = dd_group_z2z2(n_system);
  const CayleyGraph graph = modify_graph_for_gate(cayley_graph(rep));
  const EulerWalk walk = eulerian_path(graph);

  const Generator g = gate.generator();
  const double theta = gate.angle / (2.0 * opt.tau * opt.shape.integral);
  const PulseSequence identity_arm = seq_h1(theta, opt.tau, g, n_system, opt.shape).with_epsilon(opt.epsilon);
  const PulseSequence gate_arm = seq_h2(theta, opt.tau, g, n_system, opt.shape).with_epsilon(opt.epsilon);

  PulseSequence seq(n_system);
  for (int e : walk.edges) {
    const CayleyEdge& edge = graph.edges[static_cast<std::size_t>(e)];
    switch (edge.kind) {
      case EdgeKind::Generator: seq.push_back(generator_pulse(rep, edge.generator, opt)); break;
      case EdgeKind::IdentityArm: seq.append(identity_arm); break;
      case EdgeKind::GateArm: seq.append(gate_arm); break;
    }
  }
  require_valid(seq, opt.limits);
  return seq;
}

/// One τ-long primitive segment per gate (idle slot for NOOP).
inline PulseSequence compile_primitive(const GateSpec& gate, int n_system, const CompileOptions& opt = {}) {
  PulseSequence seq(n_system);
  if (gate.kind == GateSpec::Kind::Noop) {
    seq.push_back(ControlSegment::idle(opt.tau));
    return seq;
  }
  ControlSegment s = primitive_gate(gate.generator(), gate.angle, opt.tau, opt.shape, opt.limits);
  s.epsilon = opt.epsilon;
  seq.push_back(std::move(s));
  require_valid(seq, opt.limits);
  return seq;
}

/// Composite gates are expanded first; each primitive then becomes either a
/// single τ pulse or a 16τ DCG.
inline PulseSequence compile_circuit(const std::vector<GateSpec>& circuit, CompileMode mode, int n_system,
                                     const CompileOptions& opt = {}) {
  PulseSequence seq(n_system);
  for (const GateSpec& gate : circuit) {
    for (const GateSpec& p : decompose_gate(gate)) {
      seq.append(mode == CompileMode::Dcg ? compile_dcg(p, n_system, opt) : compile_primitive(p, n_system, opt));
    }
  }
  return seq;
}

/// Product of target unitaries, for comparison against intended_unitary.
inline DenseOperator circuit_unitary(const std::vector<GateSpec>& circuit, int n_system) {
  DenseOperator u = DenseOperator::identity({n_system, 0});
  for (const GateSpec& g : circuit) u = g.target_unitary(n_system) * u;
  return u;
}

}  // namespace dcg
