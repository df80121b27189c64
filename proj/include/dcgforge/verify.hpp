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

// Invariant suites shared by `dcg-forge verify` and the test binaries.

#pragma once

#include "dcgforge/bench.hpp"

namespace dcg {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

template <class F>
CheckResult timed(std::string name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r{std::move(name), false, {}, 0.0};
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

inline Pauli random_axis(Rng& rng) {
  return static_cast<Pauli>(1 + std::uniform_int_distribution<int>(0, 2)(rng));
}

}  // namespace detail

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: non-positive value");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Single-qubit and inhomogeneous two-qubit errors average to zero over the
/// collective-Pauli group; homogeneous σ_ασ_α terms survive.
inline CheckResult check_decoupling(std::uint64_t seed = 11, int inhomogeneous_trials = 20) {
  return detail::timed("decoupling condition", [&](CheckResult& r) {
    Rng rng(seed);
    const int n = 3;
    const QubitLayout l{n, 1};
    const DDGroupRep rep = dd_group_z2z2(n);
    double worst_linear = 0.0;
    for (int q = 0; q < n; ++q) {
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        const DenseOperator e = kron_system_bath(embed_pauli(p, q, l.system_only()), random_hermitian(l.bath_only(), 1.0, rng));
        worst_linear = std::max(worst_linear, decoupling_residual(rep, e));
      }
    }
    double worst_inhom = 0.0;
    std::uniform_int_distribution<int> qd(0, n - 1);
    for (int t = 0; t < inhomogeneous_trials; ++t) {
      DenseOperator e = DenseOperator::zero(l);
      for (int k = 0; k < 3; ++k) {
        int i = qd(rng), j = qd(rng);
        while (j == i) j = qd(rng);
        const Pauli a = detail::random_axis(rng);
        Pauli b = detail::random_axis(rng);
        while (b == a) b = detail::random_axis(rng);
        const DenseOperator s = embed_pauli(a, i, l.system_only()) * embed_pauli(b, j, l.system_only());
        e = e + kron_system_bath(s, random_hermitian(l.bath_only(), 1.0, rng));
      }
      worst_inhom = std::max(worst_inhom, decoupling_residual(rep, e));
    }
    double least_hom = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
          const DenseOperator s = embed_pauli(p, i, l.system_only()) * embed_pauli(p, j, l.system_only());
          least_hom = std::min(least_hom, decoupling_residual(rep, embed_system(s, l)));
        }
      }
    }
    r.passed = worst_linear <= 1e-12 && worst_inhom <= 1e-12 && least_hom >= 1.0;
    r.detail = "single-qubit max " + detail::sci(worst_linear) + ", inhomogeneous max " + detail::sci(worst_inhom) +
               ", homogeneous min " + detail::sci(least_hom);
  });
}

namespace detail {

inline Generator random_generator(int n_system, Rng& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> qd(0, n_system - 1);
  const int q = qd(rng);
  switch (kind(rng)) {
    case 0: return Generator::x(q);
    case 1: return Generator::y(q);
    default: {
      int p = qd(rng);
      while (p == q) p = qd(rng);
      return Generator::zz(q, p);
    }
  }
}

// True for single-qubit strings and σ_α^(i)σ_β^(j) with α ≠ β.
inline bool in_correctable_set(const PauliString& s) {
  if (s.weight() == 1) return true;
  if (s.weight() != 2) return false;
  Pauli first = Pauli::I;
  for (Pauli p : s.ops) {
    if (p == Pauli::I) continue;
    if (first == Pauli::I) first = p;
    else return p != first;
  }
  return false;
}

}  // namespace detail

/// The identity arm and the gate arm share one first-order error phase, and
/// that phase stays inside the correctable set.
inline CheckResult check_equal_error_pair(std::uint64_t seed = 12, int models = 50) {
  return detail::timed("equal-error pair", [&](CheckResult& r) {
    Rng rng(seed);
    const int n = 3;
    const QubitLayout l{n, 1};
    std::uniform_real_distribution<double> phi_d(0.05, std::numbers::pi);
    double worst_gap = 0.0;
    double worst_outside = 0.0;
    for (int m = 0; m < models; ++m) {
      const ErrorModel em = ErrorModel::random_linear(l, 1.0, 1.0, rng);
      const Generator g = detail::random_generator(n, rng);
      const double tau = 1.0;
      const double theta = phi_d(rng) / (2.0 * tau);
      const DenseOperator p1 = first_order_phase(seq_h1(theta, tau, g, n), em);
      const DenseOperator p2 = first_order_phase(seq_h2(theta, tau, g, n), em);
      worst_gap = std::max(worst_gap, detail::hermitian_norm(p1 - p2));
      for (const auto& [label, b] : pauli_bath_components(p2)) {
        const PauliString s(label);
        if (s.weight() == 0 || detail::in_correctable_set(s)) continue;
        worst_outside = std::max(worst_outside, b.max_abs());
      }
    }
    r.passed = worst_gap <= 1e-10 && worst_outside <= 1e-10;
    r.detail = std::to_string(models) + " models; max |Phi1 - Phi2| " + detail::sci(worst_gap) +
               ", max component outside correctable set " + detail::sci(worst_outside);
  });
}

/// First-order error phases of EDD NOOPs and of DCGs vanish modulo the bath.
inline CheckResult check_first_order_cancellation(std::uint64_t seed = 13, int trials = 20) {
  return detail::timed("first-order cancellation", [&](CheckResult& r) {
    Rng rng(seed);
    const int n = 3;
    const QubitLayout l{n, 1};
    std::uniform_real_distribution<double> theta_d(0.0, std::numbers::pi);
    std::uniform_int_distribution<int> qd(0, n - 1);
    double worst_noop = 0.0;
    double worst_dcg = 0.0;
    for (int t = 0; t < trials; ++t) {
      const ErrorModel em = ErrorModel::random_linear(l, 1.0, 1.0, rng);
      worst_noop = std::max(worst_noop, detail::hermitian_norm(mod_bath(first_order_phase(compile_noop(n), em))));
      const int q = qd(rng);
      int p = qd(rng);
      while (p == q) p = qd(rng);
      for (const GateSpec& g : {GateSpec::x(q, theta_d(rng)), GateSpec::y(q, theta_d(rng)), GateSpec::zz(q, p, theta_d(rng))}) {
        worst_dcg = std::max(worst_dcg, detail::hermitian_norm(mod_bath(first_order_phase(compile_dcg(g, n), em))));
      }
    }
    r.passed = worst_noop <= 1e-10 && worst_dcg <= 1e-10;
    r.detail = std::to_string(trials) + " models x {noop, X, Y, ZZ}; noop max " + detail::sci(worst_noop) +
               ", dcg max " + detail::sci(worst_dcg);
  });
}

struct EpgSweepPoint {
  double tau = 0.0;
  double epg_exact = 0.0;
  double epg_first_order = 0.0;
  double residual = 0.0;  // ‖(Φ − Φ^[1]) mod B‖
};

/// Exact and first-order EPG of one gate at each τ, for a fixed error model.
inline std::vector<EpgSweepPoint> epg_tau_sweep(const GateSpec& gate, CompileMode mode, const ErrorModel& em,
                                                const std::vector<double>& taus, const PulseShape& shape = PulseShape::rectangular()) {
  std::vector<EpgSweepPoint> out;
  const int n = em.layout().n_system;
  for (double tau : taus) {
    CompileOptions opt;
    opt.tau = tau;
    opt.shape = shape;
    const PulseSequence seq = compile_circuit({gate}, mode, n, opt);
    const ErrorPhaseReport rep = error_phase(seq, em);
    out.push_back({tau, rep.epg_exact, rep.epg_first, detail::hermitian_norm(rep.phi_exact_mod_b - rep.phi_first_mod_b)});
  }
  return out;
}

inline std::vector<double> geometric_range(double start, double stop, int points) {
  if (points < 1 || !(start > 0.0) || !(stop > 0.0)) throw std::invalid_argument("geometric_range: need positive endpoints and points >= 1");
  std::vector<double> out;
  for (int k = 0; k < points; ++k) {
    const double f = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    out.push_back(start * std::pow(stop / start, f));
  }
  return out;
}

/// Log-log slopes of exact EPG against τ for a DCG ZZ gate and for the
/// matching primitive pulse, on a fixed 2-system / 2-bath model.
inline CheckResult check_epg_scaling(std::uint64_t seed = 14) {
  return detail::timed("quadratic EPG scaling", [&](CheckResult& r) {
    Rng rng(seed);
    const ErrorModel em = ErrorModel::random_linear({2, 2}, 0.5, 0.25, rng);
    std::vector<double> taus;
    for (int k = 4; k <= 10; ++k) taus.push_back(std::ldexp(1.0, -k));
    const GateSpec g = GateSpec::zz(0, 1, 0.9);
    std::vector<double> dcg_e, prim_e;
    for (const auto& p : epg_tau_sweep(g, CompileMode::Dcg, em, taus)) dcg_e.push_back(p.epg_exact);
    for (const auto& p : epg_tau_sweep(g, CompileMode::Primitive, em, taus)) prim_e.push_back(p.epg_exact);
    const double sd = loglog_slope(taus, dcg_e);
    const double sp = loglog_slope(taus, prim_e);
    r.passed = sd >= 1.8 && sd <= 2.2 && sp >= 0.9 && sp <= 1.1;
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << "dcg slope " << sd << " (want [1.8, 2.2]), primitive slope " << sp
       << " (want [0.9, 1.1])";
    r.detail = os.str();
  });
}

/// Structural constants of this implementation.
inline CheckResult check_structure() {
  return detail::timed("structural constants", [&](CheckResult& r) {
    const int noop = static_cast<int>(compile_noop(3).slot_count(1.0));
    const int dcg = static_cast<int>(compile_dcg(GateSpec::zz(0, 1, 0.4), 3).slot_count(1.0));
    const CayleyGraph mg = modify_graph_for_gate(cayley_graph(dd_group_z2z2(3)));
    std::size_t prims = 0;
    for (const auto& g : cat_circuit()) prims += decompose_gate(g).size();
    const int slots = static_cast<int>(compile_circuit(cat_circuit(), CompileMode::Dcg, 3).slot_count(1.0));
    const Eigen::VectorXcd psi = circuit_unitary(cat_circuit(), 3).matrix().col(0);
    const double overlap = std::abs(cat_state(3).dot(psi));
    r.passed = noop == 8 && dcg == 16 && mg.vertex_count() == 5 && mg.edge_count() == 12 && prims == 16 &&
               slots == 256 && std::abs(overlap - 1.0) <= 1e-10;
    r.detail = "noop " + std::to_string(noop) + ", dcg " + std::to_string(dcg) + ", graph " +
               std::to_string(mg.vertex_count()) + "/" + std::to_string(mg.edge_count()) + ", cat primitives " +
               std::to_string(prims) + ", cat slots " + std::to_string(slots) + ", cat overlap " + detail::sci(overlap);
  });
}

namespace detail {

inline std::vector<BenchmarkRecord> curve(const std::vector<BenchmarkRecord>& recs, double eps, CompileMode mode) {
  std::vector<BenchmarkRecord> out;
  for (const auto& r : recs) {
    if (r.epsilon == eps && r.mode == mode) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.a > b.a; });
  return out;
}

}  // namespace detail

/// DCG beats primitive below log10 A = `cutoff`, and on log-log axes the DCG
/// loss falls at least 1.5× as fast as the primitive loss over the `tail`
/// smallest A values.
inline CheckResult check_cone(const std::vector<BenchmarkRecord>& recs, double cutoff = -2.2, std::size_t tail = 6) {
  return detail::timed("cone of improvement", [&](CheckResult& r) {
    const auto prim = detail::curve(recs, 0.0, CompileMode::Primitive);
    const auto dcg = detail::curve(recs, 0.0, CompileMode::Dcg);
    if (prim.size() != dcg.size() || prim.size() < tail) throw std::runtime_error("incomplete epsilon=0 curves");
    bool below = true;
    std::string worst;
    for (std::size_t i = 0; i < prim.size(); ++i) {
      if (prim[i].a != dcg[i].a) throw std::runtime_error("curves sampled at different A");
      if (std::log10(prim[i].a) <= cutoff + 1e-9 && !(dcg[i].fidelity_loss < prim[i].fidelity_loss)) {
        below = false;
        worst = " (fails at log10 A = " + detail::sci(std::log10(prim[i].a)) + ")";
      }
    }
    std::vector<double> x, y;
    for (std::size_t i = prim.size() - tail; i < prim.size(); ++i) {
      x.push_back(prim[i].fidelity_loss);
      y.push_back(dcg[i].fidelity_loss);
    }
    const double slope = loglog_slope(x, y);
    r.passed = below && slope >= 1.5;
    std::ostringstream os;
    os << "dcg < primitive for log10 A <= " << cutoff << ": " << (below ? "yes" : "no") << worst
       << "; slope over " << tail << " smallest A " << std::fixed << std::setprecision(3) << slope;
    r.detail = os.str();
  });
}

/// With ε > 0 the DCG loss levels off at small A while the ε = 0 curve keeps
/// falling.
inline CheckResult check_plateau(const std::vector<BenchmarkRecord>& recs, double eps = 1e-3, std::size_t tail = 3) {
  return detail::timed("systematic-error plateau", [&](CheckResult& r) {
    const auto noisy = detail::curve(recs, eps, CompileMode::Dcg);
    const auto clean = detail::curve(recs, 0.0, CompileMode::Dcg);
    if (noisy.size() < tail || clean.size() < tail) throw std::runtime_error("incomplete dcg curves");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = noisy.size() - tail; i < noisy.size(); ++i) {
      lo = std::min(lo, noisy[i].fidelity_loss);
      hi = std::max(hi, noisy[i].fidelity_loss);
    }
    const double spread = (hi - lo) / lo;
    const double drop = clean[clean.size() - tail].fidelity_loss / clean.back().fidelity_loss;
    r.passed = spread < 0.2 && drop >= 10.0;
    r.detail = "eps=" + detail::sci(eps) + " relative spread " + detail::sci(spread) + " (want < 0.2); eps=0 drop " +
               detail::sci(drop) + "x (want >= 10)";
  });
}

/// Primitive-mode loss never decreases as A grows (ε = 0).
inline CheckResult check_monotone(const std::vector<BenchmarkRecord>& recs) {
  return detail::timed("primitive monotonicity", [&](CheckResult& r) {
    const auto prim = detail::curve(recs, 0.0, CompileMode::Primitive);
    r.passed = true;
    for (std::size_t i = 1; i < prim.size(); ++i) {
      if (prim[i].fidelity_loss > prim[i - 1].fidelity_loss) r.passed = false;
    }
    double worst_trace = 0.0;
    for (const auto& rec : recs) {
      worst_trace = std::max(worst_trace, std::abs(rec.rho_trace - 1.0));
      if (rec.fidelity_loss < 0.0 || rec.fidelity_loss > 1.0 + 1e-9) r.passed = false;
    }
    r.passed = r.passed && worst_trace <= 1e-9;
    r.detail = std::to_string(prim.size()) + " primitive points; max |tr rho - 1| " + detail::sci(worst_trace);
  });
}

}  // namespace dcg
