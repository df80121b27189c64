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
#include "dcgforge/pulses.hpp"
#include "dcgforge/random.hpp"

#include <map>
#include <memory>

namespace dcg {

/// σ_s ⊗ B term of the system-bath interaction.
struct Coupling {
  PauliString system;
  DenseOperator bath;
};

/// H_e = I_S ⊗ H_B + Σ σ_s ⊗ B_s. Linear-decoherence models restrict σ_s to
/// single-qubit Paulis; `general` lifts that restriction.
class ErrorModel {
 public:
  ErrorModel(QubitLayout layout, DenseOperator h_bath, std::vector<Coupling> couplings,
             bool general = false)
      : layout_(layout), h_bath_(std::move(h_bath)), couplings_(std::move(couplings)), general_(general) {
    if (!(h_bath_.layout() == layout_.bath_only())) throw OperatorError("H_B must live on the bath register");
    if (!h_bath_.is_hermitian()) throw OperatorError("H_B is not Hermitian");
    norm_bound_ = spectral_norm(h_bath_);
    Matrix he = kron(Matrix::Identity(layout_.system_dim(), layout_.system_dim()), h_bath_.matrix());
    for (const auto& c : couplings_) {
      if (c.system.size() != layout_.n_system) throw OperatorError("coupling string has wrong length");
      if (!(c.bath.layout() == layout_.bath_only())) throw OperatorError("coupling bath operator on wrong register");
      if (!c.bath.is_hermitian()) throw OperatorError("coupling bath operator is not Hermitian");
      if (!general_ && c.system.weight() != 1) {
        throw OperatorError("linear decoherence allows single-qubit system factors only; got " + c.system.str());
      }
      he += kron(c.system.matrix(), c.bath.matrix());
      norm_bound_ += spectral_norm(c.bath);
    }
    he_ = DenseOperator(std::move(he), layout_);
  }

  static ErrorModel none(QubitLayout layout) {
    return {layout, DenseOperator::zero(layout.bath_only()), {}};
  }

  /// Random linear-decoherence model: H_B and every B_α^(i) are random
  /// Hermitian with the given spectral norms.
  static ErrorModel random_linear(QubitLayout layout, double bath_norm, double coupling_norm, Rng& rng) {
    std::vector<Coupling> cs;
    for (int q = 0; q < layout.n_system; ++q) {
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        cs.push_back({PauliString::single(layout.n_system, q, p), random_hermitian(layout.bath_only(), coupling_norm, rng)});
      }
    }
    return {layout, random_hermitian(layout.bath_only(), bath_norm, rng), std::move(cs)};
  }

  QubitLayout layout() const { return layout_; }
  const DenseOperator& hamiltonian() const { return he_; }
  const DenseOperator& h_bath() const { return h_bath_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }
  bool general() const { return general_; }

  /// ‖H_B‖ + Σ‖B_s‖, an upper bound on ‖H_e‖.
  double norm_bound() const { return norm_bound_; }

  /// H_SB alone (pure-bath part dropped).
  DenseOperator interaction() const {
    return he_ - kron_system_bath(DenseOperator::identity(layout_.system_only()), h_bath_);
  }

  /// Every bath operator multiplied by λ.
  ErrorModel scaled(double lambda) const {
    std::vector<Coupling> cs = couplings_;
    for (auto& c : cs) c.bath = lambda * c.bath;
    return {layout_, lambda * h_bath_, std::move(cs), general_};
  }

 private:
  QubitLayout layout_;
  DenseOperator h_bath_;
  std::vector<Coupling> couplings_;
  bool general_ = false;
  DenseOperator he_;
  double norm_bound_ = 0.0;
};

inline constexpr int kDefaultSubsteps = 64;

namespace detail {

/// Piecewise-constant approximation of one segment: (drive amplitude, dt)
/// pairs, sampled at subinterval midpoints for shaped pulses.
inline std::vector<std::pair<double, double>> constant_pieces(const ControlSegment& seg, int substeps) {
  if (seg.is_idle()) return {{0.0, seg.duration}};
  const int n = seg.shape.piecewise_constant ? 1 : std::max(1, substeps);
  const double dt = seg.duration / n;
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.emplace_back(profile_value(seg, (k + 0.5) * dt), dt);
  return out;
}

/// ∫₀^Δ e^{iωt} dt
inline Complex phase_integral(double omega, double delta) {
  const double x = omega * delta;
  if (std::abs(x) < 1e-5) return delta * Complex(1.0 - x * x / 6.0, x / 2.0);
  return (std::exp(kI * x) - 1.0) / (kI * omega);
}

}  // namespace detail

/// Exact propagation under (H_ctrl(t) ⊗ I_B + H_e). Eigendecompositions are
/// cached per distinct drive, so repeated pulses cost one matrix product.
class Propagator {
 public:
  explicit Propagator(ErrorModel em) : em_(std::move(em)) {}

  const ErrorModel& error_model() const { return em_; }

  /// exp(−i(amp·D⊗I + H_e)·dt) for drive terms D.
  DenseOperator step(const std::vector<Generator>& drive, double amp, double dt) {
    return eigen_for(drive, amp).propagator(dt);
  }

  DenseOperator propagate(const PulseSequence& seq, int substeps = kDefaultSubsteps) {
    check(seq);
    const QubitLayout l = em_.layout();
    Matrix u = Matrix::Identity(l.dim(), l.dim());
    for (const auto& seg : seq.segments()) {
      for (const auto& [amp, dt] : detail::constant_pieces(seg, substeps)) {
        u = step(seg.generators, amp, dt).matrix() * u;
      }
    }
    return {std::move(u), l};
  }

  /// Applies the sequence's joint propagator to the columns of `states`.
  Matrix apply(const PulseSequence& seq, Matrix states, int substeps = kDefaultSubsteps) {
    check(seq);
    for (const auto& seg : seq.segments()) {
      for (const auto& [amp, dt] : detail::constant_pieces(seg, substeps)) {
        states = eigen_for(seg.generators, amp).apply(dt, states);
      }
    }
    return states;
  }

  std::size_t cached_decompositions() const { return cache_.size(); }

 private:
  void check(const PulseSequence& seq) const {
    if (seq.n_system() != em_.layout().n_system) {
      throw OperatorError("sequence register (" + std::to_string(seq.n_system()) +
                          " qubits) does not match error model " + to_string(em_.layout()));
    }
  }

  const HermitianEigen& eigen_for(const std::vector<Generator>& drive, double amp) {
    std::vector<Generator> key_drive = amp == 0.0 ? std::vector<Generator>{} : drive;
    auto key = std::make_pair(std::move(key_drive), amp);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      const QubitLayout l = em_.layout();
      DenseOperator h = em_.hamiltonian();
      if (amp != 0.0) {
        DenseOperator d = DenseOperator::zero(l.system_only());
        for (const auto& g : drive) d = d + g.system_operator(l.n_system);
        h = h + amp * embed_system(d, l);
      }
      it = cache_.emplace(std::move(key), std::make_unique<HermitianEigen>(h)).first;
    }
    return *it->second;
  }

  ErrorModel em_;
  std::map<std::pair<std::vector<Generator>, double>, std::unique_ptr<HermitianEigen>> cache_;
};

/// Joint propagator U(T, 0) for the sequence under `em`.
inline DenseOperator propagate(const PulseSequence& seq, const ErrorModel& em, int substeps = kDefaultSubsteps) {
  Propagator p(em);
  return p.propagate(seq, substeps);
}

/// Richardson estimate of the midpoint-rule error of propagate(seq, em,
/// substeps): 4‖U_n − U_2n‖_max / 3. Zero for piecewise-constant shapes.
inline double midpoint_error_estimate(const PulseSequence& seq, const ErrorModel& em, int substeps = kDefaultSubsteps) {
  Propagator p(em);
  const Matrix a = p.propagate(seq, substeps).matrix();
  const Matrix b = p.propagate(seq, 2 * substeps).matrix();
  return 4.0 * (a - b).cwiseAbs().maxCoeff() / 3.0;
}

/// Toggling-frame integral ∫ U_ctrl†(t) H_e U_ctrl(t) dt over the sequence.
/// Each constant piece is integrated in closed form in the eigenbasis of its
/// control Hamiltonian.
inline DenseOperator first_order_phase(const PulseSequence& seq, const ErrorModel& em, int substeps = kDefaultSubsteps) {
  const QubitLayout l = em.layout();
  if (seq.n_system() != l.n_system) throw OperatorError("first_order_phase: register mismatch");
  const Index ds = l.system_dim();
  const Index db = l.bath_dim();
  const Matrix& he = em.hamiltonian().matrix();
  Matrix frame = Matrix::Identity(ds, ds);  // cumulative U_ctrl on the system
  Matrix acc = Matrix::Zero(l.dim(), l.dim());
  Matrix piece(l.dim(), l.dim());
  for (const auto& seg : seq.segments()) {
    const DenseOperator drive = seg.is_idle() ? DenseOperator::zero(l.system_only()) : seg.drive_operator(l.n_system);
    Eigen::SelfAdjointEigenSolver<Matrix> es(drive.matrix());
    const Matrix& v = es.eigenvectors();
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Matrix vj = kron(v, Matrix::Identity(db, db));
    const Matrix rotated = vj.adjoint() * he * vj;
    for (const auto& [amp, dt] : detail::constant_pieces(seg, substeps)) {
      for (Index a = 0; a < ds; ++a) {
        for (Index b = 0; b < ds; ++b) {
          const Complex k = detail::phase_integral(amp * (lam(a) - lam(b)), dt);
          piece.block(a * db, b * db, db, db) = k * rotated.block(a * db, b * db, db, db);
        }
      }
      const Matrix fj = kron(v.adjoint() * frame, Matrix::Identity(db, db));
      acc += fj.adjoint() * piece * fj;
      const Eigen::VectorXcd ph = (-kI * amp * dt * lam.cast<Complex>()).array().exp();
      frame = v * ph.asDiagonal() * v.adjoint() * frame;
    }
  }
  acc = 0.5 * (acc + acc.adjoint()).eval();
  return {std::move(acc), l};
}

/// Φ_U ≈ Σ_j F_{j−1}† Φ_j F_{j−1}, with F_j the cumulative product of the step
/// unitaries U_1..U_j. Step unitaries may be system-only; they are lifted.
inline DenseOperator combine_first_order(const std::vector<std::pair<DenseOperator, DenseOperator>>& parts) {
  if (parts.empty()) throw OperatorError("combine_first_order: no parts");
  const QubitLayout l = parts.front().second.layout();
  DenseOperator frame = DenseOperator::identity(l);
  DenseOperator acc = DenseOperator::zero(l);
  for (const auto& [step, phi] : parts) {
    if (!(phi.layout() == l)) throw OperatorError("combine_first_order: phase layouts differ");
    acc = acc + frame.adjoint() * phi * frame;
    frame = embed_system(step, l) * frame;
  }
  return acc;
}

struct ErrorPhaseReport {
  DenseOperator phi_exact;
  DenseOperator phi_first_order;
  DenseOperator phi_exact_mod_b;
  DenseOperator phi_first_mod_b;
  double epg_exact = 0.0;
  double epg_first = 0.0;
  std::map<std::string, DenseOperator> pauli_components;  // of phi_exact

  /// Φ^[2+] measured as Φ − Φ^[1].
  DenseOperator higher_order() const { return phi_exact - phi_first_order; }
};

namespace detail {
inline double hermitian_norm(const DenseOperator& a) { return spectral_norm(0.5 * (a + a.adjoint())); }
}  // namespace detail

/// Exact and first-order error phases of U = U_ctrl·exp(−iΦ). Throws
/// BranchGuardError when Φ has an eigenvalue near ±π.
inline ErrorPhaseReport error_phase(const PulseSequence& seq, const ErrorModel& em, int substeps = kDefaultSubsteps) {
  const QubitLayout l = em.layout();
  const DenseOperator u = propagate(seq, em, substeps);
  const DenseOperator uc = embed_system(intended_unitary(seq), l);
  ErrorPhaseReport r;
  r.phi_exact = hermitian_log(uc.adjoint() * u);
  r.phi_first_order = first_order_phase(seq, em, substeps);
  r.phi_exact_mod_b = mod_bath(r.phi_exact);
  r.phi_first_mod_b = mod_bath(r.phi_first_order);
  r.epg_exact = detail::hermitian_norm(r.phi_exact_mod_b);
  r.epg_first = detail::hermitian_norm(r.phi_first_mod_b);
  r.pauli_components = pauli_bath_components(r.phi_exact);
  return r;
}

/// ‖Φ mod B‖ of the exact error phase.
inline double epg(const PulseSequence& seq, const ErrorModel& em, int substeps = kDefaultSubsteps) {
  const QubitLayout l = em.layout();
  const DenseOperator u = propagate(seq, em, substeps);
  const DenseOperator uc = embed_system(intended_unitary(seq), l);
  return detail::hermitian_norm(mod_bath(hermitian_log(uc.adjoint() * u)));
}

}  // namespace dcg
