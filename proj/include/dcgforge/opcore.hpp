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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dcg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Raised on shape mismatches, bad indices and similar contract violations.
class OperatorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by hermitian_log when an eigenphase sits too close to the branch cut.
class BranchGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Pauli : std::uint8_t { I, X, Y, Z };

inline char to_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': case '_': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw OperatorError(std::string("not a Pauli label: ") + c);
  }
}

inline Matrix pauli_matrix(Pauli p) {
  Matrix m = Matrix::Zero(2, 2);
  switch (p) {
    case Pauli::I: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case Pauli::X: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case Pauli::Y: m(0, 1) = -kI; m(1, 0) = kI; break;
    case Pauli::Z: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

/// Split of a register into system qubits (leftmost tensor factors) and bath
/// qubits (rightmost). Qubit 0 is the most significant bit of a basis index.
struct QubitLayout {
  int n_system = 0;
  int n_bath = 0;

  int total() const { return n_system + n_bath; }
  Index dim() const { return Index{1} << total(); }
  Index system_dim() const { return Index{1} << n_system; }
  Index bath_dim() const { return Index{1} << n_bath; }
  QubitLayout system_only() const { return {n_system, 0}; }
  QubitLayout bath_only() const { return {0, n_bath}; }

  friend bool operator==(const QubitLayout&, const QubitLayout&) = default;
};

inline std::string to_string(const QubitLayout& l) {
  return "(" + std::to_string(l.n_system) + "s+" + std::to_string(l.n_bath) + "b)";
}

/// A complex square matrix on 2^(n_system + n_bath) dimensions. Immutable once
/// built; arithmetic returns new operators and checks layouts.
class DenseOperator {
 public:
  DenseOperator() = default;

  DenseOperator(Matrix m, QubitLayout layout) : m_(std::move(m)), layout_(layout) {
    if (layout_.n_system < 0 || layout_.n_bath < 0) {
      throw OperatorError("negative qubit count");
    }
    if (m_.rows() != layout_.dim() || m_.cols() != layout_.dim()) {
      throw OperatorError("matrix is " + std::to_string(m_.rows()) + "x" +
                          std::to_string(m_.cols()) + " but layout " +
                          to_string(layout_) + " needs dimension " +
                          std::to_string(layout_.dim()));
    }
  }

  static DenseOperator zero(QubitLayout l) { return {Matrix::Zero(l.dim(), l.dim()), l}; }
  static DenseOperator identity(QubitLayout l) {
    return {Matrix::Identity(l.dim(), l.dim()), l};
  }

  const Matrix& matrix() const { return m_; }
  QubitLayout layout() const { return layout_; }
  Index dim() const { return m_.rows(); }
  int n_system() const { return layout_.n_system; }
  int n_bath() const { return layout_.n_bath; }
  Complex operator()(Index r, Index c) const { return m_(r, c); }

  DenseOperator adjoint() const { return {m_.adjoint(), layout_}; }
  Complex trace() const { return m_.trace(); }

  double hermiticity_defect() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

  bool is_hermitian(double tol = 1e-12) const {
    return hermiticity_defect() <= tol * std::max(1.0, max_abs());
  }

  bool is_unitary(double tol = 1e-10) const {
    const Matrix d = m_.adjoint() * m_ - Matrix::Identity(dim(), dim());
    return d.cwiseAbs().maxCoeff() <= tol;
  }

  double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

  friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
    check_same(a, b, "+");
    return {a.m_ + b.m_, a.layout_};
  }
  friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
    check_same(a, b, "-");
    return {a.m_ - b.m_, a.layout_};
  }
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    check_same(a, b, "*");
    return {a.m_ * b.m_, a.layout_};
  }
  friend DenseOperator operator*(Complex s, const DenseOperator& a) { return {s * a.m_, a.layout_}; }
  friend DenseOperator operator*(double s, const DenseOperator& a) { return {s * a.m_, a.layout_}; }

 private:
  static void check_same(const DenseOperator& a, const DenseOperator& b, const char* op) {
    if (!(a.layout_ == b.layout_)) {
      throw OperatorError(std::string("layout mismatch in operator") + op + ": " +
                          to_string(a.layout_) + " vs " + to_string(b.layout_));
    }
  }

  Matrix m_;
  QubitLayout layout_;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// S ⊗ B on the joint layout formed by the two factors.
inline DenseOperator kron_system_bath(const DenseOperator& sys, const DenseOperator& bath) {
  if (sys.n_bath() != 0 || bath.n_system() != 0) {
    throw OperatorError("kron_system_bath expects a pure system and a pure bath operator");
  }
  return {kron(sys.matrix(), bath.matrix()), {sys.n_system(), bath.n_bath()}};
}

/// Lifts a system-space operator to S ⊗ I_B on `joint`.
inline DenseOperator embed_system(const DenseOperator& sys, QubitLayout joint) {
  if (sys.layout() == joint) return sys;
  if (sys.n_bath() != 0 || sys.n_system() != joint.n_system) {
    throw OperatorError("cannot embed " + to_string(sys.layout()) + " into " + to_string(joint));
  }
  return {kron(sys.matrix(), Matrix::Identity(joint.bath_dim(), joint.bath_dim())), joint};
}

/// σ_axis on `qubit` with identities elsewhere; layout is system or joint.
inline DenseOperator embed_pauli(Pauli axis, int qubit, QubitLayout layout) {
  if (qubit < 0 || qubit >= layout.total()) {
    throw OperatorError("qubit index " + std::to_string(qubit) + " out of range for " +
                        std::to_string(layout.total()) + " qubits");
  }
  const Index left = Index{1} << qubit;
  const Index right = Index{1} << (layout.total() - qubit - 1);
  Matrix m = kron(kron(Matrix::Identity(left, left), pauli_matrix(axis)),
                  Matrix::Identity(right, right));
  return {std::move(m), layout};
}

inline DenseOperator embed_pauli(Pauli axis, int qubit, int n_total) {
  return embed_pauli(axis, qubit, QubitLayout{n_total, 0});
}

/// Tensor product of single-qubit Paulis over the system register.
struct PauliString {
  std::vector<Pauli> ops;

  PauliString() = default;
  explicit PauliString(std::vector<Pauli> p) : ops(std::move(p)) {}
  explicit PauliString(std::string_view s) {
    ops.reserve(s.size());
    for (char c : s) ops.push_back(pauli_from_char(c));
  }

  static PauliString single(int n, int qubit, Pauli p) {
    PauliString s(std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::I));
    s.ops.at(static_cast<std::size_t>(qubit)) = p;
    return s;
  }

  int size() const { return static_cast<int>(ops.size()); }

  /// Number of non-identity factors.
  int weight() const {
    return static_cast<int>(std::count_if(ops.begin(), ops.end(), [](Pauli p) { return p != Pauli::I; }));
  }

  std::string str() const {
    std::string s;
    for (Pauli p : ops) s.push_back(to_char(p));
    return s;
  }

  Matrix matrix() const {
    Matrix m = Matrix::Identity(1, 1);
    for (Pauli p : ops) m = kron(m, pauli_matrix(p));
    return m;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// All 4^n strings, qubit 0 varying slowest.
inline std::vector<PauliString> all_pauli_strings(int n) {
  std::vector<PauliString> out;
  const std::size_t count = std::size_t{1} << (2 * n);
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<Pauli> ops(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      ops[static_cast<std::size_t>(q)] = static_cast<Pauli>((code >> (2 * (n - 1 - q))) & 3U);
    }
    out.emplace_back(std::move(ops));
  }
  return out;
}

/// σ_s ⊗ I_B, with σ_s acting on the system part of `layout`.
inline DenseOperator embed_pauli_string(const PauliString& s, QubitLayout layout) {
  if (s.size() != layout.n_system) {
    throw OperatorError("Pauli string length " + std::to_string(s.size()) +
                        " does not match n_system=" + std::to_string(layout.n_system));
  }
  return embed_system(DenseOperator(s.matrix(), layout.system_only()), layout);
}

/// Cached eigendecomposition of a Hermitian operator; exp(-iHt) for any t
/// reuses it.
class HermitianEigen {
 public:
  explicit HermitianEigen(const DenseOperator& h) : layout_(h.layout()) {
    if (!h.is_hermitian()) {
      throw OperatorError("operator is not Hermitian (defect " +
                          std::to_string(h.hermiticity_defect()) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    if (es.info() != Eigen::Success) throw OperatorError("eigendecomposition failed");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Matrix& eigenvectors() const { return vectors_; }
  QubitLayout layout() const { return layout_; }

  /// exp(-i H t)
  DenseOperator propagator(double t) const {
    Eigen::VectorXcd phases = (-kI * t * values_.cast<Complex>()).array().exp();
    return {vectors_ * phases.asDiagonal() * vectors_.adjoint(), layout_};
  }

  /// exp(-i H t)·states without forming the propagator.
  Matrix apply(double t, const Matrix& states) const {
    const Eigen::VectorXcd phases = (-kI * t * values_.cast<Complex>()).array().exp();
    return vectors_ * (phases.asDiagonal() * (vectors_.adjoint() * states));
  }

  double spectral_norm() const { return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff(); }

 private:
  QubitLayout layout_;
  Eigen::VectorXd values_;
  Matrix vectors_;
};

/// exp(-i H t) via Hermitian eigendecomposition.
inline DenseOperator expm_unitary(const DenseOperator& h, double t) {
  return HermitianEigen(h).propagator(t);
}

inline constexpr double kBranchGuard = 1e-6;

/// Hermitian Φ with exp(-iΦ) = V on the principal branch. V must be unitary.
inline DenseOperator hermitian_log(const DenseOperator& v, double branch_guard = kBranchGuard) {
  if (!v.is_unitary(1e-9)) throw OperatorError("hermitian_log: operator is not unitary");
  // Schur form of a normal matrix is diagonal with a unitary basis, which
  // stays orthonormal through degenerate eigenphases.
  Eigen::ComplexSchur<Matrix> schur(v.matrix());
  if (schur.info() != Eigen::Success) throw OperatorError("hermitian_log: Schur decomposition failed");
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();
  Eigen::VectorXd phases(t.rows());
  for (Index k = 0; k < t.rows(); ++k) {
    // V = exp(-iΦ) so an eigenvalue e^{-iφ} maps to φ = -arg.
    const double phi = -std::arg(t(k, k));
    if (std::abs(phi) > std::numbers::pi - branch_guard) {
      throw BranchGuardError("hermitian_log: eigenphase " + std::to_string(phi) +
                             " within branch guard of ±π; shorten the interval");
    }
    phases(k) = phi;
  }
  Matrix phi = q * phases.cast<Complex>().asDiagonal() * q.adjoint();
  phi = 0.5 * (phi + phi.adjoint()).eval();
  return {std::move(phi), v.layout()};
}

/// Tr_S A, returned on the bath-only layout.
inline DenseOperator partial_trace_system(const DenseOperator& a) {
  const QubitLayout l = a.layout();
  const Index ds = l.system_dim();
  const Index db = l.bath_dim();
  Matrix out = Matrix::Zero(db, db);
  for (Index s = 0; s < ds; ++s) out += a.matrix().block(s * db, s * db, db, db);
  return {std::move(out), l.bath_only()};
}

/// Tr_B ρ, returned on the system-only layout.
inline DenseOperator partial_trace_bath(const DenseOperator& rho) {
  const QubitLayout l = rho.layout();
  const Index ds = l.system_dim();
  const Index db = l.bath_dim();
  Matrix out(ds, ds);
  for (Index i = 0; i < ds; ++i) {
    for (Index j = 0; j < ds; ++j) out(i, j) = rho.matrix().block(i * db, j * db, db, db).trace();
  }
  return {std::move(out), l.system_only()};
}

/// A − I_S ⊗ Tr_S(A) / 2^n: strips pure-bath terms.
inline DenseOperator mod_bath(const DenseOperator& a) {
  const QubitLayout l = a.layout();
  const Matrix bath = partial_trace_system(a).matrix() / static_cast<double>(l.system_dim());
  Matrix out = a.matrix();
  const Index db = l.bath_dim();
  for (Index s = 0; s < l.system_dim(); ++s) out.block(s * db, s * db, db, db) -= bath;
  return {std::move(out), l};
}

/// Largest |eigenvalue| of a Hermitian operator.
inline double spectral_norm(const DenseOperator& a) {
  if (a.dim() == 0) return 0.0;
  if (!a.is_hermitian(1e-10)) throw OperatorError("spectral_norm: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double frobenius_norm(const DenseOperator& a) { return a.matrix().norm(); }

/// Bath operators B_s = 2^-n Tr_S[(σ_s ⊗ I) Φ] for every system Pauli string,
/// keyed by the string label ("XIZ"), so that Φ = Σ_s σ_s ⊗ B_s.
inline std::map<std::string, DenseOperator> pauli_bath_components(const DenseOperator& phi) {
  const QubitLayout l = phi.layout();
  const int n = l.n_system;
  const Index ds = l.system_dim();
  const Index db = l.bath_dim();
  const double norm = 1.0 / static_cast<double>(ds);
  std::map<std::string, DenseOperator> out;
  for (const PauliString& s : all_pauli_strings(n)) {
    // σ_s |i> = c(i) |i ^ flip>; only the flip pattern and phases are needed.
    Index flip = 0;
    for (int q = 0; q < n; ++q) {
      const Pauli p = s.ops[static_cast<std::size_t>(q)];
      if (p == Pauli::X || p == Pauli::Y) flip |= Index{1} << (n - 1 - q);
    }
    Matrix b = Matrix::Zero(db, db);
    for (Index i = 0; i < ds; ++i) {
      Complex c = 1.0;
      for (int q = 0; q < n; ++q) {
        const bool bit = (i >> (n - 1 - q)) & 1;
        switch (s.ops[static_cast<std::size_t>(q)]) {
          case Pauli::I: case Pauli::X: break;
          case Pauli::Y: c *= bit ? -kI : kI; break;
          case Pauli::Z: c *= bit ? -1.0 : 1.0; break;
        }
      }
      // (σ_s)_{i^flip, i} = c  =>  Tr_S[σ_s Φ]_{bb'} = Σ_i c Φ_{(i, b), (i^flip, b')}
      b += c * phi.matrix().block(i * db, (i ^ flip) * db, db, db);
    }
    out.emplace(s.str(), DenseOperator(norm * b, l.bath_only()));
  }
  return out;
}

/// Σ_s σ_s ⊗ B_s; inverse of pauli_bath_components.
inline DenseOperator reconstruct_from_components(const std::map<std::string, DenseOperator>& parts,
                                                 QubitLayout layout) {
  Matrix acc = Matrix::Zero(layout.dim(), layout.dim());
  for (const auto& [label, bath] : parts) {
    acc += kron(PauliString(label).matrix(), bath.matrix());
  }
  return {std::move(acc), layout};
}

}  // namespace dcg
