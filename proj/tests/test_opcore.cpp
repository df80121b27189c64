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

#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dcg;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(DenseOperator, RejectsWrongDimension) {
  EXPECT_THROW(DenseOperator(Matrix::Identity(3, 3), {1, 0}), OperatorError);
  EXPECT_THROW(DenseOperator(Matrix::Identity(4, 4), {1, 0}), OperatorError);
  EXPECT_NO_THROW(DenseOperator(Matrix::Identity(8, 8), {1, 2}));
}

TEST(DenseOperator, LayoutMismatchThrows) {
  const auto a = DenseOperator::identity({1, 1});
  const auto b = DenseOperator::identity({2, 0});
  EXPECT_THROW(a + b, OperatorError);
  EXPECT_THROW(a * b, OperatorError);
}

TEST(DenseOperator, HermitianAndUnitaryFlags) {
  Rng rng(1);
  const auto h = gen::hermitian({2, 1}, 2.0, rng);
  EXPECT_TRUE(h.is_hermitian());
  EXPECT_LE(h.hermiticity_defect(), 1e-12);
  const auto u = expm_unitary(h, 0.7);
  EXPECT_TRUE(u.is_unitary());
  EXPECT_FALSE(DenseOperator(2.0 * Matrix::Identity(4, 4), {2, 0}).is_unitary());
  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  EXPECT_FALSE(DenseOperator(skew, {1, 0}).is_hermitian());
}

TEST(EmbedPauli, SingleQubitX) {
  const auto x = embed_pauli(Pauli::X, 0, 1);
  Matrix want(2, 2);
  want << 0, 1, 1, 0;
  EXPECT_EQ(x.matrix(), want);
}

TEST(EmbedPauli, ZOnSecondOfTwo) {
  const auto z = embed_pauli(Pauli::Z, 1, 2);
  Matrix want = Matrix::Zero(4, 4);
  want.diagonal() << 1, -1, 1, -1;
  EXPECT_EQ(z.matrix(), want);
}

TEST(EmbedPauli, YSquaresToIdentityTraceless) {
  const auto y = embed_pauli(Pauli::Y, 2, 4);
  EXPECT_LE(max_diff((y * y).matrix(), Matrix::Identity(16, 16)), 1e-15);
  EXPECT_EQ(y.trace(), Complex(0.0));
}

TEST(EmbedPauli, MatchesOracleKronecker) {
  for (int n = 1; n <= 4; ++n) {
    for (int q = 0; q < n; ++q) {
      for (char c : {'X', 'Y', 'Z'}) {
        std::string s(static_cast<std::size_t>(n), 'I');
        s[static_cast<std::size_t>(q)] = c;
        EXPECT_EQ(embed_pauli(pauli_from_char(c), q, n).matrix(), oracle::pauli_string(s)) << s;
      }
    }
  }
}

TEST(EmbedPauli, OutOfRangeQubitThrows) {
  EXPECT_THROW(embed_pauli(Pauli::X, 3, 3), std::exception);
  EXPECT_THROW(embed_pauli(Pauli::X, -1, 3), std::exception);
}

TEST(PauliString, ParsesAndPrints) {
  const PauliString s("XIZ");
  EXPECT_EQ(s.str(), "XIZ");
  EXPECT_EQ(s.weight(), 2);
  EXPECT_EQ(s.matrix(), oracle::pauli_string("XIZ"));
  EXPECT_EQ(all_pauli_strings(2).size(), 16U);
  EXPECT_THROW(PauliString("XQ"), std::exception);
}

TEST(ExpmUnitary, ZeroHamiltonianIsIdentity) {
  const auto u = expm_unitary(DenseOperator::zero({2, 1}), 3.1);
  EXPECT_LE(max_diff(u.matrix(), Matrix::Identity(8, 8)), 1e-15);
}

TEST(ExpmUnitary, HalfXRotation) {
  const auto x = embed_pauli(Pauli::X, 0, 1);
  const auto u = expm_unitary(x, std::numbers::pi / 2);
  EXPECT_LE(max_diff(u.matrix(), Complex(0, -1) * x.matrix()), 1e-15);
}

TEST(ExpmUnitary, MatchesPadeOracle16) {
  Rng rng(2);
  const auto h = gen::hermitian({2, 2}, 3.0, rng);
  EXPECT_LE(max_diff(expm_unitary(h, 0.37).matrix(), oracle::expm(h.matrix(), 0.37)), 1e-10);
}

TEST(ExpmUnitary, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(expm_unitary(DenseOperator(m, {1, 0}), 1.0), OperatorError);
}

TEST(ExpmUnitaryProperty, UnitaryUpToNorm1000) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int ns = gen::uniform_int(rng, 1, 2);
    const int nb = gen::uniform_int(rng, 0, 2);
    const double norm = std::pow(10.0, gen::uniform(rng, -3.0, 3.0));
    const auto h = gen::hermitian({ns, nb}, norm, rng);
    EXPECT_TRUE(expm_unitary(h, 1.0).is_unitary(1e-10)) << "norm " << norm;
  }
}

TEST(HermitianLog, IdentityGivesZero) {
  EXPECT_LE(hermitian_log(DenseOperator::identity({2, 1})).max_abs(), 1e-15);
}

TEST(HermitianLog, DiagonalCase) {
  const auto z = embed_pauli(Pauli::Z, 0, 1);
  const auto phi = hermitian_log(expm_unitary(z, 0.3));
  EXPECT_LE(max_diff(phi.matrix(), 0.3 * z.matrix()), 1e-14);
}

TEST(HermitianLog, RoundTripSmall) {
  Rng rng(4);
  const auto phi0 = gen::hermitian({2, 1}, 0.1, rng);
  EXPECT_LE(max_diff(hermitian_log(expm_unitary(phi0, 1.0)).matrix(), phi0.matrix()), 1e-10);
}

TEST(HermitianLogProperty, RoundTripBelowPi) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const double norm = gen::uniform(rng, 0.0, std::numbers::pi - 1e-3);
    const auto phi0 = gen::hermitian({gen::uniform_int(rng, 1, 2), gen::uniform_int(rng, 0, 2)}, norm, rng);
    EXPECT_LE(max_diff(hermitian_log(expm_unitary(phi0, 1.0)).matrix(), phi0.matrix()), 1e-9) << norm;
  }
}

TEST(HermitianLog, DegenerateEigenphases) {
  // Heavily degenerate spectrum: Schur basis must stay orthonormal.
  const auto zz = embed_pauli(Pauli::Z, 0, 3) * embed_pauli(Pauli::Z, 1, 3);
  const auto phi = hermitian_log(expm_unitary(zz, 0.8));
  EXPECT_LE(max_diff(phi.matrix(), 0.8 * zz.matrix()), 1e-13);
}

TEST(HermitianLog, BranchGuardNearPi) {
  const auto z = embed_pauli(Pauli::Z, 0, 1);
  EXPECT_THROW(hermitian_log(expm_unitary(z, std::numbers::pi - 1e-8)), BranchGuardError);
  EXPECT_NO_THROW(hermitian_log(expm_unitary(z, std::numbers::pi - 1e-3)));
}

TEST(HermitianLog, RejectsNonUnitary) {
  EXPECT_THROW(hermitian_log(DenseOperator(2.0 * Matrix::Identity(2, 2), {1, 0})), OperatorError);
}

TEST(ModBath, PureBathTermRemoved) {
  Rng rng(6);
  const QubitLayout l{2, 2};
  const auto hb = gen::hermitian(l.bath_only(), 1.0, rng);
  EXPECT_LE(mod_bath(kron_system_bath(DenseOperator::identity(l.system_only()), hb)).max_abs(), 1e-15);
}

TEST(ModBath, TracelessSystemPartUnchanged) {
  Rng rng(7);
  const QubitLayout l{2, 1};
  const auto e = kron_system_bath(embed_pauli(Pauli::Z, 1, l.system_only()), gen::hermitian(l.bath_only(), 1.0, rng));
  EXPECT_LE(max_diff(mod_bath(e).matrix(), e.matrix()), 1e-15);
}

TEST(ModBathProperty, IdempotentAndBounded) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const QubitLayout l{gen::uniform_int(rng, 1, 3), gen::uniform_int(rng, 0, 2)};
    const auto a = gen::hermitian(l, gen::uniform(rng, 0.1, 5.0), rng);
    const auto m = mod_bath(a);
    EXPECT_LE(max_diff(mod_bath(m).matrix(), m.matrix()), 1e-13);
    EXPECT_LE(spectral_norm(m), 2.0 * spectral_norm(a) + 1e-12);
    // Oracle: A − I ⊗ Tr_S(A)/2^n by explicit partial trace.
    const Matrix want = a.matrix() - oracle::kron(oracle::identity(l.system_dim()),
                                                  oracle::partial_trace_left(a.matrix(), l.n_system, l.n_bath)) /
                                         static_cast<double>(l.system_dim());
    EXPECT_LE(max_diff(m.matrix(), want), 1e-13);
  }
}

TEST(ModBathProperty, Linear) {
  Rng rng(9);
  const QubitLayout l{2, 2};
  const auto a = gen::hermitian(l, 1.0, rng);
  const auto b = gen::hermitian(l, 1.0, rng);
  EXPECT_LE(max_diff(mod_bath(0.3 * a + (-1.7) * b).matrix(), (0.3 * mod_bath(a) + (-1.7) * mod_bath(b)).matrix()), 1e-13);
}

TEST(SpectralNorm, Basics) {
  EXPECT_DOUBLE_EQ(spectral_norm(embed_pauli(Pauli::Z, 0, 1)), 1.0);
  EXPECT_DOUBLE_EQ(spectral_norm(DenseOperator::zero({2, 1})), 0.0);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(spectral_norm(DenseOperator(m, {1, 0})), OperatorError);
}

TEST(SpectralNormProperty, MatchesPowerIteration) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = gen::hermitian({gen::uniform_int(rng, 1, 2), gen::uniform_int(rng, 0, 2)}, gen::uniform(rng, 0.1, 10.0), rng);
    // Random spectra can have near-degenerate ±λ_max; the power method on H²
    // converges regardless because it sees λ².
    EXPECT_NEAR(spectral_norm(h), oracle::power_norm(h.matrix()), 1e-8);
  }
}

TEST(PauliComponents, SingleTermIsolated) {
  Rng rng(11);
  const QubitLayout l{3, 1};
  const auto b = gen::hermitian(l.bath_only(), 1.0, rng);
  const auto phi = kron_system_bath(embed_pauli(Pauli::X, 0, l.system_only()), b);
  for (const auto& [label, op] : pauli_bath_components(phi)) {
    if (label == "XII") {
      EXPECT_LE(max_diff(op.matrix(), b.matrix()), 1e-15);
    } else {
      EXPECT_LE(op.max_abs(), 1e-15) << label;
    }
  }
}

TEST(PauliComponentsProperty, MatchesBruteForceAndReconstructs) {
  Rng rng(12);
  for (int trial = 0; trial < 12; ++trial) {
    const QubitLayout l{gen::uniform_int(rng, 1, 3), gen::uniform_int(rng, 0, 2)};
    const Matrix g = random_complex_matrix(l.dim(), rng);
    const DenseOperator phi(g, l);
    const auto comps = pauli_bath_components(phi);
    const auto brute = oracle::pauli_components(g, l.n_system, l.n_bath);
    ASSERT_EQ(comps.size(), brute.size());
    for (const auto& [label, op] : comps) EXPECT_LE(max_diff(op.matrix(), brute.at(label)), 1e-12) << label;
    EXPECT_LE(max_diff(reconstruct_from_components(comps, l).matrix(), g), 1e-12);
  }
}

TEST(PauliComponentsProperty, ReconstructsAtDim256) {
  Rng rng(13);
  const QubitLayout l{3, 5};
  const Matrix g = random_complex_matrix(l.dim(), rng);
  const auto comps = pauli_bath_components(DenseOperator(g, l));
  EXPECT_LE(max_diff(reconstruct_from_components(comps, l).matrix(), g), 1e-12);
}

TEST(PartialTrace, ProductStateGivesSystemFactor) {
  Rng rng(14);
  const auto rs = gen::density({2, 0}, rng);
  const auto rb = gen::density({0, 2}, rng);
  const auto joint = kron_system_bath(rs, rb);
  EXPECT_LE(max_diff(partial_trace_bath(joint).matrix(), rs.matrix()), 1e-14);
}

TEST(PartialTrace, UnitTraceAndOracle) {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const QubitLayout l{gen::uniform_int(rng, 1, 3), gen::uniform_int(rng, 0, 3)};
    const auto rho = gen::density(l, rng);
    const auto out = partial_trace_bath(rho);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
    EXPECT_LE(max_diff(out.matrix(), oracle::partial_trace_right(rho.matrix(), l.n_system, l.n_bath)), 1e-14);
  }
}

TEST(PartialTrace, BellStateGivesMaximallyMixed) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1.0 / std::numbers::sqrt2;
  const DenseOperator rho(psi * psi.adjoint(), {1, 1});
  EXPECT_LE(max_diff(partial_trace_bath(rho).matrix(), 0.5 * Matrix::Identity(2, 2)), 1e-15);
}

TEST(HermitianEigen, ApplyMatchesPropagator) {
  Rng rng(16);
  const auto h = gen::hermitian({2, 1}, 2.0, rng);
  const HermitianEigen eig(h);
  const Matrix states = random_complex_matrix(8, rng).leftCols(3);
  EXPECT_LE(max_diff(eig.apply(0.6, states), eig.propagator(0.6).matrix() * states), 1e-13);
}
