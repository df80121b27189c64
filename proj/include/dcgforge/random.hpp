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

#include <random>

namespace dcg {

using Rng = std::mt19937_64;

/// Ginibre matrix with unit-variance complex Gaussian entries.
inline Matrix random_complex_matrix(Index dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

/// Hermitian operator rescaled to the requested spectral norm.
inline DenseOperator random_hermitian(QubitLayout layout, double norm, Rng& rng) {
  const Matrix g = random_complex_matrix(layout.dim(), rng);
  Matrix h = 0.5 * (g + g.adjoint());
  const DenseOperator raw(h, layout);
  const double current = spectral_norm(raw);
  if (current > 0.0) h *= norm / current;
  return {std::move(h), layout};
}

/// Haar-random pure state as a column vector.
inline Eigen::VectorXcd random_state(Index dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(n(rng), n(rng));
  return v.normalized();
}

}  // namespace dcg
