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

// Seeded random inputs for property tests.

#pragma once

#include "dcgforge/dcgforge.hpp"

namespace gen {

using dcg::Rng;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline dcg::Pauli axis(Rng& rng) { return static_cast<dcg::Pauli>(uniform_int(rng, 1, 3)); }

inline dcg::PauliString pauli_string(int n, Rng& rng) {
  std::vector<dcg::Pauli> ops;
  for (int q = 0; q < n; ++q) ops.push_back(static_cast<dcg::Pauli>(uniform_int(rng, 0, 3)));
  return dcg::PauliString(std::move(ops));
}

inline dcg::Generator generator(int n, Rng& rng) {
  const int q = uniform_int(rng, 0, n - 1);
  const int kind = n > 1 ? uniform_int(rng, 0, 2) : uniform_int(rng, 0, 1);
  if (kind == 0) return dcg::Generator::x(q);
  if (kind == 1) return dcg::Generator::y(q);
  int p = uniform_int(rng, 0, n - 1);
  while (p == q) p = uniform_int(rng, 0, n - 1);
  return dcg::Generator::zz(q, p);
}

inline dcg::GateSpec primitive(int n, Rng& rng) {
  const dcg::Generator g = generator(n, rng);
  const double phi = uniform(rng, 0.0, std::numbers::pi);
  switch (g.kind) {
    case dcg::Generator::Kind::X: return dcg::GateSpec::x(g.qubit, phi);
    case dcg::Generator::Kind::Y: return dcg::GateSpec::y(g.qubit, phi);
    default: return dcg::GateSpec::zz(g.qubit, g.partner, phi);
  }
}

inline dcg::PulseShape shape(Rng& rng) {
  switch (uniform_int(rng, 0, 2)) {
    case 0: return dcg::PulseShape::rectangular();
    case 1: return dcg::PulseShape::triangular();
    default: return dcg::PulseShape::ramp();
  }
}

/// Random bounded-strength segments; idle slots included with probability 1/5.
inline dcg::PulseSequence sequence(int n, int segments, Rng& rng, bool rect_only = true) {
  dcg::PulseSequence seq(n);
  for (int k = 0; k < segments; ++k) {
    const double dur = uniform(rng, 0.2, 1.0);
    if (uniform_int(rng, 0, 4) == 0) {
      seq.push_back(dcg::ControlSegment::idle(dur));
      continue;
    }
    seq.push_back({{generator(n, rng)}, uniform(rng, -2.0, 2.0), dur,
                   rect_only ? dcg::PulseShape::rectangular() : shape(rng), uniform_int(rng, 0, 1) == 1, 0.0});
  }
  return seq;
}

inline dcg::DenseOperator hermitian(dcg::QubitLayout l, double norm, Rng& rng) { return dcg::random_hermitian(l, norm, rng); }

inline dcg::DenseOperator unitary(dcg::QubitLayout l, Rng& rng) {
  return dcg::expm_unitary(dcg::random_hermitian(l, 3.0, rng), 1.0);
}

/// Random density matrix of full rank.
inline dcg::DenseOperator density(dcg::QubitLayout l, Rng& rng) {
  const dcg::Matrix g = dcg::random_complex_matrix(l.dim(), rng);
  dcg::Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return {rho, l};
}

}  // namespace gen
