// Copyright 2026 The dyncool Authors
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

#include "dyncool/random.hpp"

#include <cmath>

namespace dyncool {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

Complex complex_normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

UnitaryOperator random_unitary(Index dim, Rng& rng) {
  Matrix z(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) z(i, j) = complex_normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return UnitaryOperator(q);
}

HermitianOperator random_hermitian(Index dim, Rng& rng, double norm) {
  std::normal_distribution<double> diag(0.0, 1.0);
  Matrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    m(i, i) = diag(rng);
    for (Index j = i + 1; j < dim; ++j) {
      m(i, j) = complex_normal(rng);
      m(j, i) = std::conj(m(i, j));
    }
  }
  const double n = spectral_norm(m);
  return HermitianOperator(m * (norm / n));
}

StateVector random_state(Index dim, Rng& rng) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = complex_normal(rng);
  return StateVector::normalized(v);
}

Projector random_projector(Index dim, Index rank, Rng& rng) {
  const UnitaryOperator u = random_unitary(dim, rng);
  return Projector::onto_columns(u.matrix().leftCols(rank), dim);
}

}  // namespace dyncool
