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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dyncool/errors.hpp"
#include "dyncool/gqsp.hpp"
#include "dyncool/random.hpp"
#include "dyncool/signfun.hpp"

namespace dyncool {
namespace {

constexpr double kPi = std::numbers::pi;

// Sum_n a_n U^n computed with explicit matrix powers.
Matrix power_sum(const FourierPolynomial& p, const Matrix& u) {
  const Index n = u.rows();
  Matrix out = Matrix::Zero(n, n);
  Matrix pos = Matrix::Identity(n, n);
  for (int j = 0; j <= p.pos_degree(); ++j) {
    out += p.coefficient(j) * pos;
    pos = pos * u;
  }
  Matrix neg = u.adjoint();
  for (int j = 1; j <= p.neg_degree(); ++j) {
    out += p.coefficient(-j) * neg;
    neg = neg * u.adjoint();
  }
  return out;
}

// The circuit product written out with full 2n x 2n factors.
Matrix direct_product(const AngleSequence& a, const Matrix& u) {
  const Index n = u.rows();
  const Matrix id = Matrix::Identity(n, n);
  Matrix w = kron(rotation_matrix(a.theta[0], a.phi[0], a.lambda).matrix(), id);
  for (std::size_t j = 1; j < a.length(); ++j) {
    Matrix ctrl = Matrix::Zero(2 * n, 2 * n);
    if (j <= static_cast<std::size_t>(a.m)) {
      ctrl.topLeftCorner(n, n) = u;
      ctrl.bottomRightCorner(n, n) = id;
    } else {
      ctrl.topLeftCorner(n, n) = id;
      ctrl.bottomRightCorner(n, n) = u.adjoint();
    }
    w = kron(rotation_matrix(a.theta[j], a.phi[j]).matrix(), id) * ctrl * w;
  }
  return w;
}

FourierPolynomial random_poly(int k, int m, double modulus, Rng& rng) {
  std::vector<Complex> c(static_cast<std::size_t>(k + m + 1));
  for (auto& v : c) v = complex_normal(rng);
  const FourierPolynomial p(k, m, c);
  return p.scaled(modulus / max_modulus(p));
}

TEST(RotationMatrix, Examples) {
  const Matrix r0 = rotation_matrix(0, 0, 0).matrix();
  EXPECT_EQ(r0(0, 0), Complex(1.0));
  EXPECT_EQ(r0(1, 1), Complex(-1.0));
  EXPECT_EQ(r0(0, 1), Complex(0.0));
  const Matrix r1 = rotation_matrix(kPi / 2, 0, 0).matrix();
  EXPECT_NEAR(std::abs(r1(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r1(0, 1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r1(1, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r1(1, 1)), 0.0, 1e-15);
}

TEST(RotationMatrix, UnitaryForRandomTriples) {
  Rng rng = substream(31, 0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const Matrix r = rotation_matrix(ang(rng), ang(rng), ang(rng)).matrix();
    ASSERT_LE(max_abs(r * r.adjoint() - Matrix::Identity(2, 2)), 1e-12);
  }
}

TEST(Complete, ZeroPolynomial) {
  const auto pair = complete(FourierPolynomial::zero(0, 0), 1e-4);
  EXPECT_NEAR(std::abs(pair.q.coefficient(0)), 1.0, 1e-12);
}

TEST(Complete, Monomial) {
  const double eta = 1e-3;
  const FourierPolynomial p(0, 1, {Complex(0.0), Complex(1.0 - eta)});
  const auto pair = complete(p, eta / 2.0);
  const double expected = std::sqrt(1.0 - (1.0 - eta) * (1.0 - eta));
  for (double x : {-2.5, 0.0, 0.4, 3.0}) {
    EXPECT_NEAR(std::abs(eval_fourier(pair.q, x)), expected, 1e-10);
  }
}

TEST(Complete, RandomDegreeEightBothMethods) {
  for (auto method : {CompletionMethod::roots, CompletionMethod::cepstral}) {
    Rng rng = substream(32, 0);
    const auto p = random_poly(3, 5, 0.9, rng);
    const auto pair = complete(p, 1e-4, method);
    EXPECT_EQ(pair.q.neg_degree(), 3);
    EXPECT_EQ(pair.q.pos_degree(), 5);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double x = -kPi + 2.0 * kPi * i / 10000;
      worst = std::max(worst, std::abs(std::norm(eval_fourier(p, x)) +
                                       std::norm(eval_fourier(pair.q, x)) - 1.0));
    }
    EXPECT_LE(worst, 1e-8);
  }
}

TEST(Complete, MarginViolation) {
  const FourierPolynomial p(0, 1, {Complex(0.0), Complex(1.0)});
  EXPECT_THROW(complete(p, 1e-4), MarginError);
  EXPECT_THROW(complete(p, 1e-9), ValidationError);
}

TEST(ComputeAngles, ZeroPolynomialSingleRotation) {
  const auto pair = complete(FourierPolynomial::zero(0, 0), 1e-4);
  const auto angles = compute_angles(pair);
  ASSERT_EQ(angles.length(), 1u);
  EXPECT_NEAR(std::abs(std::cos(angles.theta[0])), 0.0, 1e-12);
  Rng rng = substream(33, 0);
  const auto u = random_unitary(3, rng);
  EXPECT_LE(max_abs(assemble_and_extract(angles, u)), 1e-12);
}

TEST(ComputeAngles, UnitMonomialIsPowerChain) {
  const int m = 3;
  std::vector<Complex> pc(m + 1, Complex(0.0));
  pc[m] = 1.0;
  const CompletionPair pair{FourierPolynomial(0, m, pc), FourierPolynomial::zero(0, m)};
  const auto angles = compute_angles(pair);
  Rng rng = substream(33, 1);
  const Matrix u = random_unitary(4, rng).matrix();
  EXPECT_LE(max_abs(assemble_and_extract(angles, UnitaryOperator(u)) - u * u * u), 1e-10);
}

TEST(ComputeAngles, IdentityPolynomial) {
  const FourierPolynomial p(0, 1, {Complex(0.0), Complex(1.0)});
  const auto angles = compute_angles({p, FourierPolynomial::zero(0, 1)});
  Rng rng = substream(33, 2);
  const auto u = random_unitary(5, rng);
  EXPECT_LE(max_abs(assemble_and_extract(angles, u) - u.matrix()), 1e-10);
}

TEST(ComputeAngles, RandomPairReconstruction) {
  Rng rng = substream(34, 0);
  const auto p = random_poly(2, 3, 0.8, rng);
  const auto angles = compute_angles(complete(p, 1e-4));
  EXPECT_EQ(angles.k, 2);
  EXPECT_EQ(angles.m, 3);
  EXPECT_EQ(angles.length(), 6u);
  const auto u = random_unitary(4, rng);
  EXPECT_LE(max_abs(assemble_and_extract(angles, u) - power_sum(p, u.matrix())), 1e-8);
}

TEST(ComputeAngles, RejectsMismatchedRanges) {
  const CompletionPair pair{FourierPolynomial::zero(1, 1), FourierPolynomial::zero(0, 2)};
  EXPECT_THROW(compute_angles(pair), ValidationError);
}

TEST(AngleSequence, ValidatesLengths) {
  AngleSequence a{{0.0, 0.0}, {0.0}, 0.0, 0, 1};
  EXPECT_THROW(a.validate(), ValidationError);
}

TEST(Assemble, ZeroAnglesMatchDirectProduct) {
  AngleSequence a;
  a.k = 1;
  a.m = 2;
  a.theta.assign(4, 0.0);
  a.phi.assign(4, 0.0);
  Rng rng = substream(35, 0);
  const Matrix u = random_unitary(3, rng).matrix();
  const Matrix full = direct_product(a, u);
  const GqspCircuit c = assemble(a, UnitaryOperator(u));
  EXPECT_LE(max_abs(c.full - full), 1e-12);
  EXPECT_LE(max_abs(c.block - full.topLeftCorner(3, 3)), 1e-12);
}

TEST(Assemble, RandomAnglesUnitaryAndStructural) {
  Rng rng = substream(35, 1);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    AngleSequence a;
    a.k = trial % 4;
    a.m = (trial * 3) % 5;
    const auto len = static_cast<std::size_t>(a.k + a.m + 1);
    for (std::size_t j = 0; j < len; ++j) {
      a.theta.push_back(ang(rng));
      a.phi.push_back(ang(rng));
    }
    a.lambda = ang(rng);
    const Matrix u = random_unitary(2 + trial % 3, rng).matrix();
    const GqspCircuit c = assemble(a, UnitaryOperator(u));
    const Index n2 = c.full.rows();
    EXPECT_LE(max_abs(c.full * c.full.adjoint() - Matrix::Identity(n2, n2)), 1e-9);
    EXPECT_LE(max_abs(c.full - direct_product(a, u)), 1e-10);
    EXPECT_EQ(c.controlled_u, a.m);
    EXPECT_EQ(c.controlled_u_dagger, a.k);
  }
}

TEST(Assemble, SignPolynomialMatchesSpectralOracle) {
  const auto s = build_sign_fourier(0.3, 0.1);
  const auto pair = complete(with_margin(s, 1e-6), 1e-6);
  const auto angles = compute_angles(pair);
  Rng rng = substream(36, 0);
  const HermitianOperator h = random_hermitian(4, rng);
  const Matrix block = assemble_and_extract(angles, evolve(h, -1.0));
  const double scale = max_modulus(pair.p) / max_modulus(s);
  const Matrix expected = apply_spectral(s, h, 0.0).matrix() * scale;
  EXPECT_LE(max_abs(block - expected), 1e-7);
}

TEST(Gqsp, EndToEndRandomPairs) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng = substream(37, static_cast<std::uint64_t>(i));
    const int k = static_cast<int>(rng() % 9);
    const int m = static_cast<int>(rng() % (17 - k));
    const auto p = random_poly(k, m, 0.95, rng);
    const auto u = random_unitary(1 + static_cast<Index>(rng() % 8), rng);
    const auto angles = compute_angles(complete(p, 1e-4));
    const GqspCircuit c = assemble(angles, u);
    worst = std::max(worst, max_abs(c.block - power_sum(p, u.matrix())));
    EXPECT_EQ(c.controlled_u, m);
    EXPECT_EQ(c.controlled_u_dagger, k);
  }
  EXPECT_LE(worst, 1e-7);
}

}  // namespace
}  // namespace dyncool
