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
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "dyncool/dyson_verify.hpp"
#include "dyncool/errors.hpp"
#include "dyncool/random.hpp"
#include "test_oracles.hpp"

namespace dyncool {
namespace {

constexpr double kPi = std::numbers::pi;

Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

Projector ket0() {
  Matrix p = Matrix::Zero(2, 2);
  p(0, 0) = 1.0;
  return Projector(p);
}

// Exact symbolic integration of sums c * x^p * e^{i w x} with integer w.
class ExpPoly {
 public:
  static ExpPoly one() {
    ExpPoly e;
    e.terms_[{0, 0}] = 1.0;
    return e;
  }

  ExpPoly times_exp(int w) const {
    ExpPoly out;
    for (const auto& [key, c] : terms_) out.terms_[{key.first, key.second + w}] += c;
    return out;
  }

  // x -> int_0^x f(s) ds.
  ExpPoly integrate() const {
    ExpPoly out;
    for (const auto& [key, c] : terms_) {
      const auto [p, w] = key;
      if (w == 0) {
        out.terms_[{p + 1, 0}] += c / static_cast<double>(p + 1);
        continue;
      }
      const Complex iw(0.0, static_cast<double>(w));
      double fact_ratio = 1.0;  // p! / q!
      for (int q = p; q >= 0; --q) {
        const double sign = ((p - q) % 2 == 0) ? 1.0 : -1.0;
        out.terms_[{q, w}] += c * sign * fact_ratio / std::pow(iw, p - q + 1);
        fact_ratio *= q;
      }
      double pfact = 1.0;
      for (int q = 2; q <= p; ++q) pfact *= q;
      const double sign = (p % 2 == 0) ? 1.0 : -1.0;
      out.terms_[{0, 0}] -= c * sign * pfact / std::pow(iw, p + 1);
    }
    return out;
  }

  Complex at(double x) const {
    Complex sum = 0.0;
    for (const auto& [key, c] : terms_) sum += c * std::pow(x, key.first) * std::polar(1.0, key.second * x);
    return sum;
  }

 private:
  std::map<std::pair<int, int>, Complex> terms_;
};

// Nested integral int_0^t e^{i w_1 s_1} int_0^{s_1} e^{i w_2 s_2} ... ds_k ... ds_1.
Complex nested_integral(const std::vector<int>& w, double t) {
  ExpPoly f = ExpPoly::one();
  for (auto it = w.rbegin(); it != w.rend(); ++it) f = f.times_exp(*it).integrate();
  return f.at(t);
}

// U_k summed over all frequency paths of the interaction-picture perturbation.
Matrix exact_dyson(const Matrix& a, const Projector& p, double delta, int k, double t) {
  const Index n = a.rows();
  const Matrix q = Matrix::Identity(n, n) - p.matrix();
  const std::map<int, Matrix> parts{{0, q * a * q + p.matrix() * a * p.matrix()},
                                    {2, q * a * p.matrix()},
                                    {-2, p.matrix() * a * q}};
  const Complex c = std::sqrt(delta) / Complex(0.0, 2.0);
  Matrix sum = Matrix::Zero(n, n);
  const int paths = static_cast<int>(std::pow(3, k));
  for (int code = 0; code < paths; ++code) {
    std::vector<int> w(static_cast<std::size_t>(k));
    Matrix prod = Matrix::Identity(n, n);
    int rest = code;
    for (int i = 0; i < k; ++i) {
      w[i] = 2 * (rest % 3) - 2;
      rest /= 3;
      prod = prod * parts.at(w[i]);
    }
    sum += nested_integral(w, t) * prod;
  }
  return std::pow(c, k) * sum;
}

TEST(ExpPolyOracle, KnownIntegrals) {
  EXPECT_NEAR(std::abs(nested_integral({0, 0}, 2.0) - 2.0), 0.0, 1e-14);
  const Complex e = (std::polar(1.0, 2.0 * 1.3) - 1.0) / Complex(0.0, 2.0);
  EXPECT_NEAR(std::abs(nested_integral({2}, 1.3) - e), 0.0, 1e-14);
}

TEST(Leakage, TrivialProjectors) {
  Rng rng = substream(61, 0);
  const HermitianOperator a = random_hermitian(4, rng);
  EXPECT_EQ(leakage(a, Projector::zero(4), 0.25), 0.0);
  EXPECT_LE(leakage(a, Projector::identity(4), 0.25), 1e-24);
}

TEST(Leakage, BlockDiagonalPerturbation) {
  Rng rng = substream(61, 1);
  const Projector p = random_projector(6, 2, rng);
  const Matrix a0 = random_hermitian(6, rng).matrix();
  const Matrix q = Matrix::Identity(6, 6) - p.matrix();
  const HermitianOperator a(p.matrix() * a0 * p.matrix() + q * a0 * q);
  EXPECT_LE(leakage(HermitianOperator(a.matrix() / spectral_norm(a.matrix())), p, 0.04), 1e-12);
}

TEST(Leakage, PauliXClosedForm) {
  // H~ = -Z + 0.25 X; the off-diagonal element of e^{-iH~pi} is -i sin(w pi) 0.25 / w.
  const double w = std::sqrt(1.0 + 0.0625);
  const double expected = std::pow(std::sin(w * kPi) * 0.25 / w, 2);
  const double value = leakage(HermitianOperator(pauli_x()), ket0(), 0.25);
  EXPECT_NEAR(value, expected, 1e-14);
  EXPECT_NEAR(value, 5.5e-4, 0.5e-4);
  EXPECT_LE(value, 0.25);
}

TEST(EffectiveError, TrivialCases) {
  Rng rng = substream(62, 0);
  const HermitianOperator a = random_hermitian(4, rng);
  EXPECT_LE(effective_error(a, Projector::identity(4), 0.04), 1e-20);
  const Projector p = random_projector(4, 2, rng);
  EXPECT_LE(effective_error(HermitianOperator::zero(4), p, 0.04), 1e-20);
}

TEST(EffectiveError, PauliXClosedForm) {
  const double t = 5.0;
  const double w = std::sqrt(1.01);
  const Complex inner = std::cos(w * t) + Complex(0.0, std::sin(w * t) / w);
  const double expected = std::norm(std::polar(1.0, -t) * inner - 1.0);
  const double value = effective_error(HermitianOperator(pauli_x()), ket0(), 0.04);
  EXPECT_NEAR(value, expected, 1e-13);
  EXPECT_LE(value, 0.04);
}

TEST(Bounds, SmallRandomSweep) {
  for (int i = 0; i < 20; ++i) {
    Rng rng = substream(63, static_cast<std::uint64_t>(i));
    const Index dim = 2 + i % 6;
    const HermitianOperator a = random_hermitian(dim, rng);
    const Projector p = random_projector(dim, 1 + i % (dim - 1), rng);
    for (double delta : {0.25, 0.04, 0.01}) {
      EXPECT_LE(leakage(a, p, delta), delta);
      EXPECT_LE(effective_error(a, p, delta), delta);
    }
  }
}

TEST(InteractionOperator, MatchesConjugation) {
  Rng rng = substream(64, 0);
  const Matrix a = random_hermitian(5, rng).matrix();
  const Projector p = random_projector(5, 2, rng);
  const Matrix h0 = reflection(p).matrix();
  const double s = 0.83;
  const Matrix expected = testing::taylor_exp(h0, -s) * a * testing::taylor_exp(h0, s);
  EXPECT_LE(max_abs(interaction_operator(a, p, s) - expected), 1e-12);
}

TEST(DysonTerm, OrderZeroIsIdentity) {
  Rng rng = substream(65, 0);
  const auto t = dyson_term(random_hermitian(3, rng), random_projector(3, 1, rng), 0.1, 0, 2.0);
  EXPECT_EQ(t.op, Matrix(Matrix::Identity(3, 3)));
}

TEST(DysonTerm, MatchesSymbolicIntegration) {
  Rng rng = substream(66, 0);
  const HermitianOperator a = random_hermitian(4, rng);
  const Projector p = random_projector(4, 2, rng);
  const double delta = 0.04;
  const double t = 5.0;
  for (int k = 1; k <= 3; ++k) {
    const auto term = dyson_term(a, p, delta, k, t);
    const Matrix exact = exact_dyson(a.matrix(), p, delta, k, t);
    const double err = spectral_norm(term.op - exact);
    EXPECT_LE(err, term.slack) << "k=" << k;
    EXPECT_LE(spectral_norm(exact), term.bound + 1e-12) << "k=" << k;
  }
}

TEST(DysonTerm, NormBound) {
  for (int i = 0; i < 10; ++i) {
    Rng rng = substream(67, static_cast<std::uint64_t>(i));
    const HermitianOperator a = random_hermitian(4, rng);
    const Projector p = random_projector(4, 1 + i % 3, rng);
    const double delta = 0.04;
    const double t = kPi * std::ceil(1.0 / (kPi * std::sqrt(delta)));
    const auto term = dyson_term(a, p, delta, 2, t);
    EXPECT_NEAR(term.bound, t * t * delta / 8.0, 1e-12);
    EXPECT_LE(spectral_norm(term.op), term.bound + term.slack);
  }
}

TEST(DysonTerm, FirstOrderCancelsAtMultiplesOfPi) {
  Rng rng = substream(68, 0);
  const HermitianOperator a = random_hermitian(4, rng);
  const Projector p = random_projector(4, 2, rng);
  const Matrix q = Matrix::Identity(4, 4) - p.matrix();
  for (int n = 1; n <= 3; ++n) {
    const auto term = dyson_term(a, p, 0.04, 1, n * kPi);
    EXPECT_LE(spectral_norm(q * term.op * p.matrix()), 1e-10) << "t = " << n << " pi";
    const auto leak = per_term_leakage(a, p, 0.04, 1, n * kPi);
    EXPECT_TRUE(leak.analytic);
    EXPECT_LE(leak.value, 1e-10);
  }
}

TEST(DysonTerm, ResolutionErrorOnFixedCoarseGrid) {
  Rng rng = substream(69, 0);
  const HermitianOperator a = random_hermitian(4, rng);
  const Projector p = random_projector(4, 2, rng);
  EXPECT_THROW(dyson_term(a, p, 1e-4, 2, 40.0, QuadratureSpec{8}), ResolutionError);
}

TEST(DysonTerm, RejectsBadOrder) {
  const auto a = HermitianOperator::zero(2);
  EXPECT_THROW(dyson_term(a, ket0(), 0.1, kMaxDysonOrder + 1, 1.0), ValidationError);
  EXPECT_THROW(dyson_term(a, ket0(), 0.1, -1, 1.0), ValidationError);
}

TEST(DysonSeries, ConvergesToExactEvolution) {
  Rng rng = substream(70, 0);
  const HermitianOperator a = random_hermitian(4, rng);
  const Projector p = random_projector(4, 2, rng);
  const double delta = 0.04;
  const HermitianOperator ht = reflection(p) + a.scaled(std::sqrt(delta) / 2.0);
  const Matrix exact = testing::taylor_exp(ht.matrix(), 5.0);
  EXPECT_LE(spectral_norm(dyson_series(a, p, delta, 6, 5.0) - exact), 1e-3);
  double prev = 1e9;
  for (int k = 0; k <= 4; ++k) {
    const double err = spectral_norm(dyson_series(a, p, delta, k, 5.0) - exact);
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(PerTermLeakage, PauliXQuarterPeriod) {
  const double delta = 0.09;
  const auto leak = per_term_leakage(HermitianOperator(pauli_x()), ket0(), delta, 1, kPi / 2);
  EXPECT_NEAR(leak.value, std::sqrt(delta) / 2.0, 1e-14);
  const auto term = dyson_term(HermitianOperator(pauli_x()), ket0(), delta, 1, kPi / 2);
  EXPECT_NEAR(std::abs(term.op(1, 0)), std::sqrt(delta) / 2.0, 1e-8);
}

TEST(PerTermLeakage, SecondOrderBound) {
  for (int i = 0; i < 5; ++i) {
    Rng rng = substream(71, static_cast<std::uint64_t>(i));
    const HermitianOperator a = random_hermitian(4, rng);
    const Projector p = random_projector(4, 2, rng);
    const double t = 2.0 * kPi;
    const auto leak = per_term_leakage(a, p, 0.25, 2, t);
    EXPECT_NEAR(leak.bound, t * 0.25 / 2.0, 1e-12);
    EXPECT_LE(leak.value, leak.bound + leak.slack);
  }
}

TEST(PathWeight, MatchesSymbolicIntegral) {
  for (const std::vector<int>& j : {std::vector<int>{0}, {1}, {0, 1}, {1, 0}, {0, 0, 1}}) {
    const int k = static_cast<int>(j.size()) + 1;
    std::vector<int> w(static_cast<std::size_t>(k));
    for (int n = 1; n <= k; ++n) {
      const int cur = n == k ? 1 : j[n - 1];
      const int prev = n == 1 ? 1 : j[n - 2];
      w[n - 1] = 2 * (cur - prev);
    }
    for (double t : {kPi, 2.5, 3.0 * kPi}) {
      const PathWeight pw = path_weight(j, t);
      EXPECT_LE(std::abs(pw.value - nested_integral(w, t)), pw.slack);
      const bool all_ones = std::all_of(j.begin(), j.end(), [](int v) { return v == 1; });
      if (!all_ones) {
        EXPECT_LE(std::abs(pw.value), pw.bound + pw.slack);
      }
    }
  }
}

TEST(PathWeight, AllOnesIsVolume) {
  const PathWeight pw = path_weight({1, 1}, 2.0);
  EXPECT_NEAR(std::abs(pw.value - 2.0 * 2.0 * 2.0 / 6.0), 0.0, 1e-10);
}

TEST(PathWeight, RejectsBadBits) {
  EXPECT_THROW(path_weight({2}, 1.0), ValidationError);
  EXPECT_THROW(path_weight({}, 1.0), ValidationError);
}

TEST(TransitionMatrix, TwoLevelPauliX) {
  RealVector v(2);
  v << -0.5, 0.5;
  const auto s = eig(HermitianOperator::diagonal(v));
  const auto tm = transition_matrix(s, HermitianOperator(pauli_x()), 0.0);
  EXPECT_DOUBLE_EQ(tm.first_order(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(tm.first_order(1, 1), 0.75);
  EXPECT_DOUBLE_EQ(tm.first_order(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(tm.first_order(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(tm.threshold, 0.0);
  EXPECT_NEAR(tm.exact(0, 1), std::pow(std::sin(0.5), 2), 1e-14);
}

TEST(TransitionMatrix, DiagonalPerturbation) {
  Rng rng = substream(72, 0);
  const auto s = eig(random_hermitian(5, rng));
  RealVector d(5);
  d << 0.1, -0.2, 0.3, 0.0, 0.5;
  const HermitianOperator a(s.eigenvectors * d.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint());
  const auto tm = transition_matrix(s, a, 0.0);
  EXPECT_LE((tm.first_order - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TransitionMatrix, ZeroPatternAndColumnSums) {
  Rng rng = substream(73, 0);
  const auto s = eig(random_hermitian(6, rng));
  const HermitianOperator a = sample_gue(6, rng).scaled(0.3);
  const auto tm = transition_matrix(s, a, 0.0);
  for (Index j = 0; j < 6; ++j) {
    for (Index i = 0; i < 6; ++i) {
      if (s.eigenvalues(i) > s.eigenvalues(j)) {
        EXPECT_EQ(tm.first_order(i, j), 0.0);
        EXPECT_LE(tm.exact(i, j), 1e-24);
      }
    }
    EXPECT_NEAR(tm.first_order.col(j).sum(), 1.0, 1e-12);
    EXPECT_NEAR(tm.exact.col(j).sum(), 1.0, 1e-12);
  }
}

TEST(TransitionMatrix, CubicRemainder) {
  Rng rng = substream(74, 0);
  const auto s = eig(random_hermitian(6, rng));
  const HermitianOperator a = sample_gue(6, rng);
  std::vector<double> xs;
  std::vector<double> ys;
  for (double sc : {0.4, 0.2, 0.1, 0.05}) {
    const auto tm = transition_matrix(s, a.scaled(sc), 0.0);
    xs.push_back(std::log(sc));
    ys.push_back(std::log((tm.exact - tm.first_order).cwiseAbs().maxCoeff()));
  }
  const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4.0;
  const double my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4.0;
  double sxy = 0.0;
  double sxx = 0.0;
  for (int i = 0; i < 4; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, 3.0, 0.3);
}

TEST(Gue, MomentsAndHermiticity) {
  const int samples = 10000;
  const Index n = 4;
  Rng rng = substream(75, 0);
  double off2 = 0.0, off4 = 0.0, diag2 = 0.0, diag4 = 0.0;
  Complex off_mean = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Matrix m = sample_gue(n, rng).matrix() * std::sqrt(static_cast<double>(n));
    ASSERT_EQ(m, Matrix(m.adjoint()));
    const double o = std::norm(m(0, 1));
    const double d = std::norm(m(2, 2));
    off2 += o;
    off4 += o * o;
    diag2 += d;
    diag4 += d * d;
    off_mean += m(1, 3);
  }
  auto check = [&](double s1, double s2) {
    const double mean = s1 / samples;
    const double se = std::sqrt((s2 / samples - mean * mean) / samples);
    EXPECT_LE(std::abs(mean - 1.0), 3.0 * se);
  };
  check(off2, off4);
  check(diag2, diag4);
  off_mean /= samples;
  EXPECT_LE(std::abs(off_mean.real()), 3.0 * std::sqrt(0.5 / samples));
  EXPECT_LE(std::abs(off_mean.imag()), 3.0 * std::sqrt(0.5 / samples));
}

TEST(CoolingProbability, TopAndGroundOfEightLevels) {
  Rng rng = substream(76, 0);
  const auto s = eig(random_hermitian(8, rng));
  const auto top = cooling_probability(s, 7, 10000, rng);
  EXPECT_DOUBLE_EQ(top.predicted, 7.0 / 32.0);
  EXPECT_LE(std::abs(top.empirical - top.predicted), 3.0 * top.standard_error);
  const auto ground = cooling_probability(s, 0, 100, rng);
  EXPECT_EQ(ground.predicted, 0.0);
  EXPECT_EQ(ground.empirical, 0.0);
}

TEST(CoolingProbability, DuplicatedSpectrumHalvesPrediction) {
  RealVector v4(4);
  v4 << -0.6, -0.2, 0.2, 0.6;
  RealVector v8(8);
  v8 << -0.6, -0.2, 0.2, 0.6, 0.61, 0.62, 0.63, 0.64;
  Rng rng = substream(77, 0);
  const auto p4 = cooling_probability(eig(HermitianOperator::diagonal(v4)), 3, 2, rng);
  const auto p8 = cooling_probability(eig(HermitianOperator::diagonal(v8)), 3, 2, rng);
  EXPECT_DOUBLE_EQ(p8.predicted, p4.predicted / 2.0);
}

TEST(Certification, AllSweepsPass) {
  const auto summaries = certify_all();
  ASSERT_EQ(summaries.size(), 6u);
  for (const auto& s : summaries) {
    EXPECT_TRUE(s.passed) << s.claim << " " << s.note;
    EXPECT_FALSE(s.records.empty()) << s.claim;
  }
}

TEST(Certification, Deterministic) {
  const auto a = certify_leakage({7, 1});
  const auto b = certify_leakage({7, 4});
  ASSERT_EQ(a.records.size(), 240u);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].measured, b.records[i].measured);
    EXPECT_EQ(a.records[i].instance, b.records[i].instance);
  }
}

}  // namespace
}  // namespace dyncool
