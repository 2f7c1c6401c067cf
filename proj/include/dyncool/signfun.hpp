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

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dyncool/operator_core.hpp"

namespace dyncool {

/// Odd real polynomial stored in the Chebyshev basis: P(x) = sum_n c_n T_n(x)
/// with c_n = 0 for even n. The Chebyshev basis keeps degree-several-hundred
/// sign approximations well conditioned; power-basis input is converted.
class RealOddPolynomial {
 public:
  RealOddPolynomial() = default;
  /// `chebyshev[n]` multiplies T_n. Even entries must vanish (|c| <= 1e-14).
  RealOddPolynomial(std::vector<double> chebyshev, double epsilon, double delta);

  /// Builds from power-basis coefficients a_n x^n (index n). Even powers must
  /// be zero.
  static RealOddPolynomial from_power_basis(const std::vector<double>& power,
                                            double epsilon = 0.0, double delta = 0.0);

  int degree() const { return static_cast<int>(cheb_.size()) - 1; }
  const std::vector<double>& chebyshev() const { return cheb_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }

  /// Clenshaw evaluation on [-1, 1].
  double operator()(double x) const;

 private:
  std::vector<double> cheb_{0.0, 0.0};
  double epsilon_ = 0.0;
  double delta_ = 0.0;
};

/// Laurent polynomial S(z) = sum_{n=-k}^{m} a_n z^n; evaluated on the unit
/// circle as S(e^{ix}).
class FourierPolynomial {
 public:
  FourierPolynomial() = default;
  /// `coefficients[j]` is a_{j - neg_degree}; size must be neg + pos + 1.
  FourierPolynomial(int neg_degree, int pos_degree, std::vector<Complex> coefficients,
                    double epsilon = 0.0, double delta = 0.0);
  static FourierPolynomial zero(int neg_degree = 0, int pos_degree = 0);

  int neg_degree() const { return k_; }
  int pos_degree() const { return m_; }
  const std::vector<Complex>& coefficients() const { return a_; }
  Complex coefficient(int n) const;  // zero outside [-k, m]
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  FourierPolynomial scaled(double s) const;

  /// sum_n a_n z^n at an arbitrary nonzero complex z (Horner).
  Complex at(Complex z) const;

 private:
  int k_ = 0;
  int m_ = 0;
  std::vector<Complex> a_{Complex{0.0, 0.0}};
  double epsilon_ = 0.0;
  double delta_ = 0.0;
};

struct SignPolyOptions {
  /// Points of the uniform certification grid.
  std::size_t grid_points = 100000;
  /// Documented degree constant: deg <= c_deg / eps * max(1, ln(1/delta)).
  double c_deg = 5.0;
  /// Final shrink factor keeping |P| strictly below one.
  double shrink = 1e-6;
};

/// Degree ceiling promised by build_sign_poly.
double sign_degree_bound(double epsilon, double delta, const SignPolyOptions& opts = {});

/// Odd polynomial with |P| <= 1 on [-1, 1] and |P - sign| <= delta for
/// |x| >= epsilon / 2. Built from a truncated Chebyshev series of
/// erf(x / (sigma sqrt 2)) and certified on a uniform grid.
RealOddPolynomial build_sign_poly(double epsilon, double delta,
                                  const SignPolyOptions& opts = {});

/// S(e^{ix}) = P(sin x): exact Laurent coefficients with k = m = deg P.
FourierPolynomial to_fourier(const RealOddPolynomial& p);

/// S(., epsilon, delta): to_fourier of build_sign_poly(2 sin(epsilon/2), delta),
/// so |S(e^{ix}) - sign(x)| <= delta on [epsilon/2, pi - epsilon/2] and mirror.
FourierPolynomial build_sign_fourier(double epsilon, double delta,
                                     const SignPolyOptions& opts = {});

/// sum_n a_n e^{inx}.
Complex eval_fourier(const FourierPolynomial& s, double x);

struct FourierCertificate {
  double max_modulus = 0.0;     // max |S(e^{ix})| over the grid
  double max_sign_error = 0.0;  // max |S - sign| over the sign region
  double max_odd_defect = 0.0;  // max |S(e^{-ix}) + S(e^{ix})|
  double worst_sign_x = 0.0;
  bool passed = false;
};

/// Grid check of the Fourier sign conditions on [-pi, pi].
FourierCertificate certify_sign_fourier(const FourierPolynomial& s,
                                        std::size_t grid_points = 100000);

/// Sum_j Re S(e^{i(lambda_j - shift)}) |lambda_j><lambda_j|. Requires the shifted
/// spectrum to lie in (-pi + eps/2, pi - eps/2) where eps is S's resolution.
HermitianOperator apply_spectral(const FourierPolynomial& s, const HermitianOperator& h,
                                 double shift);
HermitianOperator apply_spectral(const FourierPolynomial& s,
                                 const SpectralDecomposition& decomp, double shift);

}  // namespace dyncool
