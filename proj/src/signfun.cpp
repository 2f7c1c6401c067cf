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

#include "dyncool/signfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace dyncool {

namespace {

constexpr double kPi = std::numbers::pi;

void require_unit_interval(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream os;
    os << name << " must lie in (0, 1), got " << v;
    throw ValidationError(os.str());
  }
}

// Inverse of erfc on (0, 1] by bisection; erfc is monotone so 200 halvings
// pin the root to machine precision.
double erfc_inverse(double y) {
  double lo = 0.0;
  double hi = 30.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(mid) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Chebyshev coefficients c_0..c_{n/2} of f on [-1, 1] from N first-kind nodes,
// computed with one length-2N FFT.
template <class F>
std::vector<double> chebyshev_coefficients(F&& f, std::size_t nodes) {
  Eigen::FFT<double> fft;
  std::vector<Complex> samples(2 * nodes, Complex{0.0, 0.0});
  for (std::size_t k = 0; k < nodes; ++k) {
    const double theta = kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(nodes);
    samples[k] = f(std::cos(theta));
  }
  std::vector<Complex> spectrum;
  fft.fwd(spectrum, samples);
  std::vector<double> c(nodes / 2 + 1);
  for (std::size_t n = 0; n < c.size(); ++n) {
    const Complex twist =
        std::polar(1.0, -kPi * static_cast<double>(n) / (2.0 * static_cast<double>(nodes)));
    c[n] = 2.0 / static_cast<double>(nodes) * (twist * spectrum[n]).real();
  }
  c[0] *= 0.5;
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// RealOddPolynomial

RealOddPolynomial::RealOddPolynomial(std::vector<double> chebyshev, double epsilon,
                                     double delta)
    : cheb_(std::move(chebyshev)), epsilon_(epsilon), delta_(delta) {
  if (cheb_.size() < 2 || cheb_.size() % 2 != 0) {
    throw ValidationError("RealOddPolynomial: degree must be odd and positive");
  }
  for (std::size_t n = 0; n < cheb_.size(); n += 2) {
    if (std::abs(cheb_[n]) > 1e-14) {
      throw ValidationError("RealOddPolynomial: even Chebyshev coefficient is nonzero");
    }
    cheb_[n] = 0.0;
  }
}

RealOddPolynomial RealOddPolynomial::from_power_basis(const std::vector<double>& power,
                                                      double epsilon, double delta) {
  std::size_t deg = power.size() == 0 ? 1 : power.size() - 1;
  if (deg % 2 == 0) ++deg;
  // x^n in Chebyshev form via x T_j = (T_{j+1} + T_{|j-1|}) / 2.
  std::vector<double> xn(deg + 1, 0.0);
  xn[0] = 1.0;
  std::vector<double> cheb(deg + 1, 0.0);
  for (std::size_t n = 0; n <= deg; ++n) {
    if (n > 0) {
      std::vector<double> next(deg + 1, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (xn[j] == 0.0) continue;
        if (j == 0) {
          next[1] += xn[0];
        } else {
          next[j + 1] += 0.5 * xn[j];
          next[j - 1] += 0.5 * xn[j];
        }
      }
      xn = std::move(next);
    }
    const double a = n < power.size() ? power[n] : 0.0;
    if (a == 0.0) continue;
    if (n % 2 == 0) throw ValidationError("RealOddPolynomial: even power coefficient");
    for (std::size_t j = 0; j <= deg; ++j) cheb[j] += a * xn[j];
  }
  return RealOddPolynomial(std::move(cheb), epsilon, delta);
}

double RealOddPolynomial::operator()(double x) const {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t n = cheb_.size(); n-- > 1;) {
    const double b0 = cheb_[n] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return cheb_[0] + x * b1 - b2;
}

// ---------------------------------------------------------------------------
// FourierPolynomial

FourierPolynomial::FourierPolynomial(int neg_degree, int pos_degree,
                                     std::vector<Complex> coefficients, double epsilon,
                                     double delta)
    : k_(neg_degree), m_(pos_degree), a_(std::move(coefficients)), epsilon_(epsilon),
      delta_(delta) {
  if (k_ < 0 || m_ < 0) throw ValidationError("FourierPolynomial: negative degree");
  if (a_.size() != static_cast<std::size_t>(k_ + m_ + 1)) {
    throw ValidationError("FourierPolynomial: coefficient count must equal k + m + 1");
  }
}

FourierPolynomial FourierPolynomial::zero(int neg_degree, int pos_degree) {
  return FourierPolynomial(
      neg_degree, pos_degree,
      std::vector<Complex>(static_cast<std::size_t>(neg_degree + pos_degree + 1)));
}

Complex FourierPolynomial::coefficient(int n) const {
  if (n < -k_ || n > m_) return {0.0, 0.0};
  return a_[static_cast<std::size_t>(n + k_)];
}

FourierPolynomial FourierPolynomial::scaled(double s) const {
  std::vector<Complex> a = a_;
  for (auto& c : a) c *= s;
  return FourierPolynomial(k_, m_, std::move(a), epsilon_, delta_);
}

Complex FourierPolynomial::at(Complex z) const {
  Complex acc{0.0, 0.0};
  for (std::size_t j = a_.size(); j-- > 0;) acc = acc * z + a_[j];
  return acc * std::pow(z, -k_);
}

Complex eval_fourier(const FourierPolynomial& s, double x) {
  return s.at(std::polar(1.0, x));
}

// ---------------------------------------------------------------------------
// Sign approximation

double sign_degree_bound(double epsilon, double delta, const SignPolyOptions& opts) {
  return opts.c_deg / epsilon * std::max(1.0, std::log(1.0 / delta));
}

RealOddPolynomial build_sign_poly(double epsilon, double delta, const SignPolyOptions& opts) {
  require_unit_interval(epsilon, "build_sign_poly: epsilon");
  require_unit_interval(delta, "build_sign_poly: delta");

  // Error budget on |x| >= eps/2: erf tail delta/2, truncation delta/8,
  // rescaling (delta/8 + shrink). Total stays below delta.
  const double steep = erfc_inverse(delta / 2.0) / (epsilon / 2.0);  // 1 / (sigma sqrt 2)
  auto target = [steep](double x) { return std::erf(steep * x); };

  std::size_t nodes = 1024;
  std::vector<double> c;
  for (;;) {
    c = chebyshev_coefficients(target, nodes);
    double edge = 0.0;
    for (std::size_t n = c.size() - 32; n < c.size(); ++n) edge = std::max(edge, std::abs(c[n]));
    if (edge < 1e-14 || nodes >= (std::size_t{1} << 20)) break;
    nodes *= 2;
  }

  // Smallest odd degree whose discarded tail is at most delta / 8.
  std::vector<double> tail(c.size() + 1, 0.0);
  for (std::size_t n = c.size(); n-- > 0;) tail[n] = tail[n + 1] + std::abs(c[n]);
  std::size_t deg = 1;
  while (deg + 1 < c.size() && tail[deg + 1] > delta / 8.0) deg += 2;
  const double discarded = tail[deg + 1];

  const double scale = (1.0 - opts.shrink) / (1.0 + discarded);
  std::vector<double> cheb(deg + 1, 0.0);
  for (std::size_t n = 1; n <= deg; n += 2) cheb[n] = scale * c[n];
  RealOddPolynomial p(std::move(cheb), epsilon, delta);

  // Grid certification.
  const std::size_t grid = std::max<std::size_t>(opts.grid_points, 3);
  double worst_mod = 0.0, worst_mod_x = 0.0;
  double worst_sign = 0.0, worst_sign_x = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid - 1);
    const double v = p(x);
    if (std::abs(v) > worst_mod) {
      worst_mod = std::abs(v);
      worst_mod_x = x;
    }
    if (std::abs(x) >= epsilon / 2.0) {
      const double err = std::abs(v - (x > 0 ? 1.0 : -1.0));
      if (err > worst_sign) {
        worst_sign = err;
        worst_sign_x = x;
      }
    }
  }
  if (worst_mod > 1.0 + 1e-9) {
    throw CertificationError("build_sign_poly: |P| exceeds 1 on the grid", worst_mod_x,
                             worst_mod);
  }
  if (worst_sign > delta + 1e-9) {
    throw CertificationError("build_sign_poly: sign error exceeds delta on the grid",
                             worst_sign_x, worst_sign);
  }
  if (static_cast<double>(p.degree()) > sign_degree_bound(epsilon, delta, opts)) {
    throw CertificationError("build_sign_poly: degree exceeds the documented bound", 0.0,
                             p.degree());
  }
  return p;
}

FourierPolynomial to_fourier(const RealOddPolynomial& p) {
  // T_n(sin x) = (-1)^{(n-1)/2} sin(nx) for odd n.
  const int deg = p.degree();
  std::vector<Complex> a(static_cast<std::size_t>(2 * deg + 1), Complex{0.0, 0.0});
  const Complex inv_2i{0.0, -0.5};
  for (int n = 1; n <= deg; n += 2) {
    const double sgn = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    const Complex an = p.chebyshev()[static_cast<std::size_t>(n)] * sgn * inv_2i;
    a[static_cast<std::size_t>(deg + n)] = an;
    a[static_cast<std::size_t>(deg - n)] = -an;
  }
  return FourierPolynomial(deg, deg, std::move(a), p.epsilon(), p.delta());
}

FourierPolynomial build_sign_fourier(double epsilon, double delta,
                                     const SignPolyOptions& opts) {
  require_unit_interval(epsilon, "build_sign_fourier: epsilon");
  const double inner = 2.0 * std::sin(epsilon / 2.0);
  const FourierPolynomial s = to_fourier(build_sign_poly(inner, delta, opts));
  return FourierPolynomial(s.neg_degree(), s.pos_degree(), s.coefficients(), epsilon, delta);
}

FourierCertificate certify_sign_fourier(const FourierPolynomial& s, std::size_t grid_points) {
  FourierCertificate cert;
  const double eps = s.epsilon();
  const std::size_t grid = std::max<std::size_t>(grid_points, 3);
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(grid - 1);
    const Complex v = eval_fourier(s, x);
    cert.max_modulus = std::max(cert.max_modulus, std::abs(v));
    cert.max_odd_defect = std::max(cert.max_odd_defect, std::abs(v + eval_fourier(s, -x)));
    const double ax = std::abs(x);
    if (ax >= eps / 2.0 && ax <= kPi - eps / 2.0) {
      const double err = std::abs(v - Complex(x > 0 ? 1.0 : -1.0, 0.0));
      if (err > cert.max_sign_error) {
        cert.max_sign_error = err;
        cert.worst_sign_x = x;
      }
    }
  }
  cert.passed = cert.max_modulus <= 1.0 + 1e-9 && cert.max_odd_defect <= 1e-9 &&
                cert.max_sign_error <= s.delta() + 1e-9;
  return cert;
}

HermitianOperator apply_spectral(const FourierPolynomial& s,
                                 const SpectralDecomposition& decomp, double shift) {
  const double limit = kPi - s.epsilon() / 2.0;
  RealVector values(decomp.dim());
  for (Index j = 0; j < decomp.dim(); ++j) {
    const double x = decomp.eigenvalues(j) - shift;
    if (!(x > -limit && x < limit)) {
      std::ostringstream os;
      os << "apply_spectral: shifted eigenvalue " << x << " (eigenvalue "
         << decomp.eigenvalues(j) << ") lies outside (-" << limit << ", " << limit << ")";
      throw RangeError(os.str());
    }
    const Complex v = eval_fourier(s, x);
    if (std::abs(v.imag()) > 1e-9) {
      throw ValidationError("apply_spectral: polynomial is not real on the spectrum");
    }
    values(j) = v.real();
  }
  return HermitianOperator(decomp.eigenvectors * values.cast<Complex>().asDiagonal() *
                           decomp.eigenvectors.adjoint());
}

HermitianOperator apply_spectral(const FourierPolynomial& s, const HermitianOperator& h,
                                 double shift) {
  return apply_spectral(s, eig(h), shift);
}

}  // namespace dyncool
