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

#include "dyncool/gqsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace dyncool {

namespace {

using Poly = std::vector<Complex>;  // ordinary polynomial, index = power

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// P(e^{2 pi i j / N}) for j = 0..N-1; requires N > k + m.
std::vector<Complex> grid_values(const FourierPolynomial& p, std::size_t n) {
  std::vector<Complex> coeffs(n, Complex{0.0, 0.0});
  const int k = p.neg_degree();
  for (int e = -k; e <= p.pos_degree(); ++e) {
    const auto idx = static_cast<std::size_t>((e % static_cast<int>(n) + static_cast<int>(n)) %
                                              static_cast<int>(n));
    coeffs[idx] += p.coefficient(e);
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<Complex> values;
  fft.inv(values, coeffs);
  return values;
}

std::size_t grid_size_for(const FourierPolynomial& p) {
  const auto deg = static_cast<std::size_t>(p.neg_degree() + p.pos_degree());
  return std::max<std::size_t>(std::size_t{1} << 14, next_pow2(32 * (deg + 1)));
}

Complex horner(const Poly& f, Complex z) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * z + f[i];
  return acc;
}

Complex horner_derivative(const Poly& f, Complex z) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = f.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * f[i];
  return acc;
}

// Roots of f (degree >= 1, nonzero leading coefficient) via the companion
// matrix, each polished by a few Newton steps on f itself.
std::vector<Complex> polynomial_roots(const Poly& f) {
  const Index deg = static_cast<Index>(f.size()) - 1;
  Matrix companion = Matrix::Zero(deg, deg);
  const Complex lead = f.back();
  for (Index i = 0; i < deg; ++i) companion(0, i) = -f[static_cast<std::size_t>(deg - 1 - i)] / lead;
  for (Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("complete: companion eigensolver failed", 0.0);
  }
  std::vector<Complex> roots(static_cast<std::size_t>(deg));
  for (Index i = 0; i < deg; ++i) {
    Complex r = solver.eigenvalues()(i);
    for (int it = 0; it < 5; ++it) {
      const Complex d = horner_derivative(f, r);
      if (std::abs(d) == 0.0) break;
      const Complex step = horner(f, r) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(r))) break;
    }
    roots[static_cast<std::size_t>(i)] = r;
  }
  return roots;
}

FourierPolynomial q_from_outer(const FourierPolynomial& p, Poly g) {
  // Fix the global phase so g(0) is real and positive; both completion routes
  // then agree coefficient by coefficient.
  if (std::abs(g[0]) > 0.0) {
    const Complex phase = std::conj(g[0]) / std::abs(g[0]);
    for (auto& c : g) c *= phase;
  }
  const int k = p.neg_degree();
  const int m = p.pos_degree();
  std::vector<Complex> q(static_cast<std::size_t>(k + m + 1), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < g.size() && i < q.size(); ++i) q[i] = g[i];
  return FourierPolynomial(k, m, std::move(q));
}

FourierPolynomial complete_roots(const FourierPolynomial& p) {
  const int n = p.neg_degree() + p.pos_degree();
  // F(z) = 1 - P(z) conj(P)(1/z); f(z) = z^n F(z) has degree 2n.
  Poly f(static_cast<std::size_t>(2 * n + 1), Complex{0.0, 0.0});
  const auto& a = p.coefficients();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      const auto lag = static_cast<long>(i) - static_cast<long>(j);
      f[static_cast<std::size_t>(lag + n)] -= a[i] * std::conj(a[j]);
    }
  }
  f[static_cast<std::size_t>(n)] += 1.0;
  const double constant = f[static_cast<std::size_t>(n)].real();

  double fmax = 0.0;
  for (const auto& c : f) fmax = std::max(fmax, std::abs(c));
  std::size_t low = 0;
  while (low < static_cast<std::size_t>(n) && std::abs(f[low]) <= 1e-14 * fmax) ++low;
  // Symmetric stripping: `low` roots at zero pair with `low` roots at infinity;
  // the outer factor keeps the ones at infinity (no z factor).
  Poly reduced(f.begin() + static_cast<long>(low), f.end() - static_cast<long>(low));

  Poly g{Complex{1.0, 0.0}};
  if (reduced.size() > 1) {
    std::vector<Complex> roots = polynomial_roots(reduced);
    std::sort(roots.begin(), roots.end(),
              [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
    const std::size_t inside = roots.size() / 2;
    if (std::abs(roots[inside - 1]) >= 1.0 || std::abs(roots[inside]) <= 1.0) {
      std::ostringstream os;
      os << "complete: roots do not split across the unit circle (|r| = "
         << std::abs(roots[inside - 1]) << ", " << std::abs(roots[inside]) << ")";
      throw NumericError(os.str(), std::abs(std::abs(roots[inside - 1]) - 1.0));
    }
    for (std::size_t r = 0; r < inside; ++r) {
      Poly next(g.size() + 1, Complex{0.0, 0.0});
      for (std::size_t i = 0; i < g.size(); ++i) {
        next[i + 1] += g[i];
        next[i] -= roots[r] * g[i];
      }
      g = std::move(next);
    }
  }
  double norm2 = 0.0;
  for (const auto& c : g) norm2 += std::norm(c);
  const double scale = std::sqrt(constant / norm2);
  for (auto& c : g) c *= scale;
  return q_from_outer(p, std::move(g));
}

FourierPolynomial complete_cepstral(const FourierPolynomial& p) {
  const std::size_t n = static_cast<std::size_t>(p.neg_degree() + p.pos_degree());
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  double last_defect = 0.0;
  for (std::size_t grid = std::max<std::size_t>(std::size_t{1} << 12, next_pow2(16 * (n + 1)));
       grid <= (std::size_t{1} << 22); grid *= 2) {
    const std::vector<Complex> values = grid_values(p, grid);
    std::vector<Complex> log_f(grid);
    for (std::size_t j = 0; j < grid; ++j) {
      const double fj = 1.0 - std::norm(values[j]);
      if (!(fj > 0.0)) throw MarginError("complete: |P| reaches 1 on the unit circle");
      log_f[j] = std::log(fj);
    }
    std::vector<Complex> cep;
    fft.fwd(cep, log_f);
    const double inv = 1.0 / static_cast<double>(grid);
    // Analytic (causal) half of 0.5 * log f.
    std::vector<Complex> half(grid, Complex{0.0, 0.0});
    half[0] = 0.5 * cep[0] * inv;
    for (std::size_t j = 1; j < grid / 2; ++j) half[j] = cep[j] * inv;
    std::vector<Complex> exponent;
    fft.inv(exponent, half);
    for (auto& e : exponent) e = std::exp(e);
    std::vector<Complex> outer;
    fft.fwd(outer, exponent);
    Poly g(n + 1);
    for (std::size_t j = 0; j <= n; ++j) g[j] = outer[j] * inv;
    FourierPolynomial q = q_from_outer(p, std::move(g));
    last_defect = completion_defect(CompletionPair{p, q}, std::max<std::size_t>(10000, 8 * n));
    if (last_defect <= 1e-11) return q;
  }
  throw NumericError("complete: cepstral factorization did not converge", last_defect);
}

}  // namespace

void AngleSequence::validate() const {
  const auto expected = static_cast<std::size_t>(k + m + 1);
  if (k < 0 || m < 0 || theta.size() != expected || phi.size() != expected) {
    std::ostringstream os;
    os << "AngleSequence: expected " << expected << " angles for (k=" << k << ", m=" << m
       << "), got theta=" << theta.size() << " phi=" << phi.size();
    throw ValidationError(os.str());
  }
}

UnitaryOperator rotation_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix r(2, 2);
  r(0, 0) = std::polar(c, lambda + phi);
  r(0, 1) = std::polar(s, phi);
  r(1, 0) = std::polar(s, lambda);
  r(1, 1) = -c;
  return UnitaryOperator(r);
}

double max_modulus(const FourierPolynomial& p) {
  double best = 0.0;
  for (const auto& v : grid_values(p, grid_size_for(p))) best = std::max(best, std::abs(v));
  return best;
}

FourierPolynomial with_margin(const FourierPolynomial& p, double eta) {
  const double mx = max_modulus(p);
  if (mx <= 1.0 - eta) return p;
  return p.scaled((1.0 - eta) / mx);
}

CompletionPair complete(const FourierPolynomial& p, double eta, CompletionMethod method) {
  if (!(eta >= 1e-6 && eta < 1.0)) {
    throw ValidationError("complete: margin must lie in [1e-6, 1)");
  }
  const double mx = max_modulus(p);
  if (mx > 1.0 - eta) {
    std::ostringstream os;
    os << "complete: max |P| = " << mx << " exceeds 1 - eta = " << 1.0 - eta;
    throw MarginError(os.str());
  }
  const int total = p.neg_degree() + p.pos_degree();
  if (method == CompletionMethod::automatic) {
    method = 2 * total <= kRootCompletionMaxDegree ? CompletionMethod::roots
                                                   : CompletionMethod::cepstral;
  }
  FourierPolynomial q =
      method == CompletionMethod::roots ? complete_roots(p) : complete_cepstral(p);
  CompletionPair pair{p, std::move(q)};
  const double defect = completion_defect(pair, std::max<std::size_t>(10000, 8 * total));
  if (defect > 1e-8) {
    throw NumericError("complete: |P|^2 + |Q|^2 deviates from 1", defect);
  }
  return pair;
}

double completion_defect(const CompletionPair& pair, std::size_t grid_points) {
  double worst = 0.0;
  for (std::size_t j = 0; j < grid_points; ++j) {
    const double x = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                             static_cast<double>(grid_points);
    const Complex z = std::polar(1.0, x);
    worst = std::max(worst, std::abs(std::norm(pair.p.at(z)) + std::norm(pair.q.at(z)) - 1.0));
  }
  return worst;
}

AngleSequence compute_angles(const CompletionPair& pair, double residual_tol) {
  const int k = pair.p.neg_degree();
  const int m = pair.p.pos_degree();
  if (pair.q.neg_degree() != k || pair.q.pos_degree() != m) {
    throw ValidationError("compute_angles: P and Q must share the degree range");
  }
  const auto d = static_cast<std::size_t>(k + m);
  // z^k P and z^k Q as ordinary polynomials of degree d.
  Poly p = pair.p.coefficients();
  Poly q = pair.q.coefficients();

  AngleSequence out;
  out.k = k;
  out.m = m;
  out.theta.assign(d + 1, 0.0);
  out.phi.assign(d + 1, 0.0);

  for (std::size_t j = d; j >= 1; --j) {
    const double top = std::norm(p[j]) + std::norm(q[j]);
    const double bottom = std::norm(p[0]) + std::norm(q[0]);
    double theta = 0.0;
    double phi = 0.0;
    if (top >= bottom) {
      theta = std::atan2(std::abs(q[j]), std::abs(p[j]));
      phi = std::arg(p[j]) - std::arg(q[j]);
    } else {
      theta = std::atan2(std::abs(p[0]), std::abs(q[0]));
      phi = std::arg(p[0]) - std::arg(q[0]) - std::numbers::pi;
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex e = std::polar(1.0, -phi);
    // (p, q) <- A^{-1} R^dagger (p, q).
    Poly np(j), nq(j);
    const Complex dropped_low = e * c * p[0] + s * q[0];
    const Complex dropped_high = e * s * p[j] - c * q[j];
    const double residual = std::max(std::abs(dropped_low), std::abs(dropped_high));
    if (residual > residual_tol) {
      std::ostringstream os;
      os << "compute_angles: degree reduction failed at step " << j << " (residual "
         << residual << ")";
      throw SynthesisError(os.str(), j);
    }
    for (std::size_t i = 0; i < j; ++i) {
      np[i] = e * c * p[i + 1] + s * q[i + 1];
      nq[i] = e * s * p[i] - c * q[i];
    }
    p = std::move(np);
    q = std::move(nq);
    out.theta[j] = theta;
    out.phi[j] = phi;
  }
  const double norm = std::norm(p[0]) + std::norm(q[0]);
  if (std::abs(norm - 1.0) > std::max(residual_tol, 1e-12) * 10.0) {
    std::ostringstream os;
    os << "compute_angles: final rotation column has norm^2 " << norm;
    throw SynthesisError(os.str(), 0);
  }
  out.theta[0] = std::atan2(std::abs(q[0]), std::abs(p[0]));
  out.lambda = std::arg(q[0]);
  out.phi[0] = std::arg(p[0]) - std::arg(q[0]);
  return out;
}

GqspCircuit assemble(const AngleSequence& angles, const UnitaryOperator& u) {
  angles.validate();
  const Index n = u.dim();
  const Matrix& um = u.matrix();
  const Matrix udag = um.adjoint();

  auto rotate = [n](Matrix& w, const Matrix& r) {
    const Matrix top = w.topRows(n);
    const Matrix bottom = w.bottomRows(n);
    w.topRows(n) = r(0, 0) * top + r(0, 1) * bottom;
    w.bottomRows(n) = r(1, 0) * top + r(1, 1) * bottom;
  };

  GqspCircuit out;
  Matrix w = kron(rotation_matrix(angles.theta[0], angles.phi[0], angles.lambda).matrix(),
                  Matrix::Identity(n, n));
  const auto m = static_cast<std::size_t>(angles.m);
  for (std::size_t j = 1; j < angles.length(); ++j) {
    if (j <= m) {
      w.topRows(n) = um * w.topRows(n);
      ++out.controlled_u;
    } else {
      w.bottomRows(n) = udag * w.bottomRows(n);
      ++out.controlled_u_dagger;
    }
    rotate(w, rotation_matrix(angles.theta[j], angles.phi[j]).matrix());
  }
  out.block = w.topLeftCorner(n, n);
  out.full = std::move(w);
  return out;
}

Matrix assemble_and_extract(const AngleSequence& angles, const UnitaryOperator& u) {
  return assemble(angles, u).block;
}

}  // namespace dyncool
