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

#include "dyncool/dyson_verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dyncool/errors.hpp"
#include "dyncool/parallel.hpp"

namespace dyncool {
namespace {

constexpr double kPi = std::numbers::pi;

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
}

void require_pair(const HermitianOperator& a, const Projector& p) {
  if (a.dim() != p.dim()) throw ValidationError("A and the projector differ in dimension");
  require_normalized(a, "A");
}

Matrix complement(const Projector& p) {
  return Matrix::Identity(p.dim(), p.dim()) - p.matrix();
}

HermitianOperator perturbed(const HermitianOperator& a, const Projector& p, double delta) {
  return reflection(p) + a.scaled(std::sqrt(delta) / 2.0);
}

int resolve_intervals(const QuadratureSpec& grid, double t) {
  int n = grid.intervals > 0 ? grid.intervals
                             : std::max(256, static_cast<int>(std::ceil(64.0 * t)));
  return (n + 3) / 4 * 4;
}

// Cumulative integral of samples f on a uniform grid with an even number of
// intervals: composite Simpson at even nodes, the three-point one-interval
// rule h (5 f0 + 8 f1 - f2) / 12 at odd nodes.
template <typename T>
std::vector<T> cumulative_simpson(const std::vector<T>& f, double h) {
  const std::size_t n = f.size() - 1;
  std::vector<T> out(f.size());
  out[0] = f[0] * 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i % 2 == 0) {
      out[i] = out[i - 2] + (f[i - 2] + 4.0 * f[i - 1] + f[i]) * (h / 3.0);
    } else {
      out[i] = out[i - 1] + (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]) * (h / 12.0);
    }
  }
  return out;
}

struct Split {
  Matrix diag;   // (I-P) A (I-P) + P A P
  Matrix up;     // (I-P) A P, carries e^{2is}
  Matrix down;   // P A (I-P), carries e^{-2is}
};

Split split(const Matrix& a, const Projector& p) {
  const Matrix& pm = p.matrix();
  const Matrix q = complement(p);
  return {q * a * q + pm * a * pm, q * a * pm, pm * a * q};
}

// U_0(t) .. U_K(t) on `intervals` uniform steps.
std::vector<Matrix> dyson_terms_at(const Split& sp, double delta, int max_order, double t,
                                   int intervals) {
  const Index dim = sp.diag.rows();
  const double h = t / intervals;
  const Complex c = std::sqrt(delta) / Complex(0.0, 2.0);
  std::vector<Matrix> atilde(static_cast<std::size_t>(intervals) + 1);
  for (int n = 0; n <= intervals; ++n) {
    const double s = n * h;
    atilde[n] = sp.diag + std::polar(1.0, 2.0 * s) * sp.up + std::polar(1.0, -2.0 * s) * sp.down;
  }
  std::vector<Matrix> prev(atilde.size(), Matrix::Identity(dim, dim));
  std::vector<Matrix> out{Matrix::Identity(dim, dim)};
  std::vector<Matrix> f(atilde.size());
  for (int k = 1; k <= max_order; ++k) {
    for (std::size_t n = 0; n < atilde.size(); ++n) f[n] = atilde[n] * prev[n];
    prev = cumulative_simpson(f, h);
    for (auto& m : prev) m *= c;
    out.push_back(prev.back());
  }
  return out;
}

double dyson_norm_bound(int k, double t, double delta) {
  return std::pow(t, k) * std::pow(delta, k / 2.0) / (std::tgamma(k + 1.0) * std::pow(2.0, k));
}

std::string describe(Index dim, Index rank, double delta, std::size_t idx) {
  std::ostringstream os;
  os << "dim=" << dim << " rank=" << rank << " delta=" << delta << " instance=" << idx;
  return os.str();
}

struct Instance {
  HermitianOperator a = HermitianOperator::zero(1);
  Projector p = Projector::zero(1);
  Index rank = 0;
};

Instance random_instance(Index dim, Rng& rng) {
  std::uniform_int_distribution<Index> pick(1, std::max<Index>(1, dim - 1));
  const Index rank = pick(rng);
  Instance in;
  in.a = random_hermitian(dim, rng, 1.0);
  in.p = random_projector(dim, rank, rng);
  in.rank = rank;
  return in;
}

CertSummary finish(std::string claim, std::vector<CertRecord> records, std::string note = {}) {
  CertSummary s;
  s.claim = std::move(claim);
  s.records = std::move(records);
  s.passed = !s.records.empty() && std::all_of(s.records.begin(), s.records.end(),
                                                [](const CertRecord& r) { return r.passed; });
  s.note = std::move(note);
  return s;
}

// Grid of (dim, instance, delta) shared by the leakage and effective sweeps.
template <typename Measure>
std::vector<CertRecord> instance_sweep(const SweepOptions& opts, std::uint64_t salt,
                                       const std::string& claim, Measure measure) {
  const std::vector<Index> dims{2, 4, 8, 16};
  const std::vector<double> deltas{0.25, 0.04, 0.01};
  constexpr int kPerDim = 20;
  const std::size_t total = dims.size() * kPerDim * deltas.size();
  std::vector<CertRecord> records(total);
  parallel_for(total, opts.workers, [&](std::size_t idx) {
    const std::size_t di = idx / (kPerDim * deltas.size());
    const std::size_t rem = idx % (kPerDim * deltas.size());
    const std::size_t inst = rem / deltas.size();
    const double delta = deltas[rem % deltas.size()];
    // One (A, P) pair per (dim, instance), reused across delta.
    Rng rng = substream(opts.seed ^ salt, di * kPerDim + inst);
    const Instance in = random_instance(dims[di], rng);
    CertRecord r;
    r.claim = claim;
    r.instance = describe(dims[di], in.rank, delta, inst);
    r.bound = delta;
    r.measured = measure(in, delta);
    r.slack = 0.0;
    r.passed = r.measured <= r.bound;
    records[idx] = r;
  });
  return records;
}

}  // namespace

double effective_time(double delta) {
  require_delta(delta);
  return 1.0 / std::sqrt(delta);
}

double leakage(const HermitianOperator& a, const Projector& p, double delta) {
  require_delta(delta);
  require_pair(a, p);
  const double t = kPi * std::ceil(1.0 / (kPi * std::sqrt(delta)) - 1e-12);
  const Matrix u = evolve(perturbed(a, p, delta), t).matrix();
  const double n = spectral_norm(complement(p) * u * p.matrix());
  return n * n;
}

double effective_error(const HermitianOperator& a, const Projector& p, double delta) {
  require_delta(delta);
  require_pair(a, p);
  const double t = effective_time(delta);
  const Matrix& pm = p.matrix();
  const Matrix u = evolve(perturbed(a, p, delta), t).matrix();
  const Matrix eff = evolve(HermitianOperator(0.5 * pm * a.matrix() * pm), 1.0).matrix();
  const double n = spectral_norm(std::polar(1.0, -t) * pm * u * pm - eff * pm);
  return n * n;
}

Matrix interaction_operator(const Matrix& a, const Projector& p, double s) {
  const Split sp = split(a, p);
  return sp.diag + std::polar(1.0, 2.0 * s) * sp.up + std::polar(1.0, -2.0 * s) * sp.down;
}

DysonTerm dyson_term(const HermitianOperator& a, const Projector& p, double delta, int k,
                     double t, QuadratureSpec grid) {
  require_delta(delta);
  require_pair(a, p);
  if (k < 0 || k > kMaxDysonOrder) throw ValidationError("Dyson order must lie in [0, 6]");
  if (!(t >= 0.0)) throw ValidationError("time must be non-negative");
  DysonTerm term;
  term.order = k;
  term.t = t;
  term.delta = delta;
  term.bound = k == 0 ? 1.0 : dyson_norm_bound(k, t, delta);
  if (k == 0 || t == 0.0) {
    term.op = k == 0 ? Matrix(Matrix::Identity(a.dim(), a.dim()))
                     : Matrix(Matrix::Zero(a.dim(), a.dim()));
    term.slack = 1e-8;
    return term;
  }
  const Split sp = split(a.matrix(), p);
  const bool adaptive = grid.intervals <= 0;
  int n = resolve_intervals(grid, t);
  for (;;) {
    const Matrix fine = dyson_terms_at(sp, delta, k, t, n).back();
    const Matrix coarse = dyson_terms_at(sp, delta, k, t, n / 2).back();
    term.op = fine;
    term.quadrature_error = spectral_norm(fine - coarse);
    term.intervals = n;
    if (term.quadrature_error <= std::max(0.1 * term.bound, 1e-8)) break;
    if (!adaptive || n >= (1 << 16)) {
      std::ostringstream os;
      os << "dyson_term: quadrature error " << term.quadrature_error << " exceeds 10% of bound "
         << term.bound << " at " << n << " intervals";
      throw ResolutionError(os.str());
    }
    n *= 2;
  }
  term.slack = std::max(1e-8, 2.0 * term.quadrature_error);
  return term;
}

Matrix dyson_series(const HermitianOperator& a, const Projector& p, double delta, int max_order,
                    double t, QuadratureSpec grid) {
  require_delta(delta);
  require_pair(a, p);
  if (max_order < 0 || max_order > kMaxDysonOrder) {
    throw ValidationError("Dyson order must lie in [0, 6]");
  }
  const std::vector<Matrix> terms =
      dyson_terms_at(split(a.matrix(), p), delta, max_order, t, resolve_intervals(grid, t));
  Matrix sum = Matrix::Zero(a.dim(), a.dim());
  for (const auto& m : terms) sum += m;
  return evolve(reflection(p), t).matrix() * sum;
}

TermLeakage per_term_leakage(const HermitianOperator& a, const Projector& p, double delta, int k,
                             double t, QuadratureSpec grid) {
  require_delta(delta);
  require_pair(a, p);
  if (k < 1) throw ValidationError("per_term_leakage requires order >= 1");
  TermLeakage out;
  out.order = k;
  out.bound = std::pow(t, k - 1) * std::pow(delta, k / 2.0) / (std::tgamma(k) * 2.0);
  if (k == 1) {
    // (I-P) U_1 P = (sqrt(delta)/2i) (I-P) A P int_0^t e^{2is} ds, |int| = |sin t|.
    const double cross = spectral_norm(complement(p) * a.matrix() * p.matrix());
    out.value = std::sqrt(delta) / 2.0 * std::abs(std::sin(t)) * cross;
    out.slack = 1e-12;
    out.analytic = true;
    return out;
  }
  const DysonTerm term = dyson_term(a, p, delta, k, t, grid);
  out.value = spectral_norm(complement(p) * term.op * p.matrix());
  out.slack = term.slack;
  return out;
}

PathWeight path_weight(const std::vector<int>& j, double t, QuadratureSpec grid) {
  if (j.empty()) throw ValidationError("path_weight: J must have at least one entry");
  for (int v : j) {
    if (v != 0 && v != 1) throw ValidationError("path_weight: J entries must be 0 or 1");
  }
  if (!(t >= 0.0)) throw ValidationError("time must be non-negative");
  const int k = static_cast<int>(j.size()) + 1;
  // Frequencies 2 (J_n - J_{n-1}) with J_0 = J_k = 1.
  std::vector<double> omega(static_cast<std::size_t>(k));
  for (int n = 1; n <= k; ++n) {
    const int cur = n == k ? 1 : j[n - 1];
    const int prev = n == 1 ? 1 : j[n - 2];
    omega[n - 1] = 2.0 * (cur - prev);
  }
  auto integrate = [&](int intervals) {
    const double h = t / intervals;
    std::vector<Complex> inner(static_cast<std::size_t>(intervals) + 1, Complex(1.0, 0.0));
    for (int n = k; n >= 1; --n) {
      std::vector<Complex> f(inner.size());
      for (int i = 0; i <= intervals; ++i) f[i] = std::polar(1.0, omega[n - 1] * i * h) * inner[i];
      inner = cumulative_simpson(f, h);
    }
    return inner.back();
  };
  const int n = resolve_intervals(grid, t);
  PathWeight w;
  w.j = j;
  w.value = integrate(n);
  w.quadrature_error = std::abs(w.value - integrate(n / 2));
  w.slack = std::max(1e-8, 2.0 * w.quadrature_error);
  w.bound = std::pow(t, k - 1) / std::tgamma(k);
  return w;
}

TransitionMatrix transition_matrix(const SpectralDecomposition& s, const HermitianOperator& a,
                                   double threshold) {
  if (a.dim() != s.dim()) throw ValidationError("transition_matrix: dimension mismatch");
  const Index n = s.dim();
  const Matrix b = s.eigenvectors.adjoint() * a.matrix() * s.eigenvectors;
  TransitionMatrix out;
  out.threshold = threshold;
  out.first_order = Eigen::MatrixXd::Zero(n, n);
  out.exact = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    Eigen::VectorXd mask(n);
    for (Index i = 0; i < n; ++i) mask(i) = s.eigenvalues(i) <= s.eigenvalues(j) + 1e-12 ? 1.0 : 0.0;
    double downhill = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (i == j || mask(i) == 0.0) continue;
      out.first_order(i, j) = std::norm(b(i, j)) / 4.0;
      downhill += out.first_order(i, j);
    }
    out.first_order(j, j) = 1.0 - downhill;
    const Matrix pm = mask.cast<Complex>().asDiagonal();
    const Matrix u = evolve(HermitianOperator(0.5 * pm * b * pm), 1.0).matrix();
    out.exact.col(j) = u.col(j).cwiseAbs2();
  }
  return out;
}

HermitianOperator sample_gue(Index n, Rng& rng) {
  if (n < 2) throw ValidationError("sample_gue requires N >= 2");
  std::normal_distribution<double> real(0.0, 1.0);
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    m(i, i) = real(rng);
    for (Index j = i + 1; j < n; ++j) {
      m(i, j) = complex_normal(rng);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return HermitianOperator(m / std::sqrt(static_cast<double>(n)));
}

CoolingProbability cooling_probability(const SpectralDecomposition& s, Index j, int trials,
                                       Rng& rng) {
  const Index n = s.dim();
  if (j < 0 || j >= n) throw ValidationError("cooling_probability: eigen-index out of range");
  if (trials < 2) throw ValidationError("cooling_probability: need at least two trials");
  std::vector<Index> below;
  for (Index i = 0; i < n; ++i) {
    if (s.eigenvalues(i) < s.eigenvalues(j)) below.push_back(i);
  }
  CoolingProbability out;
  out.predicted = static_cast<double>(below.size()) / (4.0 * n);
  const double scale = std::sqrt(static_cast<double>(n));
  double sum = 0.0;
  double sum2 = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const Matrix m = sample_gue(n, rng).matrix() * scale;
    const Vector col = m * s.eigenvectors.col(j);
    double v = 0.0;
    for (Index i : below) v += std::norm(s.eigenvectors.col(i).dot(col));
    v /= 4.0 * n;
    sum += v;
    sum2 += v * v;
  }
  out.empirical = sum / trials;
  const double var = std::max(0.0, (sum2 - trials * out.empirical * out.empirical) / (trials - 1));
  out.standard_error = std::sqrt(var / trials);
  return out;
}

// ---------------------------------------------------------------------------

CertSummary certify_leakage(const SweepOptions& opts) {
  auto records = instance_sweep(opts, 0x4c45414bULL, "leakage_bound",
                                [](const Instance& in, double delta) {
                                  return leakage(in.a, in.p, delta);
                                });
  std::size_t small = 0;
  std::size_t at_quarter = 0;
  for (const auto& r : records) {
    if (r.bound == 0.25) {
      ++at_quarter;
      if (r.measured <= r.bound / 10.0) ++small;
    }
  }
  std::ostringstream note;
  note << small << "/" << at_quarter << " instances at delta=0.25 below delta/10";
  CertSummary s = finish("leakage_bound", std::move(records), note.str());
  s.passed = s.passed && 10 * small >= 3 * at_quarter;
  return s;
}

CertSummary certify_effective(const SweepOptions& opts) {
  return finish("effective_evolution",
                instance_sweep(opts, 0x45464645ULL, "effective_evolution",
                               [](const Instance& in, double delta) {
                                 return effective_error(in.a, in.p, delta);
                               }));
}

CertSummary certify_dyson_terms(const SweepOptions& opts) {
  constexpr int kInstances = 30;
  const std::vector<double> deltas{0.25, 0.04, 0.01};
  std::vector<CertRecord> records(kInstances * 6);
  parallel_for(kInstances, opts.workers, [&](std::size_t idx) {
    Rng rng = substream(opts.seed ^ 0x4459534fULL, idx);
    const Instance in = random_instance(4, rng);
    const double delta = deltas[idx % deltas.size()];
    const double t = kPi * std::ceil(1.0 / (kPi * std::sqrt(delta)) - 1e-12);
    for (int k = 1; k <= 3; ++k) {
      const DysonTerm term = dyson_term(in.a, in.p, delta, k, t);
      CertRecord norm;
      norm.claim = "dyson_term_norm";
      norm.instance = describe(4, in.rank, delta, idx) + " k=" + std::to_string(k);
      norm.bound = term.bound;
      norm.measured = spectral_norm(term.op);
      norm.slack = term.slack;
      norm.passed = norm.measured <= norm.bound + norm.slack;
      records[idx * 6 + (k - 1) * 2] = norm;

      const TermLeakage tl = per_term_leakage(in.a, in.p, delta, k, t);
      CertRecord leak;
      leak.claim = "dyson_term_leakage";
      leak.instance = norm.instance;
      leak.bound = tl.bound;
      leak.measured = tl.value;
      leak.slack = tl.slack;
      leak.passed = leak.measured <= leak.bound + leak.slack;
      records[idx * 6 + (k - 1) * 2 + 1] = leak;
    }
  });
  return finish("dyson_terms", std::move(records));
}

CertSummary certify_first_order_cancellation(const SweepOptions& opts) {
  std::vector<CertRecord> records;
  for (int m = 1; m <= 3; ++m) {
    for (std::size_t idx = 0; idx < 10; ++idx) {
      Rng rng = substream(opts.seed ^ 0x4c454d37ULL, static_cast<std::uint64_t>(m) * 100 + idx);
      const Instance in = random_instance(4, rng);
      const TermLeakage tl = per_term_leakage(in.a, in.p, 0.04, 1, m * kPi);
      CertRecord r;
      r.claim = "first_order_cancellation";
      r.instance = describe(4, in.rank, 0.04, idx) + " t=" + std::to_string(m) + "pi";
      r.bound = 1e-10;
      r.measured = tl.value;
      r.passed = tl.value <= r.bound;
      records.push_back(r);
    }
  }
  return finish("first_order_cancellation", std::move(records));
}

CertSummary certify_path_weights(const SweepOptions& opts) {
  const std::vector<double> times{1.0, kPi, 5.0, 2.0 * kPi};
  std::vector<CertRecord> records;
  Rng rng = substream(opts.seed ^ 0x50415448ULL, 0);
  std::bernoulli_distribution coin(0.5);
  for (int k = 2; k <= 4; ++k) {
    for (double t : times) {
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<int> j(static_cast<std::size_t>(k - 1));
        do {
          for (auto& v : j) v = coin(rng) ? 1 : 0;
        } while (std::all_of(j.begin(), j.end(), [](int v) { return v == 1; }));
        const PathWeight w = path_weight(j, t);
        CertRecord r;
        r.claim = "path_weight";
        std::ostringstream os;
        os << "k=" << k << " t=" << t << " J=";
        for (int v : j) os << v;
        r.instance = os.str();
        r.bound = w.bound;
        r.measured = std::abs(w.value);
        r.slack = w.slack;
        r.passed = r.measured <= r.bound + r.slack;
        records.push_back(r);
      }
    }
  }
  return finish("path_weight", std::move(records));
}

CertSummary certify_dyson_convergence(const SweepOptions& opts) {
  std::vector<CertRecord> records;
  for (std::size_t idx = 0; idx < 5; ++idx) {
    Rng rng = substream(opts.seed ^ 0x434f4e56ULL, idx);
    const Instance in = random_instance(4, rng);
    const double delta = 0.04;
    const double t = 5.0;
    const Matrix exact = evolve(perturbed(in.a, in.p, delta), t).matrix();
    CertRecord r;
    r.claim = "dyson_convergence";
    r.instance = describe(4, in.rank, delta, idx) + " t=5 orders<=6";
    r.bound = 1e-3;
    r.measured = spectral_norm(exact - dyson_series(in.a, in.p, delta, 6, t));
    r.passed = r.measured <= r.bound;
    records.push_back(r);
  }
  return finish("dyson_convergence", std::move(records));
}

std::vector<CertSummary> certify_all(const SweepOptions& opts) {
  return {certify_leakage(opts),      certify_effective(opts),
          certify_dyson_terms(opts),  certify_first_order_cancellation(opts),
          certify_path_weights(opts), certify_dyson_convergence(opts)};
}

}  // namespace dyncool
