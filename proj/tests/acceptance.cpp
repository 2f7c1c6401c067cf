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

// Acceptance harness: prints one PASS/FAIL line per criterion.
//
//   acceptance [--only N[,N...]] [--expected-fail N[,N...]]
//
// Exit status is 0 when every criterion passes or fails only where listed in
// --expected-fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dyncool/cooling.hpp"
#include "dyncool/dyson_verify.hpp"
#include "dyncool/experiment.hpp"
#include "dyncool/gqsp.hpp"
#include "dyncool/random.hpp"
#include "dyncool/signfun.hpp"

namespace {

using namespace dyncool;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double elapsed(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

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

Outcome sign_certification() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream os;
  for (double e : {0.3, 0.1}) {
    for (double d : {0.1, 0.01}) {
      const auto s = build_sign_fourier(e, d);
      const auto cert = certify_sign_fourier(s);
      const double bound = SignPolyOptions{}.c_deg / e * std::log(1.0 / d);
      const bool good = cert.passed && s.pos_degree() <= bound;
      ok = ok && good;
      os << "(" << e << "," << d << "): deg " << s.pos_degree() << " <= " << fmt("%.1f", bound)
         << (good ? "" : " FAILED") << "; ";
    }
  }
  const double secs = elapsed(start);
  os << "C_deg=" << SignPolyOptions{}.c_deg << ", " << fmt("%.2f", secs) << " s";
  return {ok && secs < 10.0, os.str()};
}

Outcome gqsp_reconstruction() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool counts = true;
  for (int i = 0; i < 50; ++i) {
    Rng rng = substream(0xACCE55, static_cast<std::uint64_t>(i));
    const int k = static_cast<int>(rng() % 9);
    const int m = static_cast<int>(rng() % (17 - k));
    std::vector<Complex> c(static_cast<std::size_t>(k + m + 1));
    for (auto& v : c) v = complex_normal(rng);
    FourierPolynomial p(k, m, c);
    p = p.scaled(0.95 / max_modulus(p));
    const auto u = random_unitary(1 + static_cast<Index>(rng() % 8), rng);
    const GqspCircuit circ = assemble(compute_angles(complete(p, 1e-4)), u);
    worst = std::max(worst, max_abs(circ.block - power_sum(p, u.matrix())));
    counts = counts && circ.controlled_u == m && circ.controlled_u_dagger == k;
  }
  const double secs = elapsed(start);
  return {worst <= 1e-7 && counts && secs < 60.0,
          "max error " + fmt("%.2e", worst) + ", query counts " + (counts ? "exact" : "WRONG") +
              ", " + fmt("%.2f", secs) + " s"};
}

Outcome shift_factorization() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (Index dim = 1; dim <= 4; ++dim) {
    for (int n = 1; n <= 4; ++n) {
      Rng rng = substream(0xF4C7, static_cast<std::uint64_t>(dim * 10 + n));
      const HermitianOperator h = random_hermitian(dim, rng);
      const Matrix direct = evolve(shift_operator(h, n).entries, -1.0).matrix();
      worst = std::max(worst, max_abs(shift_evolution_factored(h, n).matrix() - direct));
    }
  }
  const double secs = elapsed(start);
  return {worst <= 1e-10 && secs < 5.0,
          "max deviation " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

std::string worst_record(const CertSummary& s) {
  double ratio = 0.0;
  for (const auto& r : s.records) {
    if (r.bound > 0) ratio = std::max(ratio, r.measured / (r.bound + r.slack));
  }
  return std::to_string(s.records.size()) + " records, worst measured/bound " + fmt("%.3f", ratio);
}

Outcome sweep(const std::function<CertSummary()>& fn, double limit) {
  const auto start = std::chrono::steady_clock::now();
  const CertSummary s = fn();
  const double secs = elapsed(start);
  std::string detail = s.claim + ": " + worst_record(s);
  if (!s.note.empty()) detail += "; " + s.note;
  return {s.passed && secs < limit, detail + ", " + fmt("%.2f", secs) + " s"};
}

Outcome dyson_bounds() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const CertSummary& s : {certify_dyson_terms(), certify_first_order_cancellation(),
                               certify_path_weights()}) {
    ok = ok && s.passed;
    detail += s.claim + (s.passed ? " ok" : " FAILED") + " (" + worst_record(s) + "); ";
  }
  const double secs = elapsed(start);
  return {ok && secs < 120.0, detail + fmt("%.2f", secs) + " s"};
}

Outcome query_scaling() {
  const auto start = std::chrono::steady_clock::now();
  const double eps = 0.1;
  std::vector<double> ds, eih, ua, ua_alt;
  for (int d : {4, 16, 64, 256}) {
    const auto c = query_costs(eps, 1.0 / d);
    ds.push_back(d);
    eih.push_back(static_cast<double>(c.per_iter_eiH) * d);
    ua.push_back(static_cast<double>(c.per_iter_UA) * d);
    ua_alt.push_back(std::ceil(std::sqrt(static_cast<double>(d))) * d);
  }
  const double s_eih = fit_slope(ds, eih);
  const double s_ua = fit_slope(ds, ua);
  const double s_alt = fit_slope(ds, ua_alt);
  const double secs = elapsed(start);
  const bool ok_eih = std::abs(s_eih - 1.5) <= 0.1;
  const bool ok_ua = std::abs(s_ua - 1.5) <= 0.1;
  std::ostringstream os;
  os << "e^{iH} slope " << fmt("%.3f", s_eih) << (ok_eih ? " ok" : " out of band")
     << "; U_A slope " << fmt("%.3f", s_ua) << (ok_ua ? " ok" : " out of band")
     << " (t = pi*ceil(1/(pi sqrt(delta))) rounds t up to a multiple of pi, which inflates"
        " small d; with t = 1/sqrt(delta) the slope is "
     << fmt("%.3f", s_alt) << "), " << fmt("%.3f", secs) << " s";
  return {ok_eih && ok_ua && secs < 5.0, os.str()};
}

ExperimentConfig cooling_config(int d, int trials, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.system.kind = SystemSpec::Kind::random_hermitian;
  cfg.system.dim = 16;
  cfg.system.seed = 16;
  cfg.perturbation.kind = PerturbationSpec::Kind::gue;
  cfg.perturbation.seed = 17;
  cfg.initial_state.kind = InitialStateSpec::Kind::random;
  cfg.epsilon = 0.1;
  cfg.d = d;
  cfg.stop = StoppingRule{d, std::nullopt, std::nullopt};
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

Outcome success_probability() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream os;
  for (int d : {2, 8, 32}) {
    const RunRecord r = run_experiment(cooling_config(d, 1000, 800 + d));
    const double frac = success_fraction(r);
    ok = ok && frac >= 0.25;
    os << "d=" << d << ": " << fmt("%.3f", frac) << "; ";
  }
  const double secs = elapsed(start);
  os << "(threshold 0.25), " << fmt("%.1f", secs) << " s";
  return {ok && secs < 600.0, os.str()};
}

Outcome gue_statistics() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream os;

  // Transition-matrix remainder scaling.
  Rng rng = substream(0x9E11, 0);
  const auto spec = eig(random_hermitian(8, rng));
  const HermitianOperator a = sample_gue(8, rng);
  std::vector<double> ss, errs;
  for (double s : {0.4, 0.2, 0.1, 0.05}) {
    const auto tm = transition_matrix(spec, a.scaled(s), 0.0);
    ss.push_back(s);
    errs.push_back((tm.exact - tm.first_order).cwiseAbs().maxCoeff());
  }
  const double slope = fit_slope(ss, errs);
  const bool ok_slope = std::abs(slope - 3.0) <= 0.3;
  os << "remainder slope " << fmt("%.3f", slope) << (ok_slope ? " ok" : " out of band");

  // Downhill probability from the top of an 8-level spectrum.
  Rng mc = substream(0x9E11, 1);
  const auto cp = cooling_probability(spec, 7, 10000, mc);
  const bool ok_cp = std::abs(cp.empirical - cp.predicted) <= 3.0 * cp.standard_error;
  os << "; cooling probability " << fmt("%.5f", cp.empirical) << " vs "
     << fmt("%.5f", cp.predicted) << " (se " << fmt("%.5f", cp.standard_error) << ")"
     << (ok_cp ? " ok" : " off");

  // Second moments of M = sqrt(N) A.
  const int samples = 10000;
  Rng g = substream(0x9E11, 2);
  double o1 = 0, o2 = 0, d1 = 0, d2 = 0;
  for (int i = 0; i < samples; ++i) {
    const Matrix m = sample_gue(8, g).matrix() * std::sqrt(8.0);
    const double o = std::norm(m(2, 5));
    const double dd = std::norm(m(3, 3));
    o1 += o;
    o2 += o * o;
    d1 += dd;
    d2 += dd * dd;
  }
  auto within = [&](double s1, double s2) {
    const double mean = s1 / samples;
    const double se = std::sqrt((s2 / samples - mean * mean) / samples);
    return std::abs(mean - 1.0) <= 3.0 * se;
  };
  const bool ok_mom = within(o1, o2) && within(d1, d2);
  os << "; E|M_ij|^2 = " << fmt("%.4f", o1 / samples) << ", E M_ii^2 = "
     << fmt("%.4f", d1 / samples) << (ok_mom ? " ok" : " off");
  const double secs = elapsed(start);
  os << ", " << fmt("%.2f", secs) << " s";
  return {ok_slope && ok_cp && ok_mom && secs < 120.0, os.str()};
}

Outcome end_to_end_cooling() {
  const auto start = std::chrono::steady_clock::now();
  const RunRecord r = run_experiment(cooling_config(32, 500, 1000));
  const auto stats = step_statistics(r);
  double initial_energy = 0.0, initial_overlap = 0.0, initial_e2 = 0.0;
  for (const auto& t : r.trials) {
    initial_energy += t.initial_energy;
    initial_e2 += t.initial_energy * t.initial_energy;
    initial_overlap += t.initial_ground_overlap;
  }
  const double n = static_cast<double>(r.trials.size());
  initial_energy /= n;
  initial_overlap /= n;
  const double initial_se = std::sqrt((initial_e2 / n - initial_energy * initial_energy) / (n - 1));

  bool monotone = true;
  int worst_step = 0;
  double worst_excess = -1e9;
  double prev_mean = initial_energy;
  double prev_se = initial_se;
  for (const auto& s : stats) {
    const double allowance = 2.0 * std::sqrt(prev_se * prev_se + s.stderr_energy * s.stderr_energy);
    const double excess = (s.mean_energy - prev_mean) - allowance;
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_step = s.step;
    }
    monotone = monotone && excess <= 0.0;
    prev_mean = s.mean_energy;
    prev_se = s.stderr_energy;
  }
  const double final_overlap = stats.empty() ? 0.0 : stats.back().mean_ground_overlap;
  const bool cooled = final_overlap > initial_overlap;
  const double secs = elapsed(start);
  std::ostringstream os;
  os << "mean energy " << fmt("%.4f", initial_energy) << " -> "
     << fmt("%.4f", stats.empty() ? 0.0 : stats.back().mean_energy) << " over " << stats.size()
     << " steps, " << (monotone ? "non-increasing within 2 SE" : "INCREASE beyond 2 SE")
     << " (tightest step " << worst_step << ", margin " << fmt("%.2e", -worst_excess)
     << "); ground overlap " << fmt("%.4f", initial_overlap) << " -> "
     << fmt("%.4f", final_overlap) << ", " << fmt("%.1f", secs) << " s";
  return {monotone && cooled && secs < 900.0, os.str()};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  std::set<int> expected_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if ((arg == "--only" || arg == "--expected-fail") && i + 1 < argc) {
      (arg == "--only" ? only : expected_fail) = parse_list(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N,...] [--expected-fail N,...]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"sign-function certification", sign_certification},
      {"GQSP reconstruction", gqsp_reconstruction},
      {"shift-register factorization", shift_factorization},
      {"leakage bound sweep", [] { return sweep([] { return certify_leakage(); }, 60.0); }},
      {"effective evolution sweep", [] { return sweep([] { return certify_effective(); }, 60.0); }},
      {"Dyson-term bounds", dyson_bounds},
      {"query scaling", query_scaling},
      {"success probability", success_probability},
      {"GUE statistics", gue_statistics},
      {"end-to-end cooling", end_to_end_cooling},
  };

  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const bool tolerated = !out.passed && expected_fail.count(id);
    std::printf("%s criterion %d (%s): %s%s\n", out.passed ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), out.detail.c_str(),
                tolerated ? " [known defect, tolerated]" : "");
    std::fflush(stdout);
    all_ok = all_ok && (out.passed || tolerated);
  }
  return all_ok ? 0 : 1;
}
