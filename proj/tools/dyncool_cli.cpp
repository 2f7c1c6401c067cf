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

// Command-line front end: experiment runs, certification sweeps, GQSP angle
// synthesis and sign-polynomial construction.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dyncool/cooling.hpp"
#include "dyncool/dyson_verify.hpp"
#include "dyncool/errors.hpp"
#include "dyncool/experiment.hpp"
#include "dyncool/gqsp.hpp"
#include "dyncool/io.hpp"
#include "dyncool/random.hpp"
#include "dyncool/signfun.hpp"

namespace {

using namespace dyncool;

constexpr int kExitOk = 0;
constexpr int kExitCertificationFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  std::string format = "csv";
  bool format_set = false;
  unsigned workers = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--trials", c.trials, "Number of trials");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "structured"}))
      ->each([&c](const std::string&) { c.format_set = true; });
  cmd->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
}

void print_certs(const std::vector<CertSummary>& certs) {
  for (const auto& c : certs) {
    double worst = 0.0;
    for (const auto& r : c.records) {
      const double denom = r.bound + r.slack;
      if (denom > 0.0) worst = std::max(worst, r.measured / denom);
    }
    std::printf("%-26s %-4s records=%-4zu worst measured/bound=%.3g%s%s\n", c.claim.c_str(),
                c.passed ? "PASS" : "FAIL", c.records.size(), worst, c.note.empty() ? "" : "  ",
                c.note.c_str());
  }
}

std::string certs_csv(const std::vector<CertSummary>& certs) {
  std::ostringstream os;
  os << "claim,instance,bound,measured,slack,pass\n";
  for (const auto& c : certs) {
    for (const auto& r : c.records) {
      os << r.claim << ",\"" << r.instance << "\"," << format_double(r.bound) << ','
         << format_double(r.measured) << ',' << format_double(r.slack) << ','
         << (r.passed ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

int cmd_run(const std::string& config_path, const Common& c, bool certify) {
  ExperimentConfig cfg = load_config(config_path);
  if (c.seed) cfg.seed = *c.seed;
  if (c.trials) cfg.trials = *c.trials;
  if (!c.out.empty()) cfg.output = c.out;
  if (c.format_set) cfg.format = output_format_from_string(c.format);
  if (c.workers) cfg.workers = c.workers;
  cfg.certify = cfg.certify || certify;
  const RunRecord rec = run_experiment(cfg);

  std::printf("config %s  trials=%zu  success fraction=%.4f\n", rec.config_hash.c_str(),
              rec.trials.size(), success_fraction(rec));
  std::printf("%6s %8s %14s %12s %14s\n", "step", "count", "mean_energy", "stderr", "ground_overlap");
  for (const auto& s : step_statistics(rec)) {
    std::printf("%6d %8d %14.6f %12.2e %14.6f\n", s.step, s.count, s.mean_energy, s.stderr_energy,
                s.mean_ground_overlap);
  }
  if (!cfg.output.empty()) {
    std::printf("wrote %s/run-%s.%s\n", cfg.output.c_str(), rec.config_hash.c_str(),
                cfg.format == OutputFormat::csv ? "csv" : "json");
  }
  print_certs(rec.certifications);
  return rec.certifications_passed() ? kExitOk : kExitCertificationFailed;
}

int cmd_certify(const Common& c) {
  SweepOptions opts;
  if (c.seed) opts.seed = *c.seed;
  opts.workers = c.workers;
  const auto certs = certify_all(opts);
  print_certs(certs);
  if (!c.out.empty()) {
    const std::string stem = "certify-" + std::to_string(opts.seed);
    if (c.format == "csv") {
      atomic_write((std::filesystem::path(c.out) / (stem + ".csv")).string(), certs_csv(certs));
    } else {
      Json arr = Json::array();
      for (const auto& s : certs) arr.push_back(cert_to_json(s));
      atomic_write((std::filesystem::path(c.out) / (stem + ".json")).string(), arr.dump(2) + "\n");
    }
  }
  bool ok = true;
  for (const auto& s : certs) ok = ok && s.passed;
  return ok ? kExitOk : kExitCertificationFailed;
}

int cmd_gqsp(const std::string& poly_path, const Common& c, double eta, const std::string& method,
             Index dim) {
  const FourierPolynomial p = polynomial_from_json(read_json_file(poly_path), poly_path);
  const CompletionMethod m = method == "roots"      ? CompletionMethod::roots
                             : method == "cepstral" ? CompletionMethod::cepstral
                                                    : CompletionMethod::automatic;
  const CompletionPair pair = complete(p, eta, m);
  const double defect = completion_defect(pair);
  const AngleSequence angles = compute_angles(pair);

  // Reconstruction check against sum_n a_n U^n on random unitaries.
  const int checks = c.trials.value_or(5);
  Rng rng = substream(c.seed.value_or(0), 0);
  double worst = 0.0;
  for (int i = 0; i < checks; ++i) {
    const UnitaryOperator u = random_unitary(dim, rng);
    Eigen::ComplexEigenSolver<Matrix> es(u.matrix());
    const Matrix v = es.eigenvectors();
    Vector vals(dim);
    for (Index j = 0; j < dim; ++j) vals(j) = p.at(es.eigenvalues()(j));
    const Matrix target = v * vals.asDiagonal() * v.inverse();
    worst = std::max(worst, max_abs(assemble_and_extract(angles, u) - target));
  }
  const bool ok = defect <= 1e-8 && worst <= 1e-7;
  std::printf("degrees k=%d m=%d  completion defect=%.3g  reconstruction error=%.3g over %d unitaries  %s\n",
              p.neg_degree(), p.pos_degree(), defect, worst, checks, ok ? "PASS" : "FAIL");

  if (!c.out.empty()) {
    const std::string stem = std::filesystem::path(poly_path).stem().string() + "-angles";
    if (c.format == "csv") {
      std::ostringstream os;
      os << "# lambda=" << format_double(angles.lambda) << " k=" << angles.k << " m=" << angles.m << "\n";
      os << "index,theta,phi\n";
      for (std::size_t i = 0; i < angles.length(); ++i) {
        os << i << ',' << format_double(angles.theta[i]) << ',' << format_double(angles.phi[i]) << '\n';
      }
      atomic_write((std::filesystem::path(c.out) / (stem + ".csv")).string(), os.str());
    } else {
      Json j = {{"angles", angles_to_json(angles)},
                {"q", polynomial_to_json(pair.q)},
                {"completion_defect", defect},
                {"reconstruction_error", worst}};
      atomic_write((std::filesystem::path(c.out) / (stem + ".json")).string(), j.dump(2) + "\n");
    }
  } else {
    std::cout << angles_to_json(angles).dump() << "\n";
  }
  return ok ? kExitOk : kExitCertificationFailed;
}

int cmd_signpoly(double epsilon, double delta, const Common& c) {
  const FourierPolynomial s = build_sign_fourier(epsilon, delta);
  const FourierCertificate cert = certify_sign_fourier(s);
  const double bound = sign_degree_bound(2.0 * std::sin(epsilon / 2.0), delta);
  const bool degree_ok = s.pos_degree() <= bound;
  const bool ok = cert.passed && degree_ok;
  std::printf("epsilon=%g delta=%g degree=%d (bound %.1f)  max|S|=%.12f  sign error=%.3g  %s\n",
              epsilon, delta, s.pos_degree(), bound, cert.max_modulus, cert.max_sign_error,
              ok ? "PASS" : "FAIL");
  if (!c.out.empty()) {
    std::ostringstream name;
    name << "signpoly-eps" << epsilon << "-delta" << delta;
    if (c.format == "csv") {
      std::ostringstream os;
      os << "n,real,imag\n";
      for (int n = -s.neg_degree(); n <= s.pos_degree(); ++n) {
        const Complex a = s.coefficient(n);
        os << n << ',' << format_double(a.real()) << ',' << format_double(a.imag()) << '\n';
      }
      atomic_write((std::filesystem::path(c.out) / (name.str() + ".csv")).string(), os.str());
    } else {
      Json j = polynomial_to_json(s);
      j["certificate"] = {{"max_modulus", cert.max_modulus},
                          {"max_sign_error", cert.max_sign_error},
                          {"max_odd_defect", cert.max_odd_defect},
                          {"worst_sign_x", cert.worst_sign_x},
                          {"degree_bound", bound},
                          {"pass", ok}};
      atomic_write((std::filesystem::path(c.out) / (name.str() + ".json")).string(), j.dump(2) + "\n");
    }
  }
  return ok ? kExitOk : kExitCertificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical-cooling simulator and certification suite"};
  app.require_subcommand(1);

  Common run_opts;
  std::string config;
  bool certify = false;
  auto* run = app.add_subcommand("run", "Run a cooling experiment from a config document");
  run->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_flag("--certify", certify, "Also run the certification sweeps");
  add_common(run, run_opts);

  Common cert_opts;
  auto* cert = app.add_subcommand("certify", "Run the bound-certification sweeps");
  add_common(cert, cert_opts);

  Common gqsp_opts;
  std::string poly;
  double eta = 1e-4;
  std::string method = "automatic";
  Index dim = 4;
  auto* gq = app.add_subcommand("gqsp", "Synthesize GQSP angles for a polynomial file");
  gq->add_option("--config,--poly", poly, "Polynomial document (JSON)")->required()->check(CLI::ExistingFile);
  gq->add_option("--eta", eta, "Required modulus margin");
  gq->add_option("--method", method, "Completion method")
      ->check(CLI::IsMember({"automatic", "roots", "cepstral"}));
  gq->add_option("--dim", dim, "Dimension of the random check unitaries");
  add_common(gq, gqsp_opts);

  Common sign_opts;
  double epsilon = 0.1;
  double delta = 0.01;
  auto* sp = app.add_subcommand("signpoly", "Build and certify the Fourier sign approximation");
  sp->add_option("--epsilon", epsilon, "Resolution")->check(CLI::Range(1e-4, 3.0));
  sp->add_option("--delta", delta, "Sign error")->check(CLI::Range(1e-12, 0.5));
  add_common(sp, sign_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every other parse failure is a usage error.
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }
  try {
    if (*run) return cmd_run(config, run_opts, certify);
    if (*cert) return cmd_certify(cert_opts);
    if (*gq) return cmd_gqsp(poly, gqsp_opts, eta, method, dim);
    if (*sp) return cmd_signpoly(epsilon, delta, sign_opts);
  } catch (const dyncool::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
