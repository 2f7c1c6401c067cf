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

#include "dyncool/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "dyncool/errors.hpp"
#include "dyncool/parallel.hpp"

namespace dyncool {
namespace {

std::string resolve(const std::string& base, const std::string& path) {
  if (path.empty() || base.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base) / path).string();
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config field '") + key + "': " + e.what());
  }
}

std::string kind_of(const Json& j, const char* section) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ValidationError(std::string("config section '") + section + "' needs a 'kind'");
  }
  return j.at("kind").get<std::string>();
}

Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

// Single- or two-site operator embedded in an n-site chain.
Matrix embed(const std::vector<std::pair<int, Matrix>>& ops, int sites) {
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 0; s < sites; ++s) {
    Matrix factor = Matrix::Identity(2, 2);
    for (const auto& [site, m] : ops) {
      if (site == s) factor = m;
    }
    out = kron(out, factor);
  }
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "structured" || name == "json") return OutputFormat::structured;
  throw ValidationError("unknown format '" + name + "' (expected csv|structured)");
}

const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "structured"; }

void ExperimentConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 0.7)) throw ValidationError("epsilon must lie in (0, 0.7]");
  if (d < 2) throw ValidationError("d must be >= 2");
  if (delta && !(*delta > 0.0 && *delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  if (trials < 0) throw ValidationError("trials must be non-negative");
  stop.validate();
  if (system.kind == SystemSpec::Kind::random_hermitian && system.dim < 2) {
    throw ValidationError("system.dim must be >= 2");
  }
  if (system.kind == SystemSpec::Kind::tfim && (system.sites < 1 || system.sites > 12)) {
    throw ValidationError("system.sites must lie in [1, 12]");
  }
}

ExperimentConfig config_from_json(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  ExperimentConfig cfg;
  if (j.contains("system")) {
    const Json& s = j.at("system");
    const std::string kind = kind_of(s, "system");
    if (kind == "random_hermitian") {
      cfg.system.kind = SystemSpec::Kind::random_hermitian;
      cfg.system.dim = get_or<Index>(s, "dim", cfg.system.dim);
      cfg.system.seed = get_or<std::uint64_t>(s, "seed", cfg.system.seed);
    } else if (kind == "tfim") {
      cfg.system.kind = SystemSpec::Kind::tfim;
      cfg.system.sites = get_or<int>(s, "sites", cfg.system.sites);
      cfg.system.coupling = get_or<double>(s, "J", cfg.system.coupling);
      cfg.system.field = get_or<double>(s, "h", cfg.system.field);
      cfg.system.normalized = get_or<bool>(s, "normalized", cfg.system.normalized);
    } else if (kind == "file") {
      cfg.system.kind = SystemSpec::Kind::file;
      cfg.system.path = resolve(base_dir, get_or<std::string>(s, "path", ""));
    } else {
      throw ValidationError("system.kind: unknown generator '" + kind + "'");
    }
  }
  if (j.contains("perturbation")) {
    const Json& p = j.at("perturbation");
    const std::string kind = kind_of(p, "perturbation");
    if (kind == "gue") {
      cfg.perturbation.kind = PerturbationSpec::Kind::gue;
      cfg.perturbation.seed = get_or<std::uint64_t>(p, "seed", cfg.perturbation.seed);
    } else if (kind == "file") {
      cfg.perturbation.kind = PerturbationSpec::Kind::file;
      cfg.perturbation.path = resolve(base_dir, get_or<std::string>(p, "path", ""));
    } else if (kind == "zero") {
      cfg.perturbation.kind = PerturbationSpec::Kind::zero;
    } else {
      throw ValidationError("perturbation.kind: unknown generator '" + kind + "'");
    }
  }
  if (j.contains("initial_state")) {
    const Json& s = j.at("initial_state");
    const std::string kind = kind_of(s, "initial_state");
    if (kind == "random") {
      cfg.initial_state.kind = InitialStateSpec::Kind::random;
    } else if (kind == "basis") {
      cfg.initial_state.kind = InitialStateSpec::Kind::basis;
      cfg.initial_state.index = get_or<long>(s, "index", 0);
    } else if (kind == "eigenstate") {
      cfg.initial_state.kind = InitialStateSpec::Kind::eigenstate;
      cfg.initial_state.index = get_or<long>(s, "index", -1);
    } else if (kind == "file") {
      cfg.initial_state.kind = InitialStateSpec::Kind::file;
      cfg.initial_state.path = resolve(base_dir, get_or<std::string>(s, "path", ""));
    } else {
      throw ValidationError("initial_state.kind: unknown kind '" + kind + "'");
    }
  }
  cfg.epsilon = get_or<double>(j, "epsilon", cfg.epsilon);
  cfg.d = get_or<int>(j, "d", cfg.d);
  if (j.contains("delta") && !j.at("delta").is_null()) cfg.delta = get_or<double>(j, "delta", 0.0);
  cfg.mode = hsign_mode_from_string(get_or<std::string>(j, "mode", to_string(cfg.mode)));
  cfg.stop.max_steps = cfg.d;
  if (j.contains("stop")) {
    const Json& s = j.at("stop");
    cfg.stop.max_steps = get_or<int>(s, "max_steps", cfg.d);
    if (s.contains("target_energy") && !s.at("target_energy").is_null()) {
      cfg.stop.target_energy = get_or<double>(s, "target_energy", 0.0);
    }
    if (s.contains("patience") && !s.at("patience").is_null()) {
      cfg.stop.patience = get_or<int>(s, "patience", 1);
    }
  }
  cfg.trials = get_or<int>(j, "trials", cfg.trials);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.output = resolve(base_dir, get_or<std::string>(j, "output", ""));
  cfg.format = output_format_from_string(get_or<std::string>(j, "format", "csv"));
  cfg.certify = get_or<bool>(j, "certify", false);
  cfg.workers = get_or<unsigned>(j, "workers", 0u);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  const std::filesystem::path p(path);
  return config_from_json(read_json_file(path), p.has_parent_path() ? p.parent_path().string() : "");
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json system;
  switch (cfg.system.kind) {
    case SystemSpec::Kind::random_hermitian:
      system = {{"kind", "random_hermitian"}, {"dim", cfg.system.dim}, {"seed", cfg.system.seed}};
      break;
    case SystemSpec::Kind::tfim:
      system = {{"kind", "tfim"},
                {"sites", cfg.system.sites},
                {"J", cfg.system.coupling},
                {"h", cfg.system.field},
                {"normalized", cfg.system.normalized}};
      break;
    case SystemSpec::Kind::file:
      system = {{"kind", "file"}, {"path", cfg.system.path}};
      break;
  }
  Json pert;
  switch (cfg.perturbation.kind) {
    case PerturbationSpec::Kind::gue:
      pert = {{"kind", "gue"}, {"seed", cfg.perturbation.seed}};
      break;
    case PerturbationSpec::Kind::file:
      pert = {{"kind", "file"}, {"path", cfg.perturbation.path}};
      break;
    case PerturbationSpec::Kind::zero:
      pert = {{"kind", "zero"}};
      break;
  }
  Json init;
  switch (cfg.initial_state.kind) {
    case InitialStateSpec::Kind::random:
      init = {{"kind", "random"}};
      break;
    case InitialStateSpec::Kind::basis:
      init = {{"kind", "basis"}, {"index", cfg.initial_state.index}};
      break;
    case InitialStateSpec::Kind::eigenstate:
      init = {{"kind", "eigenstate"}, {"index", cfg.initial_state.index}};
      break;
    case InitialStateSpec::Kind::file:
      init = {{"kind", "file"}, {"path", cfg.initial_state.path}};
      break;
  }
  Json stop = {{"max_steps", cfg.stop.max_steps}};
  stop["target_energy"] = cfg.stop.target_energy ? Json(*cfg.stop.target_energy) : Json(nullptr);
  stop["patience"] = cfg.stop.patience ? Json(*cfg.stop.patience) : Json(nullptr);
  Json out = {{"system", system},     {"perturbation", pert},  {"initial_state", init},
              {"epsilon", cfg.epsilon}, {"d", cfg.d},            {"mode", to_string(cfg.mode)},
              {"stop", stop},         {"trials", cfg.trials},  {"seed", cfg.seed},
              {"certify", cfg.certify}, {"output", cfg.output},  {"format", to_string(cfg.format)},
              {"workers", cfg.workers}};
  out["delta"] = cfg.delta ? Json(*cfg.delta) : Json(nullptr);
  return out;
}

Json canonical_config(const ExperimentConfig& cfg) {
  Json j = config_to_json(cfg);
  j.erase("output");
  j.erase("format");
  j.erase("workers");
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(canonical_config(cfg).dump()));
  return buf;
}

// ---------------------------------------------------------------------------

HermitianOperator tfim(int sites, double coupling, double field, bool normalized) {
  if (sites < 1 || sites > 12) throw ValidationError("tfim: sites must lie in [1, 12]");
  const Index dim = Index{1} << sites;
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i + 1 < sites; ++i) h -= coupling * embed({{i, pauli_z()}, {i + 1, pauli_z()}}, sites);
  for (int i = 0; i < sites; ++i) h -= field * embed({{i, pauli_x()}}, sites);
  if (normalized) {
    const double n = spectral_norm(h);
    if (n > 0.0) h /= n;
  }
  return HermitianOperator(h);
}

HermitianOperator generate_hamiltonian(const SystemSpec& spec) {
  switch (spec.kind) {
    case SystemSpec::Kind::random_hermitian: {
      Rng rng = substream(spec.seed, 0);
      return random_hermitian(spec.dim, rng, 1.0);
    }
    case SystemSpec::Kind::tfim:
      return tfim(spec.sites, spec.coupling, spec.field, spec.normalized);
    case SystemSpec::Kind::file:
      return read_hermitian_file(spec.path);
  }
  throw ValidationError("unknown system generator");
}

HermitianOperator generate_perturbation(const PerturbationSpec& spec, Index dim) {
  switch (spec.kind) {
    case PerturbationSpec::Kind::gue: {
      Rng rng = substream(spec.seed, 0);
      const HermitianOperator a = sample_gue(dim, rng);
      return a.scaled(1.0 / spectral_norm(a.matrix()));
    }
    case PerturbationSpec::Kind::file: {
      HermitianOperator a = read_hermitian_file(spec.path);
      if (a.dim() != dim) throw ValidationError(spec.path + ": perturbation dimension mismatch");
      return a;
    }
    case PerturbationSpec::Kind::zero:
      return HermitianOperator::zero(dim);
  }
  throw ValidationError("unknown perturbation generator");
}

StateVector generate_initial_state(const InitialStateSpec& spec, const SpectralDecomposition& h,
                                   Rng& rng) {
  const Index dim = h.dim();
  switch (spec.kind) {
    case InitialStateSpec::Kind::random:
      return random_state(dim, rng);
    case InitialStateSpec::Kind::basis:
      if (spec.index < 0 || spec.index >= dim) throw ValidationError("initial_state.index out of range");
      return StateVector::basis(dim, spec.index);
    case InitialStateSpec::Kind::eigenstate: {
      const long idx = spec.index < 0 ? dim + spec.index : spec.index;
      if (idx < 0 || idx >= dim) throw ValidationError("initial_state.index out of range");
      return StateVector::normalized(h.eigenvectors.col(idx));
    }
    case InitialStateSpec::Kind::file: {
      const Vector v = vector_from_json(read_json_file(spec.path), spec.path);
      if (v.size() != dim) throw ValidationError(spec.path + ": state dimension mismatch");
      return StateVector(v);
    }
  }
  throw ValidationError("unknown initial state kind");
}

// ---------------------------------------------------------------------------

TrialRecord summarize(int trial, const Trajectory& t) {
  TrialRecord r;
  r.trial = trial;
  r.success = t.success();
  r.termination = to_string(t.reason);
  r.error = t.error;
  r.initial_energy = t.initial_energy;
  r.initial_ground_overlap = t.initial_ground_overlap;
  r.terminal_energy_estimate = t.terminal_energy_estimate;
  int k = 0;
  for (const auto& s : t.steps) {
    r.steps.push_back(StepRow{++k, s.bin, s.energy_estimate, s.true_energy, s.ground_overlap,
                              s.leakage_weight, s.queries_eiH, s.queries_UA, s.leaked});
  }
  return r;
}

bool RunRecord::certifications_passed() const {
  for (const auto& c : certifications) {
    if (!c.passed) return false;
  }
  return true;
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const HermitianOperator h = generate_hamiltonian(cfg.system);
  const HermitianOperator a = generate_perturbation(cfg.perturbation, h.dim());
  require_normalized(h, "hamiltonian");

  CoolingConfig base;
  base.hamiltonian = h;
  base.perturbation = a;
  base.initial_state = StateVector::basis(h.dim(), 0);
  base.epsilon = cfg.epsilon;
  base.d = cfg.d;
  base.delta_override = cfg.delta;
  base.mode = cfg.mode;
  base.stop = cfg.stop;
  base.seed = cfg.seed;
  base.validate();
  const CoolingEngine engine(h, a, cfg.epsilon, base.delta(), cfg.mode);

  RunRecord record;
  record.config_hash = config_hash(cfg);
  record.config = canonical_config(cfg);
  record.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(record.trials.size(), cfg.workers, [&](std::size_t i) {
    try {
      Rng rng = substream(cfg.seed, i);
      CoolingConfig c = base;
      c.initial_state = generate_initial_state(cfg.initial_state, engine.spectrum(), rng);
      record.trials[i] = summarize(static_cast<int>(i), run(c, engine, rng));
    } catch (const std::exception& e) {
      throw Error("trial " + std::to_string(i) + ": " + e.what());
    }
  });
  if (cfg.certify) record.certifications = certify_all(SweepOptions{cfg.seed, cfg.workers});
  if (!cfg.output.empty()) emit(record, cfg.format, cfg.output);
  return record;
}

// ---------------------------------------------------------------------------

std::string to_csv(const RunRecord& record) {
  std::ostringstream os;
  os << "# " << kCsvSchema << " config=" << record.config_hash << "\n";
  os << "trial,step,energy_estimate,true_energy,ground_overlap,leakage_weight,queries_eiH,"
        "queries_UA,success\n";
  for (const auto& t : record.trials) {
    for (const auto& s : t.steps) {
      os << t.trial << ',' << s.step << ',' << format_double(s.energy_estimate) << ','
         << format_double(s.true_energy) << ',' << format_double(s.ground_overlap) << ','
         << format_double(s.leakage_weight) << ',' << s.queries_eiH << ',' << s.queries_UA << ','
         << (t.success ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

Json run_record_to_json(const RunRecord& record) {
  Json trials = Json::array();
  for (const auto& t : record.trials) {
    Json steps = Json::array();
    for (const auto& s : t.steps) {
      steps.push_back(Json{{"step", s.step},
                           {"bin", s.bin},
                           {"energy_estimate", s.energy_estimate},
                           {"true_energy", s.true_energy},
                           {"ground_overlap", s.ground_overlap},
                           {"leakage_weight", s.leakage_weight},
                           {"queries_eiH", s.queries_eiH},
                           {"queries_UA", s.queries_UA},
                           {"leaked", s.leaked}});
    }
    Json jt = {{"trial", t.trial},
               {"success", t.success},
               {"termination", t.termination},
               {"error", t.error},
               {"initial_energy", t.initial_energy},
               {"initial_ground_overlap", t.initial_ground_overlap},
               {"steps", std::move(steps)}};
    jt["terminal_energy_estimate"] =
        t.terminal_energy_estimate ? Json(*t.terminal_energy_estimate) : Json(nullptr);
    trials.push_back(std::move(jt));
  }
  Json certs = Json::array();
  for (const auto& c : record.certifications) certs.push_back(cert_to_json(c));
  return Json{{"schema", kRunSchema},
              {"config_hash", record.config_hash},
              {"config", record.config},
              {"trials", std::move(trials)},
              {"certifications", std::move(certs)}};
}

RunRecord run_record_from_json(const Json& j) {
  if (j.value("schema", std::string{}) != kRunSchema) {
    throw ValidationError("run record: unsupported schema");
  }
  RunRecord r;
  r.config_hash = j.at("config_hash").get<std::string>();
  r.config = j.at("config");
  for (const auto& jt : j.at("trials")) {
    TrialRecord t;
    t.trial = jt.at("trial").get<int>();
    t.success = jt.at("success").get<bool>();
    t.termination = jt.at("termination").get<std::string>();
    t.error = jt.at("error").get<std::string>();
    t.initial_energy = jt.at("initial_energy").get<double>();
    t.initial_ground_overlap = jt.at("initial_ground_overlap").get<double>();
    if (!jt.at("terminal_energy_estimate").is_null()) {
      t.terminal_energy_estimate = jt.at("terminal_energy_estimate").get<double>();
    }
    for (const auto& js : jt.at("steps")) {
      StepRow s;
      s.step = js.at("step").get<int>();
      s.bin = js.at("bin").get<long>();
      s.energy_estimate = js.at("energy_estimate").get<double>();
      s.true_energy = js.at("true_energy").get<double>();
      s.ground_overlap = js.at("ground_overlap").get<double>();
      s.leakage_weight = js.at("leakage_weight").get<double>();
      s.queries_eiH = js.at("queries_eiH").get<long long>();
      s.queries_UA = js.at("queries_UA").get<long long>();
      s.leaked = js.at("leaked").get<bool>();
      t.steps.push_back(s);
    }
    r.trials.push_back(std::move(t));
  }
  for (const auto& c : j.at("certifications")) r.certifications.push_back(cert_from_json(c));
  return r;
}

std::string emit(const RunRecord& record, OutputFormat format, const std::string& dir) {
  const std::string name = "run-" + record.config_hash + (format == OutputFormat::csv ? ".csv" : ".json");
  const std::string path = (std::filesystem::path(dir) / name).string();
  atomic_write(path, format == OutputFormat::csv ? to_csv(record)
                                                 : run_record_to_json(record).dump(2) + "\n");
  return path;
}

std::vector<StepStatistics> step_statistics(const RunRecord& record) {
  std::vector<StepStatistics> out;
  std::vector<double> sum2;
  for (const auto& t : record.trials) {
    for (const auto& s : t.steps) {
      const auto k = static_cast<std::size_t>(s.step - 1);
      if (out.size() <= k) {
        out.resize(k + 1);
        sum2.resize(k + 1, 0.0);
      }
      out[k].count += 1;
      out[k].mean_energy += s.true_energy;
      out[k].mean_ground_overlap += s.ground_overlap;
      sum2[k] += s.true_energy * s.true_energy;
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& st = out[k];
    st.step = static_cast<int>(k) + 1;
    if (st.count == 0) continue;
    st.mean_energy /= st.count;
    st.mean_ground_overlap /= st.count;
    if (st.count > 1) {
      const double var = std::max(0.0, (sum2[k] - st.count * st.mean_energy * st.mean_energy) /
                                           (st.count - 1));
      st.stderr_energy = std::sqrt(var / st.count);
    }
  }
  return out;
}

double success_fraction(const RunRecord& record) {
  if (record.trials.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& t : record.trials) ok += t.success ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(record.trials.size());
}

}  // namespace dyncool
