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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyncool/cooling.hpp"
#include "dyncool/dyson_verify.hpp"
#include "dyncool/io.hpp"

namespace dyncool {

struct SystemSpec {
  enum class Kind { random_hermitian, tfim, file };
  Kind kind = Kind::random_hermitian;
  Index dim = 8;            // random_hermitian
  std::uint64_t seed = 1;   // random_hermitian
  int sites = 2;            // tfim
  double coupling = 1.0;    // tfim J
  double field = 1.0;       // tfim h
  bool normalized = true;   // tfim: divide by the spectral norm
  std::string path;         // file
};

struct PerturbationSpec {
  enum class Kind { gue, file, zero };
  Kind kind = Kind::gue;
  std::uint64_t seed = 2;
  std::string path;
};

struct InitialStateSpec {
  enum class Kind { random, basis, eigenstate, file };
  Kind kind = Kind::random;
  /// basis: computational index. eigenstate: index into the ascending
  /// spectrum, negative values count from the top (-1 = highest).
  long index = -1;
  std::string path;
};

enum class OutputFormat { csv, structured };
OutputFormat output_format_from_string(const std::string& name);
const char* to_string(OutputFormat f);

struct ExperimentConfig {
  SystemSpec system;
  PerturbationSpec perturbation;
  InitialStateSpec initial_state;
  double epsilon = 0.1;
  int d = 8;
  std::optional<double> delta;
  HsignMode mode = HsignMode::exact_spectral;
  StoppingRule stop{8, std::nullopt, std::nullopt};
  int trials = 1;
  std::uint64_t seed = 0;
  std::string output;       // directory; empty = do not write
  OutputFormat format = OutputFormat::csv;
  bool certify = false;
  unsigned workers = 0;     // 0 = hardware concurrency

  void validate() const;
};

/// Parses the JSON config document. Relative file paths resolve against
/// `base_dir`. Missing "stop" defaults to max_steps = d.
ExperimentConfig config_from_json(const Json& j, const std::string& base_dir = "");
ExperimentConfig load_config(const std::string& path);
Json config_to_json(const ExperimentConfig& cfg);
/// The result-defining fields only (output location, format and worker count
/// dropped); run records embed this.
Json canonical_config(const ExperimentConfig& cfg);
/// 16 hex digits of FNV-1a over canonical_config.
std::string config_hash(const ExperimentConfig& cfg);

/// H = -J sum Z_i Z_{i+1} - h sum X_i, open boundary; site 0 is the most
/// significant qubit.
HermitianOperator tfim(int sites, double coupling, double field, bool normalized);

HermitianOperator generate_hamiltonian(const SystemSpec& spec);
/// GUE draws are divided by their spectral norm so that ||A|| = 1.
HermitianOperator generate_perturbation(const PerturbationSpec& spec, Index dim);
StateVector generate_initial_state(const InitialStateSpec& spec, const SpectralDecomposition& h,
                                   Rng& rng);

struct StepRow {
  int step = 0;  // 1-based
  long bin = 0;
  double energy_estimate = 0.0;
  double true_energy = 0.0;
  double ground_overlap = 0.0;
  double leakage_weight = 0.0;
  long long queries_eiH = 0;
  long long queries_UA = 0;
  bool leaked = false;

  bool operator==(const StepRow&) const = default;
};

struct TrialRecord {
  int trial = 0;
  bool success = false;
  std::string termination;
  std::string error;
  double initial_energy = 0.0;
  double initial_ground_overlap = 0.0;
  std::optional<double> terminal_energy_estimate;
  std::vector<StepRow> steps;

  bool operator==(const TrialRecord&) const = default;
};

TrialRecord summarize(int trial, const Trajectory& t);

struct RunRecord {
  std::string config_hash;
  Json config;
  std::vector<TrialRecord> trials;
  std::vector<CertSummary> certifications;

  bool certifications_passed() const;
};

/// Runs every trial (worker pool, results ordered by trial index), plus the
/// certification sweeps when requested, and writes the record when
/// cfg.output is set.
RunRecord run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kCsvSchema = "dyncool-trajectory-csv v1";
inline constexpr const char* kRunSchema = "dyncool-run/1";

std::string to_csv(const RunRecord& record);
Json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const Json& j);

/// Writes run-<hash>.csv or run-<hash>.json under `dir`; returns the path.
std::string emit(const RunRecord& record, OutputFormat format, const std::string& dir);

struct StepStatistics {
  int step = 0;
  int count = 0;
  double mean_energy = 0.0;
  double stderr_energy = 0.0;
  double mean_ground_overlap = 0.0;
};

/// Per-step means over the trials that reached each step.
std::vector<StepStatistics> step_statistics(const RunRecord& record);
double success_fraction(const RunRecord& record);

}  // namespace dyncool
