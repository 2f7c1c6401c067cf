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

#include "dyncool/gqsp.hpp"
#include "dyncool/operator_core.hpp"
#include "dyncool/random.hpp"
#include "dyncool/signfun.hpp"

namespace dyncool {

enum class HsignMode { exact_spectral, gqsp_circuit };

const char* to_string(HsignMode mode);
HsignMode hsign_mode_from_string(const std::string& name);

struct StoppingRule {
  int max_steps = 1;
  std::optional<double> target_energy;
  std::optional<int> patience;  // consecutive non-decreasing energy estimates

  void validate() const;
};

struct CoolingConfig {
  HermitianOperator hamiltonian = HermitianOperator::zero(1);
  HermitianOperator perturbation = HermitianOperator::zero(1);
  StateVector initial_state = StateVector::basis(1, 0);
  double epsilon = 0.1;
  int d = 2;
  std::optional<double> delta_override;  // verification runs only
  HsignMode mode = HsignMode::exact_spectral;
  StoppingRule stop;
  std::uint64_t seed = 0;

  /// 1/d unless overridden.
  double delta() const;
  /// ||H|| <= 1, ||A|| <= 1, eps in (0, 0.7], d >= 2, dimensions agree.
  void validate() const;
};

/// Idealized phase estimation: eigenvalues are binned into windows of width
/// eps centred on multiples of eps (boundaries at half-integers), shifted by
/// eps/4 when an eigenvalue sits within 1e-9 of a boundary.
class EnergyBinning {
 public:
  EnergyBinning(double width, const RealVector& eigenvalues);
  long bin_of(double energy) const;
  double center(long bin) const;
  double width() const { return width_; }
  double offset() const { return offset_; }

 private:
  double width_;
  double offset_ = 0.0;
};

struct QpeOutcome {
  long bin = 0;
  double bin_center = 0.0;
  double energy_estimate = 0.0;  // bin centre clamped to [-1, 1]
  double probability = 0.0;
  double sampled_eigenvalue = 0.0;  // eigenvalue drawn by the Born rule
  StateVector state = StateVector::basis(1, 0);
};

struct QueryCosts {
  long long per_iter_eiH = 0;
  long long per_iter_UA = 0;
  int sign_degree = 0;
  double evolution_time = 0.0;
};

/// t = pi * ceil(1 / (pi sqrt(delta))).
double cooling_time(double delta);

/// Accounting convention (C_qpe = 1):
///   eiH = deg(S) * ceil(t / pi) + ceil(ceil(log2 1/eps) * ceil(log2 1/delta) / eps)
///   UA  = ceil(t)
QueryCosts query_costs(double epsilon, double delta);

/// Sign transform S(H - shift) through either the exact spectral route or the
/// assembled GQSP circuit on U = e^{i(H - shift)}.
class SignTransform {
 public:
  SignTransform(double epsilon, double delta, HsignMode mode);

  const FourierPolynomial& polynomial() const { return s_; }
  HsignMode mode() const { return mode_; }
  const std::optional<AngleSequence>& angles() const { return angles_; }
  HermitianOperator apply(const SpectralDecomposition& h, double shift) const;

 private:
  FourierPolynomial s_;
  std::optional<AngleSequence> angles_;
  HsignMode mode_;
};

struct StepResult {
  long bin = 0;
  double energy_estimate = 0.0;
  StateVector post_qpe_state = StateVector::basis(1, 0);
  StateVector post_evolution_state = StateVector::basis(1, 0);
  double leakage_weight = 0.0;  // weight at energies >= bin centre + 3 eps / 2
  double true_energy = 0.0;     // <psi|H|psi> after evolution
  double ground_overlap = 0.0;  // weight on the lowest eigenspace after evolution
  long long queries_eiH = 0;    // cumulative
  long long queries_UA = 0;     // cumulative
  bool leaked = false;          // next measurement landed two or more bins higher
};

enum class Termination { max_steps, target_energy, patience, error };
const char* to_string(Termination t);

struct Trajectory {
  CoolingConfig config;
  double initial_energy = 0.0;
  double initial_ground_overlap = 0.0;
  std::vector<StepResult> steps;
  std::optional<double> terminal_energy_estimate;
  Termination reason = Termination::max_steps;
  std::string error;

  bool success() const;
};

class CoolingEngine {
 public:
  CoolingEngine(HermitianOperator h, HermitianOperator a, double epsilon, double delta,
                HsignMode mode);

  const SpectralDecomposition& spectrum() const { return spectrum_; }
  const SignTransform& sign() const { return sign_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double evolution_time() const { return time_; }
  const QueryCosts& costs() const { return costs_; }
  const EnergyBinning& binning() const { return binning_; }

  double energy(const StateVector& psi) const;
  double ground_overlap(const StateVector& psi) const;
  /// Weight of psi on eigenvalues >= threshold.
  double weight_above(const StateVector& psi, double threshold) const;

  QpeOutcome measure(const StateVector& psi, Rng& rng) const;
  /// H_sign = S(H - energy_estimate - eps).
  HermitianOperator hsign(double energy_estimate) const;
  /// H~ = H_sign + (sqrt(delta) / 2) A.
  HermitianOperator perturbed(double energy_estimate) const;
  /// e^{-i H~ t} psi for the given estimate.
  StateVector evolve_at(const StateVector& psi, double energy_estimate) const;
  /// Evolution and bookkeeping after a measurement (counters not accumulated).
  StepResult step_from(const QpeOutcome& outcome) const;
  StepResult step(const StateVector& psi, Rng& rng) const;

 private:
  HermitianOperator h_;
  HermitianOperator a_;
  SpectralDecomposition spectrum_;
  double epsilon_;
  double delta_;
  double time_;
  SignTransform sign_;
  QueryCosts costs_;
  EnergyBinning binning_;
  double ground_energy_;
};

QpeOutcome qpe_project(const SpectralDecomposition& h, const StateVector& psi, double epsilon,
                       Rng& rng);

HermitianOperator build_hsign(const HermitianOperator& h, double energy_estimate,
                              double epsilon, double delta, HsignMode mode);

StepResult cooling_step(const HermitianOperator& h, const HermitianOperator& a,
                        const StateVector& psi, double epsilon, double delta, Rng& rng,
                        HsignMode mode);

/// Full trajectory; deterministic for a fixed config (seed included).
Trajectory run(const CoolingConfig& config);
/// Same, reusing a prepared engine and an explicit generator.
Trajectory run(const CoolingConfig& config, const CoolingEngine& engine, Rng& rng);

/// Idealized coherent phase estimation: sum_j |j> (x) Pi_j psi, where Pi_j
/// projects onto eigenvalues nearest (mod 2 pi) to j 2 pi / 2^bits.
StateVector coherent_qpe_prepare(const SpectralDecomposition& h, const StateVector& psi,
                                 int bits);

/// Register energy of basis value j, wrapped into (-pi, pi].
double register_energy(long j, int bits);

/// e^{-i H~ t} on register (x) system with H_sign = S(SHIFT_n(H) - eps) and
/// H~ = H_sign + (sqrt(delta)/2)(I (x) A). No measurement.
StateVector coherent_step(const HermitianOperator& h, const HermitianOperator& a,
                          const StateVector& joint, int bits, double epsilon, double delta);

}  // namespace dyncool
