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

#include "dyncool/cooling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dyncool/errors.hpp"

namespace dyncool {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

long long ceil_ll(double x) { return static_cast<long long>(std::ceil(x - 1e-12)); }

Matrix from_spectrum(const SpectralDecomposition& s, const RealVector& values) {
  return s.eigenvectors * values.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
}

// Real part of S at wrapped arguments; used where register branches may sit far
// from the state's energy (those branches carry no amplitude).
RealVector sign_values_wrapped(const FourierPolynomial& s, const RealVector& eigenvalues,
                               double shift) {
  RealVector out(eigenvalues.size());
  for (Index j = 0; j < eigenvalues.size(); ++j) {
    out(j) = eval_fourier(s, wrap_angle(eigenvalues(j) - shift)).real();
  }
  return out;
}

// Born-rule draw of an eigenvalue, reported as its bin; the post-measurement
// state is the renormalized projection onto the whole bin.
QpeOutcome sample_bin(const SpectralDecomposition& h, const EnergyBinning& binning,
                      const StateVector& psi, Rng& rng) {
  if (psi.dim() != h.dim()) throw ValidationError("qpe_project: dimension mismatch");
  const Vector c = h.eigenvectors.adjoint() * psi.amplitudes();
  std::vector<double> weights(static_cast<std::size_t>(c.size()));
  for (Index j = 0; j < c.size(); ++j) weights[static_cast<std::size_t>(j)] = std::norm(c(j));
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::discrete_distribution<Index> pick(weights.begin(), weights.end());
    const Index j = pick(rng);
    const long bin = binning.bin_of(h.eigenvalues(j));
    Vector proj = Vector::Zero(c.size());
    for (Index i = 0; i < c.size(); ++i) {
      if (binning.bin_of(h.eigenvalues(i)) == bin) proj(i) = c(i);
    }
    const double norm2 = proj.squaredNorm();
    if (norm2 < 1e-14) {
      weights[static_cast<std::size_t>(j)] = 0.0;  // resample from the remaining weight
      continue;
    }
    QpeOutcome out;
    out.bin = bin;
    out.bin_center = binning.center(bin);
    out.energy_estimate = std::clamp(out.bin_center, -1.0, 1.0);
    out.probability = norm2;
    out.sampled_eigenvalue = h.eigenvalues(j);
    out.state = StateVector(h.eigenvectors * proj / std::sqrt(norm2));
    return out;
  }
  throw NumericError("qpe_project: no bin with non-negligible weight", 0.0);
}

}  // namespace

const char* to_string(HsignMode mode) {
  return mode == HsignMode::exact_spectral ? "exact_spectral" : "gqsp_circuit";
}

HsignMode hsign_mode_from_string(const std::string& name) {
  if (name == "exact_spectral") return HsignMode::exact_spectral;
  if (name == "gqsp_circuit") return HsignMode::gqsp_circuit;
  throw ValidationError("unknown mode '" + name + "' (expected exact_spectral|gqsp_circuit)");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::max_steps: return "max_steps";
    case Termination::target_energy: return "target_energy";
    case Termination::patience: return "patience";
    case Termination::error: return "error";
  }
  return "unknown";
}

void StoppingRule::validate() const {
  if (max_steps < 1) throw ValidationError("stop.max_steps must be >= 1");
  if (patience && *patience < 1) throw ValidationError("stop.patience must be >= 1");
}

double CoolingConfig::delta() const {
  return delta_override ? *delta_override : 1.0 / static_cast<double>(d);
}

void CoolingConfig::validate() const {
  if (d < 2) throw ValidationError("d must be >= 2");
  if (!(epsilon > 0.0 && epsilon <= 0.7)) {
    throw ValidationError("epsilon must lie in (0, 0.7]");
  }
  const double dl = delta();
  if (!(dl > 0.0 && dl < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  require_normalized(hamiltonian, "hamiltonian");
  require_normalized(perturbation, "perturbation");
  if (perturbation.dim() != hamiltonian.dim() || initial_state.dim() != hamiltonian.dim()) {
    throw ValidationError("hamiltonian, perturbation and initial state dimensions differ");
  }
  stop.validate();
}

// ---------------------------------------------------------------------------

EnergyBinning::EnergyBinning(double width, const RealVector& eigenvalues) : width_(width) {
  if (!(width > 0.0)) throw ValidationError("bin width must be positive");
  auto clear = [&](double offset) {
    for (Index j = 0; j < eigenvalues.size(); ++j) {
      const double u = (eigenvalues(j) - offset) / width + 0.5;
      if (std::abs(u - std::round(u)) * width < 1e-9) return false;
    }
    return true;
  };
  for (double off : {0.0, 0.25, -0.25, 0.125, -0.125, 0.375, -0.375}) {
    if (clear(off * width)) {
      offset_ = off * width;
      return;
    }
  }
  offset_ = 0.0;  // degenerate spacing: fall back to the unshifted grid
}

long EnergyBinning::bin_of(double energy) const {
  return static_cast<long>(std::floor((energy - offset_) / width_ + 0.5));
}

double EnergyBinning::center(long bin) const {
  return offset_ + static_cast<double>(bin) * width_;
}

// ---------------------------------------------------------------------------

double cooling_time(double delta) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  return kPi * std::ceil(1.0 / (kPi * std::sqrt(delta)) - 1e-12);
}

QueryCosts query_costs(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < kPi)) throw ValidationError("epsilon out of range");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  QueryCosts c;
  c.evolution_time = cooling_time(delta);
  c.sign_degree = build_sign_poly(2.0 * std::sin(epsilon / 2.0), delta).degree();
  const double log_eps = std::ceil(std::log2(1.0 / epsilon) - 1e-12);
  const double log_delta = std::ceil(std::log2(1.0 / delta) - 1e-12);
  const long long qpe = ceil_ll(std::max(1.0, log_eps) * std::max(1.0, log_delta) / epsilon);
  c.per_iter_eiH =
      static_cast<long long>(c.sign_degree) * ceil_ll(c.evolution_time / kPi) + qpe;
  c.per_iter_UA = ceil_ll(c.evolution_time);
  return c;
}

// ---------------------------------------------------------------------------

SignTransform::SignTransform(double epsilon, double delta, HsignMode mode)
    : s_(build_sign_fourier(epsilon, delta)), mode_(mode) {
  if (mode_ == HsignMode::gqsp_circuit) {
    angles_ = compute_angles(complete(with_margin(s_, 1e-6), 1e-6));
  }
}

HermitianOperator SignTransform::apply(const SpectralDecomposition& h, double shift) const {
  // The exact route also enforces the range precondition for both modes.
  HermitianOperator exact = apply_spectral(s_, h, shift);
  if (mode_ == HsignMode::exact_spectral) return exact;

  Vector phases(h.dim());
  for (Index j = 0; j < h.dim(); ++j) phases(j) = std::polar(1.0, h.eigenvalues(j) - shift);
  const UnitaryOperator u(h.eigenvectors * phases.asDiagonal() * h.eigenvectors.adjoint());
  const Matrix block = assemble_and_extract(*angles_, u);
  return HermitianOperator(0.5 * (block + block.adjoint()));
}

// ---------------------------------------------------------------------------

CoolingEngine::CoolingEngine(HermitianOperator h, HermitianOperator a, double epsilon,
                             double delta, HsignMode mode)
    : h_(std::move(h)),
      a_(std::move(a)),
      spectrum_(eig(h_)),
      epsilon_(epsilon),
      delta_(delta),
      time_(cooling_time(delta)),
      sign_(epsilon, delta, mode),
      costs_(query_costs(epsilon, delta)),
      binning_(epsilon, spectrum_.eigenvalues),
      ground_energy_(spectrum_.eigenvalues(0)) {
  if (a_.dim() != h_.dim()) throw ValidationError("H and A dimensions differ");
}

double CoolingEngine::energy(const StateVector& psi) const {
  return (psi.amplitudes().adjoint() * h_.matrix() * psi.amplitudes())(0, 0).real();
}

double CoolingEngine::ground_overlap(const StateVector& psi) const {
  const Vector c = spectrum_.eigenvectors.adjoint() * psi.amplitudes();
  double w = 0.0;
  for (Index j = 0; j < c.size(); ++j) {
    if (spectrum_.eigenvalues(j) - ground_energy_ < 1e-9) w += std::norm(c(j));
  }
  return w;
}

double CoolingEngine::weight_above(const StateVector& psi, double threshold) const {
  const Vector c = spectrum_.eigenvectors.adjoint() * psi.amplitudes();
  double w = 0.0;
  for (Index j = 0; j < c.size(); ++j) {
    if (spectrum_.eigenvalues(j) >= threshold) w += std::norm(c(j));
  }
  return std::min(w, 1.0);
}

QpeOutcome CoolingEngine::measure(const StateVector& psi, Rng& rng) const {
  return sample_bin(spectrum_, binning_, psi, rng);
}

HermitianOperator CoolingEngine::hsign(double energy_estimate) const {
  return sign_.apply(spectrum_, energy_estimate + epsilon_);
}

HermitianOperator CoolingEngine::perturbed(double energy_estimate) const {
  return hsign(energy_estimate) + a_.scaled(std::sqrt(delta_) / 2.0);
}

StateVector CoolingEngine::evolve_at(const StateVector& psi, double energy_estimate) const {
  const UnitaryOperator u = evolve(perturbed(energy_estimate), time_);
  return StateVector::normalized(u.matrix() * psi.amplitudes());
}

StepResult CoolingEngine::step_from(const QpeOutcome& outcome) const {
  StepResult r;
  r.bin = outcome.bin;
  r.energy_estimate = outcome.energy_estimate;
  r.post_qpe_state = outcome.state;
  r.post_evolution_state = evolve_at(outcome.state, outcome.energy_estimate);
  r.leakage_weight =
      weight_above(r.post_evolution_state, outcome.energy_estimate + 1.5 * epsilon_);
  r.true_energy = energy(r.post_evolution_state);
  r.ground_overlap = ground_overlap(r.post_evolution_state);
  r.queries_eiH = costs_.per_iter_eiH;
  r.queries_UA = costs_.per_iter_UA;
  return r;
}

StepResult CoolingEngine::step(const StateVector& psi, Rng& rng) const {
  return step_from(measure(psi, rng));
}

// ---------------------------------------------------------------------------

QpeOutcome qpe_project(const SpectralDecomposition& h, const StateVector& psi, double epsilon,
                       Rng& rng) {
  return sample_bin(h, EnergyBinning(epsilon, h.eigenvalues), psi, rng);
}

HermitianOperator build_hsign(const HermitianOperator& h, double energy_estimate,
                              double epsilon, double delta, HsignMode mode) {
  return SignTransform(epsilon, delta, mode).apply(eig(h), energy_estimate + epsilon);
}

StepResult cooling_step(const HermitianOperator& h, const HermitianOperator& a,
                        const StateVector& psi, double epsilon, double delta, Rng& rng,
                        HsignMode mode) {
  const CoolingEngine engine(h, a, epsilon, delta, mode);
  return engine.step(psi, rng);
}

// ---------------------------------------------------------------------------

bool Trajectory::success() const {
  if (reason == Termination::error) return false;
  return std::none_of(steps.begin(), steps.end(), [](const StepResult& s) { return s.leaked; });
}

Trajectory run(const CoolingConfig& config) {
  config.validate();
  const CoolingEngine engine(config.hamiltonian, config.perturbation, config.epsilon,
                             config.delta(), config.mode);
  Rng rng = substream(config.seed, 0);
  return run(config, engine, rng);
}

Trajectory run(const CoolingConfig& config, const CoolingEngine& engine, Rng& rng) {
  Trajectory traj;
  traj.config = config;
  traj.initial_energy = engine.energy(config.initial_state);
  traj.initial_ground_overlap = engine.ground_overlap(config.initial_state);

  StateVector psi = config.initial_state;
  long long eih = 0;
  long long ua = 0;
  int stalled = 0;
  std::optional<double> previous_estimate;
  try {
    QpeOutcome outcome = engine.measure(psi, rng);
    for (int k = 0; k < config.stop.max_steps; ++k) {
      if (k > 0) {
        outcome = engine.measure(psi, rng);
        StepResult& prev = traj.steps.back();
        prev.leaked = outcome.sampled_eigenvalue >= prev.energy_estimate + 1.5 * engine.epsilon();
      }
      StepResult r = engine.step_from(outcome);
      eih += r.queries_eiH;
      ua += r.queries_UA;
      r.queries_eiH = eih;
      r.queries_UA = ua;
      psi = r.post_evolution_state;
      const double estimate = r.energy_estimate;
      traj.steps.push_back(std::move(r));

      if (config.stop.target_energy && estimate <= *config.stop.target_energy) {
        traj.reason = Termination::target_energy;
        break;
      }
      if (config.stop.patience) {
        stalled = (previous_estimate && estimate >= *previous_estimate) ? stalled + 1 : 0;
        if (stalled >= *config.stop.patience) {
          traj.reason = Termination::patience;
          break;
        }
      }
      previous_estimate = estimate;
    }
    // Terminal measurement resolves whether the final step leaked.
    const QpeOutcome last = engine.measure(psi, rng);
    StepResult& prev = traj.steps.back();
    prev.leaked = last.sampled_eigenvalue >= prev.energy_estimate + 1.5 * engine.epsilon();
    traj.terminal_energy_estimate = last.energy_estimate;
  } catch (const Error& e) {
    traj.reason = Termination::error;
    traj.error = e.what();
  }
  return traj;
}

// ---------------------------------------------------------------------------

double register_energy(long j, int bits) {
  return wrap_angle(static_cast<double>(j) * 2.0 * kPi / std::ldexp(1.0, bits));
}

StateVector coherent_qpe_prepare(const SpectralDecomposition& h, const StateVector& psi,
                                 int bits) {
  if (bits < 1 || bits > 12) throw ValidationError("register width must lie in [1, 12]");
  if (psi.dim() != h.dim()) throw ValidationError("coherent_qpe_prepare: dimension mismatch");
  const long size = 1L << bits;
  const double w = 2.0 * kPi / static_cast<double>(size);
  const Vector c = h.eigenvectors.adjoint() * psi.amplitudes();
  Vector joint = Vector::Zero(size * h.dim());
  for (Index i = 0; i < h.dim(); ++i) {
    long j = static_cast<long>(std::llround(h.eigenvalues(i) / w)) % size;
    if (j < 0) j += size;
    joint.segment(j * h.dim(), h.dim()) += c(i) * h.eigenvectors.col(i);
  }
  return StateVector(joint);
}

StateVector coherent_step(const HermitianOperator& h, const HermitianOperator& a,
                          const StateVector& joint, int bits, double epsilon, double delta) {
  if (bits < 1 || bits > 12) throw ValidationError("register width must lie in [1, 12]");
  if (a.dim() != h.dim()) throw ValidationError("coherent_step: H and A dimensions differ");
  const Index dim = h.dim();
  const long size = 1L << bits;
  if (joint.dim() != size * dim) {
    std::ostringstream os;
    os << "coherent_step: joint state has dimension " << joint.dim() << ", expected "
       << size * dim;
    throw ValidationError(os.str());
  }
  if (static_cast<std::size_t>(size * dim) > kTol.max_total_dim) {
    throw ResourceError("coherent_step: joint dimension exceeds the configured budget");
  }
  const FourierPolynomial s = build_sign_fourier(epsilon, delta);
  const SpectralDecomposition sd = eig(h);
  const double t = cooling_time(delta);
  const Matrix pert = (std::sqrt(delta) / 2.0) * a.matrix();

  // H~ is block diagonal in the register, so each branch evolves independently.
  Vector out(size * dim);
  for (long j = 0; j < size; ++j) {
    const Vector branch = joint.amplitudes().segment(j * dim, dim);
    if (branch.squaredNorm() == 0.0) {
      out.segment(j * dim, dim).setZero();
      continue;
    }
    const double shift = register_energy(j, bits) + epsilon;
    const HermitianOperator hb(from_spectrum(sd, sign_values_wrapped(s, sd.eigenvalues, shift)) +
                               pert);
    out.segment(j * dim, dim) = evolve(hb, t).matrix() * branch;
  }
  return StateVector(out);
}

}  // namespace dyncool
