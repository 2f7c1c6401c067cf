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
#include <string>
#include <vector>

#include "dyncool/operator_core.hpp"
#include "dyncool/random.hpp"

namespace dyncool {

/// t = 1 / sqrt(delta), the effective-evolution time.
double effective_time(double delta);

/// ||(I - P) e^{-i H~ t} P||^2 with H~ = REF(P) + (sqrt(delta)/2) A and
/// t = pi ceil(1 / (pi sqrt(delta))).
double leakage(const HermitianOperator& a, const Projector& p, double delta);

/// ||e^{-it} P e^{-i H~ t} P - e^{-i P (A/2) P} P||^2 with t = 1/sqrt(delta).
/// The e^{-it} factor removes the phase REF(P) puts on the P subspace.
double effective_error(const HermitianOperator& a, const Projector& p, double delta);

/// Interaction-picture perturbation e^{i H0 s} A e^{-i H0 s} for H0 = REF(P).
Matrix interaction_operator(const Matrix& a, const Projector& p, double s);

struct QuadratureSpec {
  /// Uniform intervals on [0, t]; rounded up to a multiple of 4. Zero picks
  /// max(256, 64 t).
  int intervals = 0;
};

inline constexpr int kMaxDysonOrder = 6;

struct DysonTerm {
  int order = 0;
  Matrix op;
  double t = 0.0;
  double delta = 0.0;
  double bound = 0.0;               // t^k delta^{k/2} / (k! 2^k)
  double quadrature_error = 0.0;    // step-halving estimate
  double slack = 0.0;               // max(1e-8, 2 quadrature_error)
  int intervals = 0;
};

/// k-th Dyson term U_k(t, 0) in the interaction picture, by the recursion
/// U_k(s) = (sqrt(delta) / 2i) int_0^s A~(u) U_{k-1}(u) du.
DysonTerm dyson_term(const HermitianOperator& a, const Projector& p, double delta, int k,
                     double t, QuadratureSpec grid = {});

/// e^{-i H0 t} sum_{k <= max_order} U_k(t, 0), i.e. the truncated series
/// mapped back to the Schrodinger picture.
Matrix dyson_series(const HermitianOperator& a, const Projector& p, double delta, int max_order,
                    double t, QuadratureSpec grid = {});

struct TermLeakage {
  int order = 0;
  double value = 0.0;  // ||(I - P) U_k P||
  double bound = 0.0;  // t^{k-1} delta^{k/2} / ((k-1)! 2)
  double slack = 0.0;
  bool analytic = false;
};

/// Order 1 is evaluated in closed form: (sqrt(delta)/2) |sin t| ||(I-P) A P||.
TermLeakage per_term_leakage(const HermitianOperator& a, const Projector& p, double delta, int k,
                             double t, QuadratureSpec grid = {});

struct PathWeight {
  std::vector<int> j;  // J_1 .. J_{k-1}, entries in {0, 1}
  Complex value;
  double bound = 0.0;  // t^{k-1} / (k-1)!
  double quadrature_error = 0.0;
  double slack = 0.0;
};

/// Phi_k(J) = int_0^t e^{2i(J_1 - 1) t_1} int_0^{t_1} ... int_0^{t_{k-1}}
/// e^{2i(1 - J_{k-1}) t_k} dt_k ... dt_1, k = J.size() + 1.
PathWeight path_weight(const std::vector<int>& j, double t, QuadratureSpec grid = {});

struct TransitionMatrix {
  Eigen::MatrixXd first_order;  // entries T_ij
  Eigen::MatrixXd exact;        // |<l_i| e^{-i P_j (A/2) P_j} |l_j>|^2
  double threshold = 0.0;
};

/// Column j uses the projector onto eigenvalues <= lambda_j (the source
/// energy acts as the cooling threshold). `threshold` is recorded only.
TransitionMatrix transition_matrix(const SpectralDecomposition& s, const HermitianOperator& a,
                                   double threshold);

/// A = M / sqrt(N) with M drawn from the Gaussian unitary ensemble.
HermitianOperator sample_gue(Index n, Rng& rng);

struct CoolingProbability {
  double empirical = 0.0;
  double predicted = 0.0;
  double standard_error = 0.0;
};

CoolingProbability cooling_probability(const SpectralDecomposition& s, Index j, int trials,
                                       Rng& rng);

// --- certification sweeps --------------------------------------------------

struct CertRecord {
  std::string claim;
  std::string instance;
  double bound = 0.0;
  double measured = 0.0;
  double slack = 0.0;
  bool passed = false;
};

struct CertSummary {
  std::string claim;
  std::vector<CertRecord> records;
  bool passed = false;
  std::string note;
};

struct SweepOptions {
  std::uint64_t seed = 2024;
  unsigned workers = 0;
};

/// Leakage over dims {2,4,8,16} x 20 random (A, P) x delta {0.25, 0.04, 0.01}.
CertSummary certify_leakage(const SweepOptions& opts = {});
/// Effective-evolution error on the same grid.
CertSummary certify_effective(const SweepOptions& opts = {});
/// Per-term norm and leakage bounds for k <= 3 on 30 dim-4 instances.
CertSummary certify_dyson_terms(const SweepOptions& opts = {});
/// Order-1 leakage at t in {pi, 2 pi, 3 pi}.
CertSummary certify_first_order_cancellation(const SweepOptions& opts = {});
/// Path-weight bound for random J != 1, k <= 4.
CertSummary certify_path_weights(const SweepOptions& opts = {});
/// Truncated series against the exact exponential (delta 0.04, t 5, dim 4).
CertSummary certify_dyson_convergence(const SweepOptions& opts = {});

std::vector<CertSummary> certify_all(const SweepOptions& opts = {});

}  // namespace dyncool
