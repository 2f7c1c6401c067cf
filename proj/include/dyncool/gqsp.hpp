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

#include <cstddef>
#include <vector>

#include "dyncool/operator_core.hpp"
#include "dyncool/signfun.hpp"

namespace dyncool {

/// Rotation angles for a Laurent polynomial with degrees [-k, m]:
/// theta and phi have k + m + 1 entries. Entry 0 is the initial rotation
/// R(theta_0, phi_0, lambda); entry j >= 1 follows the j-th controlled query
/// (controlled-U for j <= m, controlled-U^dagger for j > m).
struct AngleSequence {
  std::vector<double> theta;
  std::vector<double> phi;
  double lambda = 0.0;
  int k = 0;
  int m = 0;

  std::size_t length() const { return theta.size(); }
  /// Throws ValidationError when the vector lengths disagree with k + m + 1.
  void validate() const;
};

/// (P, Q) with |P|^2 + |Q|^2 = 1 on the unit circle.
struct CompletionPair {
  FourierPolynomial p;
  FourierPolynomial q;
};

enum class CompletionMethod {
  automatic,  // roots for total degree <= kRootCompletionMaxDegree, else cepstral
  roots,      // Fejer-Riesz root selection
  cepstral,   // FFT minimum-phase factorization
};

inline constexpr int kRootCompletionMaxDegree = 24;

/// R(theta, phi, lambda) of the single ancilla qubit.
UnitaryOperator rotation_matrix(double theta, double phi, double lambda = 0.0);

/// Max |P(e^{ix})| on a uniform grid (FFT evaluated, at least 2^14 points).
double max_modulus(const FourierPolynomial& p);

/// Returns p unchanged when max |p| <= 1 - eta, otherwise p scaled so that
/// its grid maximum equals 1 - eta.
FourierPolynomial with_margin(const FourierPolynomial& p, double eta = 1e-4);

/// Complementary polynomial Q with degrees in [-k, m]. Requires the grid
/// maximum of |P| to be at most 1 - eta with eta >= 1e-6.
CompletionPair complete(const FourierPolynomial& p, double eta = 1e-4,
                        CompletionMethod method = CompletionMethod::automatic);

/// max over a uniform grid of | |P|^2 + |Q|^2 - 1 |.
double completion_defect(const CompletionPair& pair, std::size_t grid_points = 10000);

/// Peels one degree per step from (z^k P, z^k Q). `residual_tol` bounds the
/// coefficient that each step must annihilate.
AngleSequence compute_angles(const CompletionPair& pair, double residual_tol = 1e-7);

struct GqspCircuit {
  Matrix block;  // top-left dim(U) x dim(U) block
  Matrix full;   // the whole 2 dim(U) square product
  int controlled_u = 0;
  int controlled_u_dagger = 0;
};

/// Multiplies out R_{k+m} B ... R_{m+1} B R_m A ... R_1 A R_0 where
/// A = diag(U, I) and B = diag(I, U^dagger), ancilla as the outer factor.
GqspCircuit assemble(const AngleSequence& angles, const UnitaryOperator& u);

/// Top-left block of `assemble`.
Matrix assemble_and_extract(const AngleSequence& angles, const UnitaryOperator& u);

}  // namespace dyncool
