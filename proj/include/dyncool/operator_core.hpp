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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "dyncool/errors.hpp"

namespace dyncool {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Global numerical tolerances. One record so every check in the library
/// agrees on what "Hermitian" or "unitary" means.
struct Tolerances {
  double hermiticity = 1e-12;     // max |M - M^dagger| entry
  double unitarity = 1e-10;       // max |U U^dagger - I| entry
  double idempotence = 1e-10;     // max |P^2 - P| entry
  double projector_eigen = 1e-8;  // eigenvalues of a projector near {0, 1}
  double reconstruction = 1e-9;   // |V diag(l) V^dagger - H|
  double state_norm = 1e-10;      // | |psi| - 1 |
  double operator_norm = 1e-10;   // slack on ||H|| <= 1 for algorithm inputs
  std::size_t max_total_dim = 4096;
};

inline constexpr Tolerances kTol{};

/// Largest absolute entry of a matrix (0 for empty).
double max_abs(const Matrix& m);

class HermitianOperator {
 public:
  /// Validates Hermiticity within kTol.hermiticity and stores the exactly
  /// symmetrized matrix (M + M^dagger) / 2.
  explicit HermitianOperator(const Matrix& entries);

  static HermitianOperator zero(Index dim);
  static HermitianOperator identity(Index dim);
  static HermitianOperator diagonal(const RealVector& values);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator scaled(double s) const;
  HermitianOperator shifted(double s) const;  // H - s I

 private:
  Matrix m_;
};

class UnitaryOperator {
 public:
  explicit UnitaryOperator(const Matrix& entries);
  static UnitaryOperator identity(Index dim);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  UnitaryOperator adjoint() const;
  UnitaryOperator operator*(const UnitaryOperator& other) const;

 private:
  Matrix m_;
};

class Projector {
 public:
  explicit Projector(const Matrix& entries);
  static Projector zero(Index dim);
  static Projector identity(Index dim);
  /// Orthogonal projector onto the span of the (orthonormal) columns.
  static Projector onto_columns(const Matrix& orthonormal_columns, Index dim);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Index rank() const { return rank_; }
  Projector complement() const;

 private:
  Projector(Matrix m, Index rank) : m_(std::move(m)), rank_(rank) {}
  Matrix m_;
  Index rank_ = 0;
};

class StateVector {
 public:
  explicit StateVector(const Vector& amplitudes);
  /// Normalizes the input; throws ValidationError on a (near) zero vector.
  static StateVector normalized(const Vector& amplitudes);
  static StateVector basis(Index dim, Index k);

  Index dim() const { return v_.size(); }
  const Vector& amplitudes() const { return v_; }

 private:
  Vector v_;
};

/// H = V diag(eigenvalues) V^dagger, eigenvalues ascending.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  Index dim() const { return eigenvalues.size(); }
  Matrix reconstruct() const;
};

/// Block-diagonal operator sum_j |j><j| (x) (base - j 2pi / 2^n).
struct ShiftRegisterOperator {
  int bits = 0;
  HermitianOperator base = HermitianOperator::zero(0);
  HermitianOperator entries = HermitianOperator::zero(0);

  Index blocks() const { return Index{1} << bits; }
  double block_shift(Index j) const;
};

SpectralDecomposition eig(const HermitianOperator& h);

/// e^{-iHt} through the eigendecomposition.
UnitaryOperator evolve(const HermitianOperator& h, double t);
UnitaryOperator evolve(const SpectralDecomposition& s, double t);

/// REF(P) = I - 2P.
HermitianOperator reflection(const Projector& p);

/// Projector onto eigenvectors with eigenvalue strictly below `threshold`.
Projector projector_below(const SpectralDecomposition& s, double threshold);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Throws ValidationError if ||h|| > 1 + kTol.operator_norm.
void require_normalized(const HermitianOperator& h, const char* name);

ShiftRegisterOperator shift_operator(const HermitianOperator& h, int bits,
                                     std::size_t max_total_dim = kTol.max_total_dim);

/// [ (x)_{m=n-1..0} Phase(2^m 2pi / 2^n) ] (x) e^{iH}; equal to e^{+i SHIFT_n(H)}.
UnitaryOperator shift_evolution_factored(const HermitianOperator& h, int bits,
                                         std::size_t max_total_dim = kTol.max_total_dim);

/// Single-qubit Phase(theta) = diag(1, e^{-i theta}).
Matrix phase_gate(double theta);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace dyncool
