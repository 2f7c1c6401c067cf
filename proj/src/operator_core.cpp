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

#include "dyncool/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

namespace dyncool {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(const Matrix& entries) {
  require_square(entries, "HermitianOperator");
  const double asym = max_abs(entries - entries.adjoint());
  if (asym > kTol.hermiticity) {
    std::ostringstream os;
    os << "HermitianOperator: matrix is not Hermitian (max |M - M^dagger| = " << asym
       << ")";
    throw ValidationError(os.str());
  }
  m_ = (entries + entries.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& values) {
  return HermitianOperator(Matrix(values.cast<Complex>().asDiagonal()));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  return HermitianOperator(m_ + other.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
  return HermitianOperator(m_ - other.m_);
}

HermitianOperator HermitianOperator::scaled(double s) const {
  return HermitianOperator(m_ * s);
}

HermitianOperator HermitianOperator::shifted(double s) const {
  return HermitianOperator(m_ - s * Matrix::Identity(dim(), dim()));
}

// ---------------------------------------------------------------------------
// UnitaryOperator

UnitaryOperator::UnitaryOperator(const Matrix& entries) : m_(entries) {
  require_square(entries, "UnitaryOperator");
  const double dev = max_abs(entries * entries.adjoint() -
                             Matrix::Identity(entries.rows(), entries.cols()));
  if (dev > kTol.unitarity) {
    std::ostringstream os;
    os << "UnitaryOperator: max |U U^dagger - I| = " << dev;
    throw ValidationError(os.str());
  }
}

UnitaryOperator UnitaryOperator::identity(Index dim) {
  return UnitaryOperator(Matrix::Identity(dim, dim));
}

UnitaryOperator UnitaryOperator::adjoint() const { return UnitaryOperator(m_.adjoint()); }

UnitaryOperator UnitaryOperator::operator*(const UnitaryOperator& other) const {
  return UnitaryOperator(m_ * other.m_);
}

// ---------------------------------------------------------------------------
// Projector

Projector::Projector(const Matrix& entries) {
  require_square(entries, "Projector");
  HermitianOperator herm(entries);  // throws when not Hermitian
  const double idem = max_abs(herm.matrix() * herm.matrix() - herm.matrix());
  if (idem > kTol.idempotence) {
    std::ostringstream os;
    os << "Projector: max |P^2 - P| = " << idem;
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm.matrix(), Eigen::EigenvaluesOnly);
  Index rank = 0;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double ev = solver.eigenvalues()(i);
    const double off = std::min(std::abs(ev), std::abs(ev - 1.0));
    if (off > kTol.projector_eigen) {
      std::ostringstream os;
      os << "Projector: eigenvalue " << ev << " is not in {0, 1}";
      throw ValidationError(os.str());
    }
    if (ev > 0.5) ++rank;
  }
  m_ = herm.matrix();
  rank_ = rank;
}

Projector Projector::zero(Index dim) { return Projector(Matrix::Zero(dim, dim), 0); }

Projector Projector::identity(Index dim) {
  return Projector(Matrix::Identity(dim, dim), dim);
}

Projector Projector::onto_columns(const Matrix& cols, Index dim) {
  if (cols.rows() != dim) throw ValidationError("Projector: column length mismatch");
  const Matrix gram = cols.adjoint() * cols;
  if (max_abs(gram - Matrix::Identity(cols.cols(), cols.cols())) > kTol.unitarity) {
    throw ValidationError("Projector: columns are not orthonormal");
  }
  Matrix p = cols * cols.adjoint();
  p = (p + p.adjoint()) * 0.5;
  return Projector(std::move(p), cols.cols());
}

Projector Projector::complement() const {
  return Projector(Matrix::Identity(dim(), dim()) - m_, dim() - rank_);
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(const Vector& amplitudes) : v_(amplitudes) {
  if (!amplitudes.allFinite()) throw ValidationError("StateVector: non-finite amplitude");
  const double n = amplitudes.norm();
  if (std::abs(n - 1.0) > kTol.state_norm) {
    std::ostringstream os;
    os << "StateVector: norm " << n << " differs from 1";
    throw ValidationError(os.str());
  }
}

StateVector StateVector::normalized(const Vector& amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw ValidationError("StateVector: cannot normalize a zero vector");
  }
  return StateVector(amplitudes / n);
}

StateVector StateVector::basis(Index dim, Index k) {
  if (k < 0 || k >= dim) throw ValidationError("StateVector: basis index out of range");
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return StateVector(v);
}

// ---------------------------------------------------------------------------
// Spectral routines

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

double ShiftRegisterOperator::block_shift(Index j) const {
  return static_cast<double>(j) * 2.0 * std::numbers::pi / static_cast<double>(blocks());
}

SpectralDecomposition eig(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericError("eig: eigensolver did not converge", 0.0);
  }
  // Eigen already returns ascending order; the stable re-sort pins tie order to
  // the solver's column order.
  const Index n = h.dim();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const RealVector& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return ev(a) < ev(b); });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = ev(order[static_cast<std::size_t>(i)]);
    out.eigenvectors.col(i) = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

UnitaryOperator evolve(const SpectralDecomposition& s, double t) {
  if (!std::isfinite(t)) throw ValidationError("evolve: non-finite time");
  Vector phases(s.dim());
  for (Index i = 0; i < s.dim(); ++i) {
    phases(i) = std::polar(1.0, -s.eigenvalues(i) * t);
  }
  return UnitaryOperator(s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint());
}

UnitaryOperator evolve(const HermitianOperator& h, double t) { return evolve(eig(h), t); }

HermitianOperator reflection(const Projector& p) {
  return HermitianOperator(Matrix::Identity(p.dim(), p.dim()) - 2.0 * p.matrix());
}

Projector projector_below(const SpectralDecomposition& s, double threshold) {
  Index count = 0;
  while (count < s.dim() && s.eigenvalues(count) < threshold) ++count;
  return Projector::onto_columns(s.eigenvectors.leftCols(count), s.dim());
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

void require_normalized(const HermitianOperator& h, const char* name) {
  const double n = spectral_norm(h.matrix());
  if (n > 1.0 + kTol.operator_norm) {
    std::ostringstream os;
    os << name << ": spectral norm " << n << " exceeds 1";
    throw ValidationError(os.str());
  }
}

namespace {

void check_shift_budget(const HermitianOperator& h, int bits, std::size_t max_total_dim) {
  if (bits < 1) throw ValidationError("shift_operator: register width must be >= 1");
  if (bits > 30 ||
      (std::size_t{1} << bits) * static_cast<std::size_t>(h.dim()) > max_total_dim) {
    std::ostringstream os;
    os << "shift_operator: 2^" << bits << " x " << h.dim()
       << " exceeds the dimension budget " << max_total_dim;
    throw ResourceError(os.str());
  }
}

}  // namespace

ShiftRegisterOperator shift_operator(const HermitianOperator& h, int bits,
                                     std::size_t max_total_dim) {
  check_shift_budget(h, bits, max_total_dim);
  ShiftRegisterOperator out;
  out.bits = bits;
  out.base = h;
  const Index m = h.dim();
  const Index blocks = out.blocks();
  Matrix full = Matrix::Zero(blocks * m, blocks * m);
  for (Index j = 0; j < blocks; ++j) {
    full.block(j * m, j * m, m, m) = h.shifted(out.block_shift(j)).matrix();
  }
  out.entries = HermitianOperator(full);
  return out;
}

Matrix phase_gate(double theta) {
  Matrix p = Matrix::Identity(2, 2);
  p(1, 1) = std::polar(1.0, -theta);
  return p;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

UnitaryOperator shift_evolution_factored(const HermitianOperator& h, int bits,
                                         std::size_t max_total_dim) {
  check_shift_budget(h, bits, max_total_dim);
  const double full_turn = 2.0 * std::numbers::pi;
  const double denom = std::ldexp(1.0, bits);
  // Qubit m carries bit j_m of the register value, most significant leftmost.
  Matrix reg = Matrix::Identity(1, 1);
  for (int m = bits - 1; m >= 0; --m) {
    reg = kron(reg, phase_gate(std::ldexp(1.0, m) * full_turn / denom));
  }
  return UnitaryOperator(kron(reg, evolve(h, -1.0).matrix()));
}

}  // namespace dyncool
