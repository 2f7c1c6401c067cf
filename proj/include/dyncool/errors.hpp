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
#include <stdexcept>
#include <string>

namespace dyncool {

// Every library failure derives from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a type invariant (non-Hermitian, non-unitary, bad norm...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Spectrum outside the domain where a sign approximation is certified.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Requested construction exceeds the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A constructed polynomial failed its own grid certification.
class CertificationError : public Error {
 public:
  CertificationError(const std::string& what, double worst_x, double worst_value)
      : Error(what), worst_x_(worst_x), worst_value_(worst_value) {}
  double worst_x() const { return worst_x_; }
  double worst_value() const { return worst_value_; }

 private:
  double worst_x_;
  double worst_value_;
};

// Polynomial is too close to modulus one for a complementary polynomial.
class MarginError : public Error {
 public:
  using Error::Error;
};

// Root finding or spectral factorization did not reach its residual target.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Angle peeling could not reduce the degree at a given step.
class SynthesisError : public Error {
 public:
  SynthesisError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// Quadrature grid too coarse for the requested certification slack.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dyncool
