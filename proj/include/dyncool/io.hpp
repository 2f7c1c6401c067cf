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

#include <string>

#include <nlohmann/json.hpp>

#include "dyncool/dyson_verify.hpp"
#include "dyncool/gqsp.hpp"
#include "dyncool/operator_core.hpp"
#include "dyncool/signfun.hpp"

namespace dyncool {

using Json = nlohmann::json;

// Complex numbers are [re, im] pairs. Matrices: {"dim", "entries"} with
// entries a row-major dim x dim array of pairs. Vectors: {"dim", "amplitudes"}.
Json matrix_to_json(const Matrix& m);
/// `context` prefixes error messages (typically the source file name).
Matrix matrix_from_json(const Json& j, const std::string& context = "matrix");

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& context = "vector");

/// {"epsilon", "delta", "degree", "neg_degree", "pos_degree", "coefficients"}
/// with coefficients listed from n = -neg_degree upward.
Json polynomial_to_json(const FourierPolynomial& p);
FourierPolynomial polynomial_from_json(const Json& j,
                                       const std::string& context = "polynomial");

Json angles_to_json(const AngleSequence& a);
AngleSequence angles_from_json(const Json& j, const std::string& context = "angles");

Json cert_to_json(const CertSummary& s);
CertSummary cert_from_json(const Json& j);

/// Parses a JSON document from disk; errors carry the path and the parser's
/// line/column message.
Json read_json_file(const std::string& path);
/// Hermitian matrix stored as a JSON matrix document.
HermitianOperator read_hermitian_file(const std::string& path);

/// Writes through a sibling temporary file and renames it into place.
void atomic_write(const std::string& path, const std::string& contents);

/// 17 significant digits, the precision promised for CSV output.
std::string format_double(double x);

}  // namespace dyncool
