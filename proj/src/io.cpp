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

#include "dyncool/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dyncool/errors.hpp"

namespace dyncool {
namespace {

const Json& field(const Json& j, const char* name, const std::string& context) {
  if (!j.is_object()) throw ValidationError(context + ": expected an object");
  const auto it = j.find(name);
  if (it == j.end()) throw ValidationError(context + ": missing field '" + name + "'");
  return *it;
}

double number(const Json& j, const std::string& context) {
  if (!j.is_number()) throw ValidationError(context + ": expected a number");
  return j.get<double>();
}

std::vector<double> numbers(const Json& j, const std::string& context) {
  if (!j.is_array()) throw ValidationError(context + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], context + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Complex pair_value(const Json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(context + ": expected [re, im]");
  return {number(j[0], context + ".re"), number(j[1], context + ".im")};
}

Json pair_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

std::vector<Complex> pair_list(const Json& j, const std::string& context) {
  if (!j.is_array()) throw ValidationError(context + ": expected an array of [re, im] pairs");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(pair_value(j[i], context + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(pair_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", m.rows()}, {"entries", std::move(rows)}};
}

Matrix matrix_from_json(const Json& j, const std::string& context) {
  const double dim_value = number(field(j, "dim", context), context + ".dim");
  if (dim_value < 1 || dim_value != std::floor(dim_value)) {
    throw ValidationError(context + ".dim: expected a positive integer");
  }
  const auto dim = static_cast<Index>(dim_value);
  const Json& rows = field(j, "entries", context);
  if (!rows.is_array() || static_cast<Index>(rows.size()) != dim) {
    throw ValidationError(context + ".entries: expected " + std::to_string(dim) + " rows");
  }
  Matrix out(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const std::string row_ctx = context + ".entries row " + std::to_string(r);
    const std::vector<Complex> row = pair_list(rows[static_cast<std::size_t>(r)], row_ctx);
    if (static_cast<Index>(row.size()) != dim) {
      throw ValidationError(row_ctx + ": expected " + std::to_string(dim) + " entries, found " +
                            std::to_string(row.size()));
    }
    for (Index c = 0; c < dim; ++c) out(r, c) = row[static_cast<std::size_t>(c)];
  }
  return out;
}

Json vector_to_json(const Vector& v) {
  Json amps = Json::array();
  for (Index i = 0; i < v.size(); ++i) amps.push_back(pair_json(v(i)));
  return Json{{"dim", v.size()}, {"amplitudes", std::move(amps)}};
}

Vector vector_from_json(const Json& j, const std::string& context) {
  const std::vector<Complex> amps = pair_list(field(j, "amplitudes", context), context + ".amplitudes");
  if (j.contains("dim") && number(j.at("dim"), context + ".dim") != static_cast<double>(amps.size())) {
    throw ValidationError(context + ": 'dim' disagrees with the number of amplitudes");
  }
  Vector v(static_cast<Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Index>(i)) = amps[i];
  return v;
}

Json polynomial_to_json(const FourierPolynomial& p) {
  Json coeffs = Json::array();
  for (const Complex& c : p.coefficients()) coeffs.push_back(pair_json(c));
  return Json{{"epsilon", p.epsilon()},
              {"delta", p.delta()},
              {"degree", std::max(p.neg_degree(), p.pos_degree())},
              {"neg_degree", p.neg_degree()},
              {"pos_degree", p.pos_degree()},
              {"coefficients", std::move(coeffs)}};
}

FourierPolynomial polynomial_from_json(const Json& j, const std::string& context) {
  // A lone "degree" means the symmetric range [-degree, degree].
  int k = 0;
  int m = 0;
  if (j.contains("neg_degree") || j.contains("pos_degree")) {
    k = static_cast<int>(number(field(j, "neg_degree", context), context + ".neg_degree"));
    m = static_cast<int>(number(field(j, "pos_degree", context), context + ".pos_degree"));
  } else {
    k = m = static_cast<int>(number(field(j, "degree", context), context + ".degree"));
  }
  std::vector<Complex> coeffs = pair_list(field(j, "coefficients", context), context + ".coefficients");
  if (coeffs.size() != static_cast<std::size_t>(k + m + 1)) {
    throw ValidationError(context + ".coefficients: expected " + std::to_string(k + m + 1) +
                          " entries, found " + std::to_string(coeffs.size()));
  }
  const double eps = j.contains("epsilon") ? number(j.at("epsilon"), context + ".epsilon") : 0.0;
  const double delta = j.contains("delta") ? number(j.at("delta"), context + ".delta") : 0.0;
  return FourierPolynomial(k, m, std::move(coeffs), eps, delta);
}

Json angles_to_json(const AngleSequence& a) {
  return Json{{"theta", a.theta}, {"phi", a.phi}, {"lambda", a.lambda}, {"k", a.k}, {"m", a.m}};
}

AngleSequence angles_from_json(const Json& j, const std::string& context) {
  AngleSequence a;
  a.theta = numbers(field(j, "theta", context), context + ".theta");
  a.phi = numbers(field(j, "phi", context), context + ".phi");
  a.lambda = number(field(j, "lambda", context), context + ".lambda");
  a.k = static_cast<int>(number(field(j, "k", context), context + ".k"));
  a.m = static_cast<int>(number(field(j, "m", context), context + ".m"));
  a.validate();
  return a;
}

Json cert_to_json(const CertSummary& s) {
  Json records = Json::array();
  for (const auto& r : s.records) {
    records.push_back(Json{{"claim", r.claim},
                           {"instance", r.instance},
                           {"bound", r.bound},
                           {"measured", r.measured},
                           {"slack", r.slack},
                           {"pass", r.passed}});
  }
  return Json{{"claim", s.claim}, {"pass", s.passed}, {"note", s.note}, {"records", records}};
}

CertSummary cert_from_json(const Json& j) {
  CertSummary s;
  s.claim = j.at("claim").get<std::string>();
  s.passed = j.at("pass").get<bool>();
  s.note = j.value("note", std::string{});
  for (const auto& r : j.at("records")) {
    CertRecord c;
    c.claim = r.at("claim").get<std::string>();
    c.instance = r.at("instance").get<std::string>();
    c.bound = r.at("bound").get<double>();
    c.measured = r.at("measured").get<double>();
    c.slack = r.at("slack").get<double>();
    c.passed = r.at("pass").get<bool>();
    s.records.push_back(std::move(c));
  }
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

HermitianOperator read_hermitian_file(const std::string& path) {
  return HermitianOperator(matrix_from_json(read_json_file(path), path));
}

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw ResourceError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ResourceError("cannot rename into '" + path + "': " + ec.message());
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace dyncool
