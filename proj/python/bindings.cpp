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

// Python bindings. Operators travel as complex numpy arrays; structured
// results come back as dicts.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dyncool/cooling.hpp"
#include "dyncool/dyson_verify.hpp"
#include "dyncool/errors.hpp"
#include "dyncool/experiment.hpp"
#include "dyncool/gqsp.hpp"
#include "dyncool/io.hpp"
#include "dyncool/operator_core.hpp"
#include "dyncool/random.hpp"
#include "dyncool/signfun.hpp"

namespace py = pybind11;
using namespace dyncool;

namespace {

HermitianOperator herm(const Matrix& m) { return HermitianOperator(m); }

Projector proj(const Matrix& m) { return Projector(m); }

CompletionMethod method_from(const std::string& name) {
  if (name == "automatic") return CompletionMethod::automatic;
  if (name == "roots") return CompletionMethod::roots;
  if (name == "cepstral") return CompletionMethod::cepstral;
  throw ValidationError("unknown completion method '" + name + "'");
}

py::dict step_dict(const StepResult& s) {
  py::dict d;
  d["bin"] = s.bin;
  d["energy_estimate"] = s.energy_estimate;
  d["post_qpe_state"] = s.post_qpe_state.amplitudes();
  d["post_evolution_state"] = s.post_evolution_state.amplitudes();
  d["leakage_weight"] = s.leakage_weight;
  d["true_energy"] = s.true_energy;
  d["ground_overlap"] = s.ground_overlap;
  d["queries_eiH"] = s.queries_eiH;
  d["queries_UA"] = s.queries_UA;
  d["leaked"] = s.leaked;
  return d;
}

py::dict cert_dict(const CertSummary& s) {
  py::list records;
  for (const auto& r : s.records) {
    py::dict d;
    d["claim"] = r.claim;
    d["instance"] = r.instance;
    d["bound"] = r.bound;
    d["measured"] = r.measured;
    d["slack"] = r.slack;
    d["passed"] = r.passed;
    records.append(d);
  }
  py::dict d;
  d["claim"] = s.claim;
  d["passed"] = s.passed;
  d["note"] = s.note;
  d["records"] = records;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ground-state preparation by dynamical cooling: numerical core.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<MarginError>(m, "MarginError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<SynthesisError>(m, "SynthesisError", base.ptr());
  py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
  py::register_exception<CertificationError>(m, "CertificationError", base.ptr());

  // -- operator core --------------------------------------------------------
  m.def("eig", [](const Matrix& h) {
    const auto s = eig(herm(h));
    return py::make_tuple(s.eigenvalues, s.eigenvectors);
  }, py::arg("h"), "Ascending eigenvalues and eigenvector columns of a Hermitian matrix.");
  m.def("evolve", [](const Matrix& h, double t) { return evolve(herm(h), t).matrix(); },
        py::arg("h"), py::arg("t"), "exp(-i H t).");
  m.def("spectral_norm", &spectral_norm, py::arg("m"));
  m.def("reflection", [](const Matrix& p) { return reflection(proj(p)).matrix(); }, py::arg("p"),
        "I - 2P.");
  m.def("shift_operator",
        [](const Matrix& h, int bits) { return shift_operator(herm(h), bits).entries.matrix(); },
        py::arg("h"), py::arg("bits"));
  m.def("shift_evolution_factored",
        [](const Matrix& h, int bits) { return shift_evolution_factored(herm(h), bits).matrix(); },
        py::arg("h"), py::arg("bits"));
  m.def("random_hermitian", [](Index dim, std::uint64_t seed, double norm) {
    Rng rng = substream(seed, 0);
    return random_hermitian(dim, rng, norm).matrix();
  }, py::arg("dim"), py::arg("seed"), py::arg("norm") = 1.0);
  m.def("random_unitary", [](Index dim, std::uint64_t seed) {
    Rng rng = substream(seed, 0);
    return random_unitary(dim, rng).matrix();
  }, py::arg("dim"), py::arg("seed"));

  // -- sign function --------------------------------------------------------
  py::class_<FourierPolynomial>(m, "FourierPolynomial")
      .def(py::init([](int k, int mm, std::vector<Complex> c, double eps, double delta) {
             return FourierPolynomial(k, mm, std::move(c), eps, delta);
           }),
           py::arg("neg_degree"), py::arg("pos_degree"), py::arg("coefficients"),
           py::arg("epsilon") = 0.0, py::arg("delta") = 0.0)
      .def_property_readonly("neg_degree", &FourierPolynomial::neg_degree)
      .def_property_readonly("pos_degree", &FourierPolynomial::pos_degree)
      .def_property_readonly("epsilon", &FourierPolynomial::epsilon)
      .def_property_readonly("delta", &FourierPolynomial::delta)
      .def_property_readonly("coefficients",
                             [](const FourierPolynomial& p) {
                               std::vector<Complex> c;
                               for (int n = -p.neg_degree(); n <= p.pos_degree(); ++n) {
                                 c.push_back(p.coefficient(n));
                               }
                               return c;
                             })
      .def("coefficient", &FourierPolynomial::coefficient, py::arg("n"))
      .def("__call__", [](const FourierPolynomial& p, double x) { return eval_fourier(p, x); },
           py::arg("x"), "Evaluate at e^{ix}.")
      .def("to_json", [](const FourierPolynomial& p) { return polynomial_to_json(p).dump(); })
      .def_static("from_json", [](const std::string& s) {
        return polynomial_from_json(Json::parse(s));
      });

  m.def("sign_degree_bound", [](double e, double d) { return sign_degree_bound(e, d); },
        py::arg("epsilon"), py::arg("delta"));
  m.def("build_sign_fourier", [](double e, double d) { return build_sign_fourier(e, d); },
        py::arg("epsilon"), py::arg("delta"));
  m.def("certify_sign_fourier", [](const FourierPolynomial& s) {
    const auto c = certify_sign_fourier(s);
    py::dict d;
    d["max_modulus"] = c.max_modulus;
    d["max_sign_error"] = c.max_sign_error;
    d["max_odd_defect"] = c.max_odd_defect;
    d["passed"] = c.passed;
    return d;
  }, py::arg("s"));
  m.def("apply_spectral",
        [](const FourierPolynomial& s, const Matrix& h, double shift) {
          return apply_spectral(s, herm(h), shift).matrix();
        },
        py::arg("s"), py::arg("h"), py::arg("shift"));

  // -- GQSP -----------------------------------------------------------------
  py::class_<AngleSequence>(m, "AngleSequence")
      .def_readonly("theta", &AngleSequence::theta)
      .def_readonly("phi", &AngleSequence::phi)
      .def_readonly("lam", &AngleSequence::lambda)
      .def_readonly("k", &AngleSequence::k)
      .def_readonly("m", &AngleSequence::m)
      .def("__len__", &AngleSequence::length);

  m.def("rotation_matrix",
        [](double theta, double phi, double lam) { return rotation_matrix(theta, phi, lam).matrix(); },
        py::arg("theta"), py::arg("phi"), py::arg("lam") = 0.0);
  m.def("max_modulus", &max_modulus, py::arg("p"), "Grid maximum of |P(e^{ix})|.");
  m.def("with_margin", &with_margin, py::arg("p"), py::arg("eta") = 1e-4,
        "P rescaled so its maximum modulus is at most 1 - eta.");
  m.def("complete", [](const FourierPolynomial& p, double eta, const std::string& method) {
    auto pair = complete(p, eta, method_from(method));
    return py::make_tuple(pair.p, pair.q);
  }, py::arg("p"), py::arg("eta") = 1e-4, py::arg("method") = "automatic",
     "Complementary Q with |P|^2 + |Q|^2 = 1 on the unit circle; returns (P, Q).");
  m.def("compute_angles",
        [](const FourierPolynomial& p, const FourierPolynomial& q) {
          return compute_angles(CompletionPair{p, q});
        },
        py::arg("p"), py::arg("q"));
  m.def("assemble", [](const AngleSequence& a, const Matrix& u) {
    const GqspCircuit c = assemble(a, UnitaryOperator(u));
    py::dict d;
    d["block"] = c.block;
    d["full"] = c.full;
    d["controlled_u"] = c.controlled_u;
    d["controlled_u_dagger"] = c.controlled_u_dagger;
    return d;
  }, py::arg("angles"), py::arg("u"));
  m.def("assemble_and_extract",
        [](const AngleSequence& a, const Matrix& u) {
          return assemble_and_extract(a, UnitaryOperator(u));
        },
        py::arg("angles"), py::arg("u"));

  // -- cooling --------------------------------------------------------------
  m.def("query_costs", [](double e, double d) {
    const auto c = query_costs(e, d);
    py::dict out;
    out["per_iter_eiH"] = c.per_iter_eiH;
    out["per_iter_UA"] = c.per_iter_UA;
    out["sign_degree"] = c.sign_degree;
    out["evolution_time"] = c.evolution_time;
    return out;
  }, py::arg("epsilon"), py::arg("delta"));
  m.def("cooling_time", &cooling_time, py::arg("delta"));
  m.def("build_hsign",
        [](const Matrix& h, double e, double eps, double delta, const std::string& mode) {
          return build_hsign(herm(h), e, eps, delta, hsign_mode_from_string(mode)).matrix();
        },
        py::arg("h"), py::arg("energy_estimate"), py::arg("epsilon"), py::arg("delta"),
        py::arg("mode") = "exact_spectral");
  m.def("cooling_step",
        [](const Matrix& h, const Matrix& a, const Vector& psi, double eps, double delta,
           std::uint64_t seed, const std::string& mode) {
          Rng rng = substream(seed, 0);
          return step_dict(cooling_step(herm(h), herm(a), StateVector(psi), eps, delta, rng,
                                        hsign_mode_from_string(mode)));
        },
        py::arg("h"), py::arg("a"), py::arg("psi"), py::arg("epsilon"), py::arg("delta"),
        py::arg("seed") = 0, py::arg("mode") = "exact_spectral");
  m.def("run_cooling",
        [](const Matrix& h, const Matrix& a, const Vector& psi, double eps, int d, int max_steps,
           std::uint64_t seed, const std::string& mode) {
          CoolingConfig cfg;
          cfg.hamiltonian = herm(h);
          cfg.perturbation = herm(a);
          cfg.initial_state = StateVector(psi);
          cfg.epsilon = eps;
          cfg.d = d;
          cfg.stop.max_steps = max_steps > 0 ? max_steps : d;
          cfg.seed = seed;
          cfg.mode = hsign_mode_from_string(mode);
          const Trajectory t = run(cfg);
          py::list steps;
          for (const auto& s : t.steps) steps.append(step_dict(s));
          py::dict out;
          out["initial_energy"] = t.initial_energy;
          out["initial_ground_overlap"] = t.initial_ground_overlap;
          out["steps"] = steps;
          out["termination"] = to_string(t.reason);
          out["error"] = t.error;
          out["success"] = t.success();
          return out;
        },
        py::arg("h"), py::arg("a"), py::arg("psi"), py::arg("epsilon"), py::arg("d"),
        py::arg("max_steps") = 0, py::arg("seed") = 0, py::arg("mode") = "exact_spectral");
  m.def("coherent_qpe_prepare",
        [](const Matrix& h, const Vector& psi, int bits) {
          return coherent_qpe_prepare(eig(herm(h)), StateVector(psi), bits).amplitudes();
        },
        py::arg("h"), py::arg("psi"), py::arg("bits"));
  m.def("coherent_step",
        [](const Matrix& h, const Matrix& a, const Vector& joint, int bits, double eps,
           double delta) {
          return coherent_step(herm(h), herm(a), StateVector(joint), bits, eps, delta)
              .amplitudes();
        },
        py::arg("h"), py::arg("a"), py::arg("joint"), py::arg("bits"), py::arg("epsilon"),
        py::arg("delta"));

  // -- verification ---------------------------------------------------------
  m.def("leakage",
        [](const Matrix& a, const Matrix& p, double delta) { return leakage(herm(a), proj(p), delta); },
        py::arg("a"), py::arg("p"), py::arg("delta"));
  m.def("effective_error",
        [](const Matrix& a, const Matrix& p, double delta) {
          return effective_error(herm(a), proj(p), delta);
        },
        py::arg("a"), py::arg("p"), py::arg("delta"));
  m.def("dyson_term",
        [](const Matrix& a, const Matrix& p, double delta, int k, double t, int intervals) {
          const DysonTerm d = dyson_term(herm(a), proj(p), delta, k, t, QuadratureSpec{intervals});
          py::dict out;
          out["op"] = d.op;
          out["bound"] = d.bound;
          out["quadrature_error"] = d.quadrature_error;
          out["slack"] = d.slack;
          out["intervals"] = d.intervals;
          return out;
        },
        py::arg("a"), py::arg("p"), py::arg("delta"), py::arg("k"), py::arg("t"),
        py::arg("intervals") = 0);
  m.def("transition_matrix", [](const Matrix& h, const Matrix& a, double threshold) {
    const auto tm = transition_matrix(eig(herm(h)), herm(a), threshold);
    return py::make_tuple(tm.first_order, tm.exact);
  }, py::arg("h"), py::arg("a"), py::arg("threshold"),
     "(first-order, exact) transition matrices in H's eigenbasis.");
  m.def("sample_gue", [](Index n, std::uint64_t seed) {
    Rng rng = substream(seed, 0);
    return sample_gue(n, rng).matrix();
  }, py::arg("n"), py::arg("seed"));
  m.def("certify_all", [](std::uint64_t seed, unsigned workers) {
    py::list out;
    for (const auto& s : certify_all(SweepOptions{seed, workers})) out.append(cert_dict(s));
    return out;
  }, py::arg("seed") = 2024, py::arg("workers") = 0);

  // -- experiments ----------------------------------------------------------
  m.def("tfim", [](int sites, double j, double h, bool normalized) {
    return tfim(sites, j, h, normalized).matrix();
  }, py::arg("sites"), py::arg("coupling"), py::arg("field"), py::arg("normalized") = true);
  m.def("run_experiment_json", [](const std::string& config, const std::string& base_dir) {
    RunRecord r;
    {
      py::gil_scoped_release release;
      r = run_experiment(config_from_json(Json::parse(config), base_dir));
    }
    return run_record_to_json(r).dump();
  }, py::arg("config"), py::arg("base_dir") = "",
     "Run an experiment described by a JSON config; returns the JSON run record.");
}
