// Copyright 2026 The cvgate Authors
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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvgate/acceptance.hpp"
#include "cvgate/cluster.hpp"
#include "cvgate/conventions.hpp"
#include "cvgate/entanglement.hpp"
#include "cvgate/errors.hpp"
#include "cvgate/gates.hpp"
#include "cvgate/gaussian_state.hpp"
#include "cvgate/protocol.hpp"
#include "cvgate/serialization.hpp"

namespace py = pybind11;
using namespace cvgate;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian simulator for the tuneable T_Z gate on a three-mode CV cluster";

  py::register_exception<InvalidState>(m, "InvalidState", PyExc_ValueError);
  py::register_exception<DegenerateMeasurement>(m, "DegenerateMeasurement", PyExc_ArithmeticError);
  py::register_exception<SingularRescale>(m, "SingularRescale", PyExc_ValueError);
  py::register_exception<UnsupportedConfig>(m, "UnsupportedConfig", PyExc_ValueError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  m.attr("VACUUM_VARIANCE") = kVacuumVariance;
  m.def("variance_to_db", &variance_to_db, py::arg("variance"));
  m.def("db_to_variance", &db_to_variance, py::arg("db"));
  m.def("squeezing_r_from_db", &squeezing_r_from_db, py::arg("db"));
  m.def("symplectic_form", &symplectic_form, py::arg("n_modes"));

  py::class_<GaussianState>(m, "GaussianState")
      .def(py::init<Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("mean"), py::arg("cov"))
      .def_property_readonly("n_modes", &GaussianState::n_modes)
      .def_property_readonly("mean", &GaussianState::mean)
      .def_property_readonly("cov", &GaussianState::cov)
      .def("to_json", [](const GaussianState& s) { return state_to_json(s); })
      .def_static("from_json", [](const std::string& text) { return state_from_json(text); })
      .def("__repr__", [](const GaussianState& s) {
        return "<GaussianState n_modes=" + std::to_string(s.n_modes()) + ">";
      });

  m.def("vacuum", &vacuum, py::arg("n_modes"));
  m.def("coherent", &coherent, py::arg("mean_x"), py::arg("mean_p"));
  m.def("p_squeezed_vacuum", &p_squeezed_vacuum, py::arg("r"));
  m.def("two_mode_squeezed_vacuum", &two_mode_squeezed_vacuum, py::arg("r"));
  m.def("tensor", &tensor, py::arg("a"), py::arg("b"));
  m.def("discard_mode", &discard_mode, py::arg("state"), py::arg("mode"));
  m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("cov"));
  m.def(
      "check_physicality",
      [](const GaussianState& s) {
        const PhysicalityReport r = check_physicality(s);
        return py::make_tuple(r.physical, r.min_symplectic_eigenvalue);
      },
      py::arg("state"), "Returns (physical, min symplectic eigenvalue).");

  m.def(
      "apply_gate",
      [](const GaussianState& s, const std::string& gate, std::vector<std::size_t> modes, double param) {
        auto need = [&](std::size_t n) {
          if (modes.size() != n) throw std::invalid_argument(gate + " acts on " + std::to_string(n) + " mode(s)");
        };
        if (gate == "squeezer") {
          need(1);
          return apply_symplectic(s, gates::squeezer(modes[0], param));
        }
        if (gate == "rotation") {
          need(1);
          return apply_symplectic(s, gates::rotation(modes[0], param));
        }
        if (gate == "quadratic_phase") {
          need(1);
          return apply_symplectic(s, gates::quadratic_phase(modes[0], param));
        }
        if (gate == "beamsplitter") {
          need(2);
          return apply_symplectic(s, gates::beamsplitter(modes[0], modes[1], param));
        }
        if (gate == "controlled_z") {
          need(2);
          return apply_symplectic(s, gates::controlled_z(modes[0], modes[1], param));
        }
        if (gate == "tz") {
          need(2);
          return apply_symplectic(s, gates::tz_gate(modes[0], modes[1], param));
        }
        if (gate == "loss") {
          need(1);
          return gates::loss_channel(s, modes[0], param);
        }
        throw std::invalid_argument("unknown gate '" + gate + "'");
      },
      py::arg("state"), py::arg("gate"), py::arg("modes"), py::arg("param"),
      "Gate names: squeezer, rotation, quadratic_phase, beamsplitter, controlled_z, tz, loss.");

  m.def("make_linear_cluster3", py::overload_cast<double>(&make_linear_cluster3), py::arg("r"));
  m.def(
      "nullifier_covariance",
      [](const GaussianState& s, const Eigen::MatrixXd& adjacency) {
        return nullifier_report(s, GraphSpec(adjacency)).covariance;
      },
      py::arg("state"), py::arg("adjacency"));
  m.def(
      "tune_gain",
      [](const GaussianState& s, const Eigen::MatrixXd& adjacency, std::size_t center, double theta) {
        return tune_gain(s, GraphSpec(adjacency), center, theta);
      },
      py::arg("state"), py::arg("adjacency"), py::arg("center"), py::arg("theta"));

  m.def("lambda_minus", &lambda_minus, py::arg("cov"));
  m.def("log_negativity", &log_negativity, py::arg("lambda_minus"));
  m.def("lambda_minus_closed_form", &lambda_minus_closed_form, py::arg("t"), py::arg("e2r"));

  py::class_<ProtocolResult>(m, "ProtocolResult")
      .def_readonly("output", &ProtocolResult::output)
      .def_property_readonly("lambda_minus", [](const ProtocolResult& r) { return r.entanglement.lambda_minus; })
      .def_property_readonly("log_negativity", [](const ProtocolResult& r) { return r.entanglement.log_negativity; })
      .def_property_readonly("entangled", [](const ProtocolResult& r) { return r.entanglement.entangled; })
      .def_readonly("excess_noise_cov", &ProtocolResult::excess_noise_cov)
      .def_property_readonly("lambda_se",
                             [](const ProtocolResult& r) -> std::optional<double> {
                               if (!r.monte_carlo) return std::nullopt;
                               return r.monte_carlo->lambda_se;
                             })
      .def("means", &ProtocolResult::means)
      .def("variances", &ProtocolResult::variances)
      .def("variances_db", &ProtocolResult::variances_db)
      .def("powers_db", &ProtocolResult::powers_db)
      .def("to_json", [](const ProtocolResult& r) { return result_to_json(r); });

  auto make_config = [](double theta, double squeezing_db, std::pair<double, double> alpha,
                        std::pair<double, double> beta, const std::string& mode, std::size_t trajectories,
                        std::uint64_t seed, double loss, bool ideal_limit) {
    ProtocolConfig c = ProtocolConfig::symmetric(theta, squeezing_r_from_db(squeezing_db));
    c.alpha = {alpha.first, alpha.second};
    c.beta = {beta.first, beta.second};
    if (mode == "mc") c.mode = EvalMode::kMonteCarlo;
    else if (mode != "det") throw std::invalid_argument("mode must be 'det' or 'mc'");
    c.trajectories = trajectories;
    c.seed = seed;
    c.transmission.fill(loss);
    c.ideal_limit = ideal_limit;
    return c;
  };

  m.def(
      "run_protocol",
      [make_config](double theta, double squeezing_db, std::pair<double, double> alpha,
                    std::pair<double, double> beta, const std::string& mode, std::size_t trajectories,
                    std::uint64_t seed, double loss) {
        return run_protocol(make_config(theta, squeezing_db, alpha, beta, mode, trajectories, seed, loss, false));
      },
      py::arg("theta"), py::arg("squeezing_db") = kReferenceSqueezingDb, py::arg("alpha") = std::pair{0.0, 0.0},
      py::arg("beta") = std::pair{0.0, 0.0}, py::arg("mode") = "det", py::arg("trajectories") = 100000,
      py::arg("seed") = 1, py::arg("loss") = 1.0,
      "Run the gate for measurement angle theta (radians). Inputs are (mean_x, mean_p) of coherent states.");
  m.def(
      "analytic_output",
      [make_config](double theta, double squeezing_db, std::pair<double, double> alpha,
                    std::pair<double, double> beta, bool ideal_limit) {
        return analytic_output(make_config(theta, squeezing_db, alpha, beta, "det", 1, 1, 1.0, ideal_limit));
      },
      py::arg("theta"), py::arg("squeezing_db") = kReferenceSqueezingDb, py::arg("alpha") = std::pair{0.0, 0.0},
      py::arg("beta") = std::pair{0.0, 0.0}, py::arg("ideal_limit") = false);
  m.def("io_matrix", &io_matrix, py::arg("t"));
  m.def("coherent_amplitude_from_power_db", &coherent_amplitude_from_power_db, py::arg("db"));

  m.def(
      "run_acceptance",
      [](std::size_t trajectories) {
        AcceptanceOptions opt;
        opt.mc_trajectories = trajectories;
        std::vector<py::tuple> out;
        for (const CriterionResult& r : run_acceptance(opt)) out.push_back(py::make_tuple(r.id, r.name, r.passed, r.detail));
        return out;
      },
      py::arg("trajectories") = 100000, py::call_guard<py::gil_scoped_release>());
}
