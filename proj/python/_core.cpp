// Copyright 2026 The hamid Authors
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

#include "hamid/config.hpp"
#include "hamid/designer.hpp"
#include "hamid/report.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>

namespace py = pybind11;
using namespace hamid;

namespace {

using ModelPtr = std::shared_ptr<ProbabilisticModel>;

ModelPtr mutable_model(const std::shared_ptr<const ProbabilisticModel>& model) {
  return std::const_pointer_cast<ProbabilisticModel>(model);
}

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_python(const py::object& obj) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

PhasePoint phase_point(const Vector& q, const Vector& rho) {
  if (q.size() != rho.size()) throw ArgumentError("q and rho differ in length");
  return {q, rho};
}

py::dict chain_dict(const ChainOutput& chain) {
  const Eigen::Index n = static_cast<Eigen::Index>(chain.samples.size());
  const Eigen::Index d = n > 0 ? chain.samples.front().q.size() : 0;
  Matrix q(n, d), rho(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    q.row(i) = chain.samples[i].q.transpose();
    rho.row(i) = chain.samples[i].rho.transpose();
  }
  py::dict out;
  out["q"] = q;
  out["rho"] = rho;
  out["energies"] = chain.energies;
  out["accepted"] = chain.accepted;
  out["proposals"] = chain.proposals;
  out["acceptance_rate"] = chain.acceptance_rate;
  return out;
}

Matrix path_matrix(const std::vector<PhasePoint>& path) {
  const Eigen::Index d = path.front().q.size();
  Matrix m(static_cast<Eigen::Index>(path.size()), 2 * d);
  for (std::size_t i = 0; i < path.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) << path[i].q.transpose(), path[i].rho.transpose();
  }
  return m;
}

HmcParams hmc_params(const RunConfig& c, std::optional<std::uint64_t> seed) {
  HmcParams p = c.hmc;
  p.seed = seed.value_or(c.seed);
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Input design for parametric models via Hamiltonian Monte Carlo";

  auto argument_error = py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<NumericDomainError>(m, "NumericDomainError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, (e.field() + ": " + e.what()).c_str());
    }
  });
  (void)argument_error;

  py::class_<ModelDims>(m, "ModelDims")
      .def_readonly("n_theta", &ModelDims::n_theta)
      .def_readonly("n_x", &ModelDims::n_x)
      .def_readonly("n_u", &ModelDims::n_u)
      .def_readonly("n_y", &ModelDims::n_y)
      .def_readonly("horizon", &ModelDims::horizon)
      .def_property_readonly("input_size", &ModelDims::input_size)
      .def_property_readonly("output_size", &ModelDims::output_size)
      .def_property_readonly("position_size", &ModelDims::position_size);

  py::class_<ProbabilisticModel, ModelPtr>(m, "Model")
      .def_static(
          "from_spec", [](const py::object& spec) { return mutable_model(parse_model(from_python(spec))); },
          py::arg("spec"), "Model from a {\"type\": ..., ...} specification.")
      .def_property_readonly("dims", &ProbabilisticModel::dims)
      .def_property_readonly("type", &ProbabilisticModel::type_name)
      .def("log_joint", &ProbabilisticModel::log_joint, py::arg("theta"), py::arg("x"), py::arg("u"),
           py::arg("y"))
      .def(
          "grad_log_joint",
          [](const ProbabilisticModel& model, const Vector& theta, const Vector& x, const Vector& u,
             const Vector& y) {
            const JointGradient g = model.grad_log_joint(theta, x, u, y);
            return py::make_tuple(g.theta, g.x);
          },
          py::arg("theta"), py::arg("x"), py::arg("u"), py::arg("y"))
      .def(
          "simulate",
          [](const ProbabilisticModel& model, const Vector& theta, const Vector& u, std::uint64_t seed) {
            const Simulation s = model.simulate(theta, u, seed);
            return py::make_tuple(s.y, s.x);
          },
          py::arg("theta"), py::arg("u"), py::arg("seed"))
      .def("deterministic_output", &ProbabilisticModel::deterministic_output, py::arg("theta"),
           py::arg("u"))
      .def("deterministic_latent", &ProbabilisticModel::deterministic_latent, py::arg("theta"),
           py::arg("u"));

  m.def(
      "potential",
      [](const ModelPtr& model, const Vector& u, const Vector& y, const Vector& q) {
        return potential(HamiltonianContext(*model, u, y), q);
      },
      py::arg("model"), py::arg("u"), py::arg("y"), py::arg("q"));
  m.def(
      "grad_potential",
      [](const ModelPtr& model, const Vector& u, const Vector& y, const Vector& q) {
        return grad_potential(HamiltonianContext(*model, u, y), q);
      },
      py::arg("model"), py::arg("u"), py::arg("y"), py::arg("q"));
  m.def(
      "leapfrog",
      [](const ModelPtr& model, const Vector& u, const Vector& y, const Vector& q, const Vector& rho,
         double epsilon, int steps, double mass) {
        const HamiltonianContext ctx(*model, u, y, mass);
        return path_matrix(leapfrog_rollout(ctx, phase_point(q, rho), LeapfrogParams{epsilon, steps}));
      },
      py::arg("model"), py::arg("u"), py::arg("y"), py::arg("q"), py::arg("rho"), py::arg("epsilon"),
      py::arg("steps"), py::arg("mass") = 1.0,
      "Rollout as an (L+1) x 2d array of [q, rho] rows.");
  m.def(
      "run_chain",
      [](const ModelPtr& model, const Vector& u, const Vector& y, double epsilon, int steps,
         int iterations, int warmup, int thin, std::uint64_t seed, double mass,
         std::optional<Vector> initial_q) {
        HmcParams p;
        p.epsilon = epsilon;
        p.steps = steps;
        p.iterations = iterations;
        p.warmup = warmup;
        p.thin = thin;
        p.seed = seed;
        p.mass = mass;
        if (initial_q) p.initial_q = *initial_q;
        return chain_dict(run_chain(HamiltonianContext(*model, u, y, mass), p));
      },
      py::arg("model"), py::arg("u"), py::arg("y"), py::arg("epsilon") = 0.05, py::arg("steps") = 20,
      py::arg("iterations") = 1500, py::arg("warmup") = 500, py::arg("thin") = 5, py::arg("seed") = 0,
      py::arg("mass") = 1.0, py::arg("initial_q") = py::none());
  m.def("effective_sample_size",
        [](const std::vector<double>& series) { return effective_sample_size(series); },
        py::arg("series"));
  m.def(
      "bias_variance",
      [](const Matrix& samples, const Vector& theta_star) {
        const BiasVariance bv = bias_variance(samples, theta_star);
        py::dict out;
        out["mean_squared_error"] = bv.mean_squared_error;
        out["squared_bias"] = bv.squared_bias;
        out["variance_trace"] = bv.variance_trace;
        return out;
      },
      py::arg("samples"), py::arg("theta_star"));

  py::class_<RunConfig, std::shared_ptr<RunConfig>>(m, "Config")
      .def_static(
          "load", [](const std::string& path) { return std::make_shared<RunConfig>(load_config(path)); },
          py::arg("path"))
      .def_static(
          "from_dict",
          [](const py::object& doc, const std::string& base_dir) {
            return std::make_shared<RunConfig>(parse_config(from_python(doc), base_dir));
          },
          py::arg("doc"), py::arg("base_dir") = "")
      .def_readonly("seed", &RunConfig::seed)
      .def_property_readonly(
          "model", [](const RunConfig& c) { return mutable_model(c.model); })
      .def_readonly("theta_star", &RunConfig::theta_star)
      .def_readonly("u_nominal", &RunConfig::u_nominal)
      .def_readonly("warnings", &RunConfig::warnings)
      .def("echo", [](const RunConfig& c) { return to_python(echo(c)); })
      .def(
          "project", [](const RunConfig& c, const Vector& u) { return c.constraints.project(u); },
          py::arg("u"))
      .def(
          "resolve_input",
          [](RunConfig& c, const py::object& spec) { return resolve_input(from_python(spec), c, "input"); },
          py::arg("spec"));

  m.def(
      "design",
      [](const RunConfig& c) {
        const DesignReport r = design_input(design_config(c));
        py::dict out = to_python(to_json(r));
        out["u_star"] = r.u_star;
        out["u_nominal_projected"] = r.u_nominal;
        return out;
      },
      py::arg("config"), "Runs the designer; returns the report with u_star as an array.");
  m.def(
      "evaluate",
      [](const RunConfig& c, const Vector& u) {
        const DesignEvaluation ev = evaluate_design(*c.model, c.theta_star, u, c.evaluation);
        py::dict out = to_python(to_json(ev, c.theta_star));
        out["mean"] = ev.mean;
        out["covariance"] = ev.covariance;
        return out;
      },
      py::arg("config"), py::arg("u"));
  m.def(
      "sample",
      [](const RunConfig& c, const Vector& u, std::optional<Vector> y, std::optional<std::uint64_t> seed) {
        const Vector data = y ? *y : c.model->deterministic_output(c.theta_star, u);
        HmcParams p = hmc_params(c, seed);
        p.initial_q = chain_start(*c.model, c.theta_init, u);
        return chain_dict(run_chain(HamiltonianContext(*c.model, u, data, p.mass), p));
      },
      py::arg("config"), py::arg("u"), py::arg("y") = py::none(), py::arg("seed") = py::none());
}
