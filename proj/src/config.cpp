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

#include "hamid/csv.hpp"
#include "hamid/gaussian_target.hpp"
#include "hamid/linear_ssm.hpp"
#include "hamid/mri.hpp"
#include "hamid/nonlinear_ssm.hpp"
#include "hamid/random.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace hamid {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& message)
    : ArgumentError(field + ": " + message), field_(std::move(field)) {}

std::string to_string(TrajectorySampling s) {
  return s == TrajectorySampling::kShared ? "shared" : "per_input";
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

long long as_integer(const json& j, const std::string& field) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) {
      return static_cast<long long>(v);
    }
  }
  throw ConfigError(field, "expected an integer");
}

std::uint64_t as_seed(const json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const long long v = as_integer(j, field);
  if (v < 0) throw ConfigError(field, "must be non-negative");
  return static_cast<std::uint64_t>(v);
}

Vector as_vector(const json& j, const std::string& field) {
  if (j.is_number()) return Vector::Constant(1, as_number(j, field));
  if (!j.is_array()) throw ConfigError(field, "expected a number or an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = as_number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix as_matrix(const json& j, const std::string& field) {
  if (j.is_number()) return Matrix::Constant(1, 1, as_number(j, field));
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].empty()) {
      throw ConfigError(field, "matrices are row-major nested arrays");
    }
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) throw ConfigError(field, "rows have different lengths");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_number(j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

// Field access on one JSON object with a record of the keys consumed, so that
// unknown (usually misspelled) keys can be reported.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "config" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return join(path_, key); }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(field(key), "required field is missing");
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? as_number(j_.at(key), field(key)) : fallback;
  }
  double number(const std::string& key) { return as_number(at(key), field(key)); }

  double positive(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v > 0.0)) throw ConfigError(field(key), "must be > 0");
    return v;
  }

  int integer(const std::string& key, int fallback, int min_value) {
    const long long v = has(key) ? as_integer(j_.at(key), field(key)) : fallback;
    if (v < min_value) throw ConfigError(field(key), "must be >= " + std::to_string(min_value));
    if (v > std::numeric_limits<int>::max()) throw ConfigError(field(key), "is too large");
    return static_cast<int>(v);
  }

  Vector vector(const std::string& key, const Vector& fallback) {
    return has(key) ? as_vector(j_.at(key), field(key)) : fallback;
  }
  Matrix matrix(const std::string& key, const Matrix& fallback) {
    return has(key) ? as_matrix(j_.at(key), field(key)) : fallback;
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(field(item.key()), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

GaussianPrior parse_prior(Section& s, json& echo) {
  GaussianPrior prior;
  if (s.has("prior_sigma")) {
    const json& v = s.at("prior_sigma");
    if (v.is_null()) {
      prior.sigma = std::numeric_limits<double>::infinity();
    } else {
      prior.sigma = as_number(v, s.field("prior_sigma"));
      if (!(prior.sigma > 0.0)) throw ConfigError(s.field("prior_sigma"), "must be > 0 or null");
    }
  }
  echo["prior_sigma"] = std::isfinite(prior.sigma) ? json(prior.sigma) : json(nullptr);
  return prior;
}

template <class Fn>
auto wrap_model_error(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const ArgumentError& e) {
    throw ConfigError(field, e.what());
  }
}

std::vector<std::pair<int, int>> parse_index_set(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of [row, column] pairs");
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) throw ConfigError(f, "expected [row, column]");
    out.emplace_back(static_cast<int>(as_integer(j[i][0], f)),
                     static_cast<int>(as_integer(j[i][1], f)));
  }
  return out;
}

Vector sign_of(const Vector& u) {
  return u.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

ConstraintSet parse_constraints(const json& j, const std::string& path) {
  Section s(j, path);
  const std::string type = s.string("type", "");
  ConstraintSet out;
  if (type == "none") {
    out = ConstraintSet();
  } else if (type == "box" || type == "intersection") {
    BoxConstraint box{as_vector(s.at("lower"), s.field("lower")),
                      as_vector(s.at("upper"), s.field("upper"))};
    if (type == "box") {
      out = wrap_model_error(path, [&] { return ConstraintSet(box); });
    } else {
      s.at("bound");
      PowerBallConstraint ball{s.positive("bound", 1.0)};
      out = wrap_model_error(path, [&] { return ConstraintSet(IntersectionConstraint{box, ball}); });
    }
  } else if (type == "power") {
    s.at("bound");
    out = ConstraintSet(PowerBallConstraint{s.positive("bound", 1.0)});
  } else if (type.empty()) {
    s.at("type");
  } else {
    throw ConfigError(s.field("type"), "expected one of none, box, power, intersection");
  }
  s.finish();
  return out;
}

HmcParams parse_hmc(const json& j, const std::string& path, HmcParams p, Vector* theta_init,
                    int n_theta) {
  Section s(j, path);
  p.mass = s.positive("mass", p.mass);
  p.epsilon = s.positive("epsilon", p.epsilon);
  p.steps = s.integer("steps", p.steps, 1);
  p.warmup = s.integer("warmup", p.warmup, 0);
  p.thin = s.integer("thin", p.thin, 1);
  p.iterations = s.integer("iterations", p.iterations, 0);
  if (theta_init != nullptr && s.has("theta_init")) {
    const json& t = s.at("theta_init");
    if (!t.is_null()) {
      *theta_init = as_vector(t, s.field("theta_init"));
      if (theta_init->size() != n_theta) {
        throw ConfigError(s.field("theta_init"), "must have " + std::to_string(n_theta) + " entries");
      }
    }
  }
  s.finish();
  return p;
}

PgdSettings parse_pgd(const json& j, PgdSettings p) {
  Section s(j, "pgd");
  p.max_iters = s.integer("max_iters", p.max_iters, 1);
  p.initial_step = s.positive("initial_step", p.initial_step);
  p.backtrack = s.number("backtrack", p.backtrack);
  if (!(p.backtrack > 0.0 && p.backtrack < 1.0)) {
    throw ConfigError(s.field("backtrack"), "must lie in (0, 1)");
  }
  p.armijo = s.number("armijo", p.armijo);
  if (!(p.armijo > 0.0 && p.armijo < 1.0)) throw ConfigError(s.field("armijo"), "must lie in (0, 1)");
  const std::string mode = s.string("gradient_mode", to_string(p.gradient_mode));
  try {
    p.gradient_mode = gradient_mode_from_string(mode);
  } catch (const ArgumentError&) {
    throw ConfigError(s.field("gradient_mode"), "expected finite_difference or adjoint");
  }
  p.fd_step = s.positive("fd_step", p.fd_step);
  s.finish();
  return p;
}

Vector read_csv_signal(const std::filesystem::path& path, const std::string& field) {
  try {
    return csv::read_signal(path);
  } catch (const ArgumentError& e) {
    throw ConfigError(field, e.what());
  }
}

Vector resolve_output(const json& spec, const RunConfig& config, const Vector& u,
                      const std::string& field, json& echo) {
  const auto& model = *config.model;
  const int n = model.dims().output_size();
  if (spec.is_string()) {
    if (spec.get<std::string>() != "deterministic") {
      throw ConfigError(field, "expected \"deterministic\", a simulation seed or a signal");
    }
    echo = "deterministic";
    return model.deterministic_output(config.theta_star, u);
  }
  Vector y;
  if (spec.is_object() && spec.contains("simulate")) {
    Section s(spec, field);
    const std::uint64_t seed = as_seed(s.at("simulate"), s.field("simulate"));
    s.finish();
    echo = json{{"simulate", seed}};
    return model.simulate(config.theta_star, u, seed).y;
  }
  if (spec.is_array()) {
    y = as_vector(spec, field);
  } else if (spec.is_object()) {
    Section s(spec, field);
    if (s.has("values")) {
      y = as_vector(s.at("values"), s.field("values"));
    } else if (s.has("csv")) {
      y = read_csv_signal(config.base_dir / s.string("csv", ""), s.field("csv"));
    } else {
      throw ConfigError(field, "expected values, csv or simulate");
    }
    s.finish();
  } else {
    throw ConfigError(field, "expected \"deterministic\", a simulation seed or a signal");
  }
  if (y.size() != n) {
    throw ConfigError(field, "output signal must have " + std::to_string(n) + " entries, got " +
                                 std::to_string(y.size()));
  }
  echo = to_json(y);
  return y;
}

std::vector<NamedSignal> parse_inputs(const json* j, RunConfig& config, const std::string& field) {
  std::vector<NamedSignal> out;
  if (j == nullptr) {
    if (config.u_nominal) out.push_back({"nominal", *config.u_nominal});
    return out;
  }
  if (!j->is_object()) throw ConfigError(field, "expected an object mapping labels to inputs");
  for (const auto& item : j->items()) {
    out.push_back({item.key(), resolve_input(item.value(), config, join(field, item.key()))});
  }
  return out;
}

json inputs_echo(const std::vector<NamedSignal>& inputs) {
  json out = json::object();
  for (const auto& s : inputs) out[s.label] = to_json(s.values);
  return out;
}

json hmc_echo(const HmcParams& p) {
  return json{{"mass", p.mass},   {"epsilon", p.epsilon}, {"steps", p.steps},
              {"warmup", p.warmup}, {"thin", p.thin},     {"iterations", p.iterations}};
}

}  // namespace

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const ConstraintSet& c) {
  auto bound_json = [](const Vector& b) {
    json out = json::array();
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      out.push_back(std::isfinite(b(i)) ? json(b(i)) : json(nullptr));
    }
    return b.size() == 1 ? out[0] : out;
  };
  return std::visit(
      [&](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BoxConstraint>) {
          if (v.lower.size() == 1 && v.upper.size() == 1 && std::isinf(v.lower(0)) &&
              std::isinf(v.upper(0))) {
            return json{{"type", "none"}};
          }
          return json{{"type", "box"}, {"lower", bound_json(v.lower)}, {"upper", bound_json(v.upper)}};
        } else if constexpr (std::is_same_v<T, PowerBallConstraint>) {
          return json{{"type", "power"}, {"bound", v.bound}};
        } else {
          return json{{"type", "intersection"},
                      {"lower", bound_json(v.box.lower)},
                      {"upper", bound_json(v.box.upper)},
                      {"bound", v.ball.bound}};
        }
      },
      c.variant());
}

std::shared_ptr<const ProbabilisticModel> parse_model(const json& spec, json* echo_out) {
  Section s(spec, "model");
  const std::string type = s.string("type", "");
  json echo{{"type", type}};
  std::shared_ptr<const ProbabilisticModel> model;
  if (type == "linear_ssm") {
    LinearSsmConfig c = LinearSsmConfig::example();
    c.A = s.matrix("A", c.A);
    c.B = s.matrix("B", c.B);
    c.C = s.matrix("C", c.C);
    c.D = s.matrix("D", c.D);
    c.sigma_w = s.matrix("Sigma_w", c.sigma_w);
    c.sigma_v = s.matrix("Sigma_v", c.sigma_v);
    if (s.has("free_param_index_set")) {
      c.free_param_index_set =
          parse_index_set(s.at("free_param_index_set"), s.field("free_param_index_set"));
    }
    c.x0_mean = s.vector("x0_mean", c.x0_mean);
    c.x0_cov = s.matrix("x0_cov", c.x0_cov);
    c.horizon = s.integer("horizon", c.horizon, 1);
    const GaussianPrior prior = parse_prior(s, echo);
    model = wrap_model_error("model", [&] { return std::make_shared<LinearSsmModel>(c, prior); });
    json index = json::array();
    for (const auto& [r, col] : c.free_param_index_set) index.push_back({r, col});
    echo.update(json{{"A", to_json(c.A)},
                     {"B", to_json(c.B)},
                     {"C", to_json(c.C)},
                     {"D", to_json(c.D)},
                     {"Sigma_w", to_json(c.sigma_w)},
                     {"Sigma_v", to_json(c.sigma_v)},
                     {"free_param_index_set", index},
                     {"x0_mean", to_json(c.x0_mean)},
                     {"x0_cov", to_json(c.x0_cov)},
                     {"horizon", c.horizon}});
  } else if (type == "nonlinear_ssm") {
    NonlinearSsmConfig c;
    c.noise_std = s.positive("noise_std", c.noise_std);
    c.horizon = s.integer("horizon", c.horizon, 1);
    const GaussianPrior prior = parse_prior(s, echo);
    model = wrap_model_error("model", [&] { return std::make_shared<NonlinearSsmModel>(c, prior); });
    echo.update(json{{"noise_std", c.noise_std}, {"horizon", c.horizon}});
  } else if (type == "mri") {
    MriConfig c;
    c.tau2 = s.number("tau2", c.tau2);
    c.sigma_sq = s.positive("sigma_sq", c.sigma_sq);
    c.delta_t = s.positive("delta_t", c.delta_t);
    c.horizon = s.integer("horizon", c.horizon, 1);
    if (s.has("x_init")) {
      const Vector x = as_vector(s.at("x_init"), s.field("x_init"));
      if (x.size() != 2) throw ConfigError(s.field("x_init"), "must have 2 entries");
      c.x_init = x;
    }
    const GaussianPrior prior = parse_prior(s, echo);
    model = wrap_model_error("model", [&] { return std::make_shared<MriModel>(c, prior); });
    echo.update(json{{"tau2", c.tau2},
                     {"sigma_sq", c.sigma_sq},
                     {"delta_t", c.delta_t},
                     {"horizon", c.horizon},
                     {"x_init", to_json(Vector(c.x_init))}});
  } else if (type == "gaussian_target") {
    const Vector mean = as_vector(s.at("mean"), s.field("mean"));
    const Matrix cov = as_matrix(s.at("cov"), s.field("cov"));
    model = wrap_model_error("model", [&] { return std::make_shared<GaussianTargetModel>(mean, cov); });
    echo.update(json{{"mean", to_json(mean)}, {"cov", to_json(cov)}});
  } else if (type.empty()) {
    s.at("type");
  } else {
    throw ConfigError(s.field("type"),
                      "expected one of linear_ssm, nonlinear_ssm, mri, gaussian_target");
  }
  s.finish();
  if (echo_out != nullptr) *echo_out = std::move(echo);
  return model;
}

Vector resolve_input(const json& spec, RunConfig& config, const std::string& field) {
  const int n = config.model->dims().input_size();
  Vector u;
  if (spec.is_string()) {
    const std::string label = spec.get<std::string>();
    if (label != "nominal" && label != "sign") {
      throw ConfigError(field, "unknown input label '" + label + "' (expected nominal or sign)");
    }
    if (!config.u_nominal) throw ConfigError("u_nominal", "required by " + field);
    u = label == "nominal" ? *config.u_nominal : sign_of(*config.u_nominal);
  } else if (spec.is_array() || spec.is_number()) {
    u = as_vector(spec, field);
  } else if (spec.is_object()) {
    Section s(spec, field);
    if (s.has("values")) {
      u = as_vector(s.at("values"), s.field("values"));
    } else if (s.has("csv")) {
      u = read_csv_signal(config.base_dir / s.string("csv", ""), s.field("csv"));
    } else if (s.has("constant")) {
      u = Vector::Constant(n, s.number("constant"));
    } else if (s.has("distribution")) {
      if (s.string("distribution", "") != "normal") {
        throw ConfigError(s.field("distribution"), "only \"normal\" is supported");
      }
      const double mean = s.number("mean", 0.0);
      const double sd = s.number("std");
      if (sd < 0.0) throw ConfigError(s.field("std"), "must be >= 0");
      auto rng = make_rng(as_seed(s.at("seed"), s.field("seed")));
      u = (mean + sd * standard_normal(n, rng).array()).matrix();
    } else {
      throw ConfigError(field, "expected one of values, csv, constant, distribution");
    }
    s.finish();
  } else {
    throw ConfigError(field, "expected an input signal");
  }
  if (u.size() != n) {
    throw ConfigError(field, "input signal must have " + std::to_string(n) + " entries, got " +
                                 std::to_string(u.size()));
  }
  const Vector projected = config.constraints.project(u);
  if (!(projected.array() == u.array()).all()) {
    config.warnings.push_back(field + ": input was outside the constraint set and has been projected");
  }
  return projected;
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  Section s(doc, "");
  RunConfig c;
  c.base_dir = base_dir;
  if (s.has("description") && !doc.at("description").is_string()) {
    throw ConfigError("description", "expected a string");
  }
  if (s.has("seed")) c.seed = as_seed(doc.at("seed"), "seed");
  c.threads = s.integer("threads", c.threads, 1);
  c.model = parse_model(s.at("model"), &c.model_echo);
  const auto& dims = c.model->dims();

  if (s.has("theta_star")) {
    c.theta_star = as_vector(doc.at("theta_star"), "theta_star");
  } else if (const auto* g = dynamic_cast<const GaussianTargetModel*>(c.model.get())) {
    c.theta_star = g->mean();
  } else {
    s.at("theta_star");
  }
  if (c.theta_star.size() != dims.n_theta) {
    throw ConfigError("theta_star", "must have " + std::to_string(dims.n_theta) + " entries");
  }

  if (s.has("constraints")) c.constraints = parse_constraints(doc.at("constraints"), "constraints");

  if (s.has("u_nominal")) {
    c.u_nominal = resolve_input(doc.at("u_nominal"), c, "u_nominal");
  } else if (dims.input_size() == 0) {
    c.u_nominal = Vector(0);
  }

  c.theta_init = Vector(0);
  if (s.has("hmc")) c.hmc = parse_hmc(doc.at("hmc"), "hmc", c.hmc, &c.theta_init, dims.n_theta);
  c.hmc.seed = c.seed;
  wrap_model_error("hmc", [&] { c.hmc.validate(); return 0; });

  if (s.has("pgd")) c.pgd = parse_pgd(doc.at("pgd"), c.pgd);
  c.pgd.threads = c.threads;

  if (s.has("design")) {
    Section d(doc.at("design"), "design");
    DesignSection ds;
    ds.samples = static_cast<int>(as_integer(d.at("M"), d.field("M")));
    if (ds.samples < 1) throw ConfigError(d.field("M"), "must be >= 1");
    const json& du = d.at("delta_u");
    if (du.is_string() && (du.get<std::string>() == "inf" || du.get<std::string>() == "infinity")) {
      ds.delta_u = std::numeric_limits<double>::infinity();
    } else {
      ds.delta_u = as_number(du, d.field("delta_u"));
      if (!(ds.delta_u > 0.0)) throw ConfigError(d.field("delta_u"), "must be > 0");
    }
    ds.max_outer = d.integer("max_outer", ds.max_outer, 1);
    ds.min_acceptance = d.number("min_acceptance", ds.min_acceptance);
    if (ds.min_acceptance < 0.0 || ds.min_acceptance > 1.0) {
      throw ConfigError(d.field("min_acceptance"), "must lie in [0, 1]");
    }
    d.finish();
    c.design = ds;
  }

  // evaluate
  {
    static const json empty = json::object();
    Section e(s.has("evaluate") ? doc.at("evaluate") : empty, "evaluate");
    c.evaluate_inputs = parse_inputs(e.has("inputs") ? &e.at("inputs") : nullptr, c,
                                     "evaluate.inputs");
    if (dims.n_theta <= 2) c.evaluation.grid.axes = GridSpec::around(c.theta_star).axes;
    if (e.has("grid")) {
      Section g(e.at("grid"), "evaluate.grid");
      if (g.has("axes")) {
        const json& axes = g.at("axes");
        if (!axes.is_array() || axes.empty() || axes.size() > 2 ||
            axes.size() != static_cast<std::size_t>(dims.n_theta)) {
          throw ConfigError(g.field("axes"), "expected one axis per parameter (at most two)");
        }
        c.evaluation.grid.axes.clear();
        for (std::size_t i = 0; i < axes.size(); ++i) {
          Section a(axes[i], g.field("axes") + "[" + std::to_string(i) + "]");
          GridAxis axis;
          axis.lower = a.number("lower");
          axis.upper = a.number("upper");
          axis.nodes = a.integer("nodes", axis.nodes, 2);
          if (!(axis.upper > axis.lower)) throw ConfigError(a.field("upper"), "must exceed lower");
          a.finish();
          c.evaluation.grid.axes.push_back(axis);
        }
      }
      auto& pf = c.evaluation.grid.particle_filter;
      pf.particles = g.integer("particles", pf.particles, 1);
      pf.runs = g.integer("runs", pf.runs, 1);
      pf.min_ess = g.number("min_ess", pf.min_ess);
      pf.pilot_log_gap = g.positive("pilot_log_gap", pf.pilot_log_gap);
      g.finish();
    }
    c.evaluation.grid.particle_filter.seed = c.seed;
    c.evaluation.grid.threads = c.threads;
    c.evaluation.max_regrids = e.integer("max_regrids", c.evaluation.max_regrids, 0);
    c.evaluation.reference_chain = c.hmc;
    c.evaluation.reference_chain.iterations = 10000;
    c.evaluation.reference_chain.thin = 1;
    if (e.has("reference_chain")) {
      c.evaluation.reference_chain = parse_hmc(e.at("reference_chain"), "evaluate.reference_chain",
                                               c.evaluation.reference_chain, nullptr, dims.n_theta);
    }
    c.evaluation.reference_chain.seed = c.seed;
    e.finish();
  }

  // sample
  {
    static const json empty = json::object();
    Section sm(s.has("sample") ? doc.at("sample") : empty, "sample");
    if (sm.has("u")) {
      c.sample.u = resolve_input(sm.at("u"), c, "sample.u");
    } else if (c.u_nominal) {
      c.sample.u = *c.u_nominal;
    }
    if (sm.has("y")) {
      if (c.sample.u.size() != dims.input_size()) throw ConfigError("sample.u", "required field is missing");
      c.sample.y = resolve_output(sm.at("y"), c, c.sample.u, "sample.y", c.sample.y_echo);
      if (c.sample.y_echo == "deterministic") c.sample.y.reset();
    }
    sm.finish();
  }

  // trajectories
  {
    static const json empty = json::object();
    Section t(s.has("trajectories") ? doc.at("trajectories") : empty, "trajectories");
    c.trajectories.inputs = parse_inputs(t.has("inputs") ? &t.at("inputs") : nullptr, c,
                                         "trajectories.inputs");
    c.trajectories.count = t.integer("count", c.trajectories.count, 1);
    const std::string sampling = t.string("sampling", "shared");
    if (sampling == "shared") {
      c.trajectories.sampling = TrajectorySampling::kShared;
    } else if (sampling == "per_input") {
      c.trajectories.sampling = TrajectorySampling::kPerInput;
    } else {
      throw ConfigError(t.field("sampling"), "expected shared or per_input");
    }
    t.finish();
  }

  s.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path());
}

DesignConfig design_config(const RunConfig& config) {
  if (!config.design) throw ConfigError("design", "required section is missing");
  if (!config.u_nominal) throw ConfigError("u_nominal", "required field is missing");
  DesignConfig d;
  d.model = config.model;
  d.theta_star = config.theta_star;
  d.constraints = config.constraints;
  d.u_nominal = *config.u_nominal;
  d.samples = config.design->samples;
  d.delta_u = config.design->delta_u;
  d.max_outer = config.design->max_outer;
  d.min_acceptance = config.design->min_acceptance;
  d.hmc = config.hmc;
  d.pgd = config.pgd;
  d.seed = config.seed;
  d.theta_init = config.theta_init;
  d.threads = config.threads;
  return d;
}

json echo(const RunConfig& c) {
  json out;
  out["seed"] = c.seed;
  out["threads"] = c.threads;
  out["model"] = c.model_echo;
  out["theta_star"] = to_json(c.theta_star);
  out["constraints"] = to_json(c.constraints);
  if (c.u_nominal) out["u_nominal"] = to_json(*c.u_nominal);
  json hmc = hmc_echo(c.hmc);
  hmc["theta_init"] = c.theta_init.size() ? to_json(c.theta_init) : json(nullptr);
  out["hmc"] = hmc;
  out["pgd"] = json{{"max_iters", c.pgd.max_iters},
                    {"initial_step", c.pgd.initial_step},
                    {"backtrack", c.pgd.backtrack},
                    {"armijo", c.pgd.armijo},
                    {"gradient_mode", to_string(c.pgd.gradient_mode)},
                    {"fd_step", c.pgd.fd_step}};
  if (c.design) {
    out["design"] = json{{"M", c.design->samples},
                         {"delta_u", std::isfinite(c.design->delta_u) ? json(c.design->delta_u)
                                                                       : json("inf")},
                         {"max_outer", c.design->max_outer},
                         {"min_acceptance", c.design->min_acceptance}};
  }
  json axes = json::array();
  for (const auto& a : c.evaluation.grid.axes) {
    axes.push_back(json{{"lower", a.lower}, {"upper", a.upper}, {"nodes", a.nodes}});
  }
  const auto& pf = c.evaluation.grid.particle_filter;
  json grid{{"particles", pf.particles},
            {"runs", pf.runs},
            {"min_ess", pf.min_ess},
            {"pilot_log_gap", pf.pilot_log_gap}};
  if (!axes.empty()) grid["axes"] = axes;
  out["evaluate"] = json{{"inputs", inputs_echo(c.evaluate_inputs)},
                         {"grid", grid},
                         {"max_regrids", c.evaluation.max_regrids},
                         {"reference_chain", hmc_echo(c.evaluation.reference_chain)}};
  json sample{{"y", c.sample.y ? (c.sample.y_echo.is_object() ? c.sample.y_echo
                                                               : to_json(*c.sample.y))
                               : json("deterministic")}};
  if (c.sample.u.size() == c.model->dims().input_size()) sample["u"] = to_json(c.sample.u);
  out["sample"] = sample;
  out["trajectories"] = json{{"inputs", inputs_echo(c.trajectories.inputs)},
                             {"count", c.trajectories.count},
                             {"sampling", to_string(c.trajectories.sampling)}};
  return out;
}

}  // namespace hamid
