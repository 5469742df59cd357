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

#include "hamid/nonlinear_ssm.hpp"

#include "hamid/random.hpp"

#include <cmath>

namespace hamid {
namespace {

double drift_shape_derivative(double x) {
  const double x2 = x * x;
  const double den = 1.0 + x2;
  return (x2 * x2 + 4.0 * x2 - 1.0) / (den * den);
}

double observation_derivative(double x) { return 1.0 + 2.0 * x + 0.3 * x * x; }

ModelDims nonlinear_dims(const NonlinearSsmConfig& c) {
  c.validate();
  ModelDims d;
  d.n_theta = 1;
  d.n_x = 1;
  d.n_u = 1;
  d.n_y = 1;
  d.horizon = c.horizon;
  return d;
}

}  // namespace

void NonlinearSsmConfig::validate() const {
  require(noise_std > 0.0 && std::isfinite(noise_std), "nonlinear_ssm: noise_std must be > 0");
  require(horizon >= 1, "nonlinear_ssm: horizon must be >= 1");
}

NonlinearSsmModel::NonlinearSsmModel(NonlinearSsmConfig config, GaussianPrior prior)
    : ProbabilisticModel(nonlinear_dims(config), prior), config_(config) {}

double NonlinearSsmModel::log_joint(const Vector& theta, const Vector& x, const Vector& u,
                                    const Vector& y) const {
  check_arguments(theta, x, u, y);
  const int T = config_.horizon;
  const double var = config_.noise_std * config_.noise_std;
  const double th = theta(0);

  double sq = x(0) * x(0);
  for (int t = 0; t < T; ++t) {
    const double e = y(t) - observation_mean(x(t));
    sq += e * e;
    if (t + 1 < T) {
      const double r = x(t + 1) - transition_mean(x(t), u(t), th);
      sq += r * r;
    }
  }
  const double value = -0.5 * sq / var - 2.0 * T * std::log(config_.noise_std);
  if (!std::isfinite(value)) throw NumericDomainError("nonlinear_ssm: non-finite log joint");
  return value;
}

JointGradient NonlinearSsmModel::grad_log_joint(const Vector& theta, const Vector& x,
                                                const Vector& u, const Vector& y) const {
  check_arguments(theta, x, u, y);
  const int T = config_.horizon;
  const double var = config_.noise_std * config_.noise_std;
  const double th = theta(0);

  JointGradient g{Vector::Zero(1), Vector::Zero(T)};
  g.x(0) = -x(0) / var;
  for (int t = 0; t < T; ++t) {
    const double e = y(t) - observation_mean(x(t));
    g.x(t) += e * observation_derivative(x(t)) / var;
    if (t + 1 < T) {
      const double r = x(t + 1) - transition_mean(x(t), u(t), th);
      g.theta(0) += r * drift_shape(x(t)) / var;
      g.x(t) += r * th * drift_shape_derivative(x(t)) / var;
      g.x(t + 1) -= r / var;
    }
  }
  if (!g.theta.allFinite() || !g.x.allFinite()) {
    throw NumericDomainError("nonlinear_ssm: non-finite gradient");
  }
  return g;
}

DataGradient NonlinearSsmModel::grad_log_joint_data(const Vector& theta, const Vector& x,
                                                   const Vector& u, const Vector& y) const {
  check_arguments(theta, x, u, y);
  const int T = config_.horizon;
  const double var = config_.noise_std * config_.noise_std;
  DataGradient g{Vector::Zero(T), Vector(T)};
  for (int t = 0; t < T; ++t) {
    g.y(t) = -(y(t) - observation_mean(x(t))) / var;
    if (t + 1 < T) g.u(t) = (x(t + 1) - transition_mean(x(t), u(t), theta(0))) / var;
  }
  return g;
}

Vector NonlinearSsmModel::deterministic_output_vjp(const Vector& theta, const Vector& u,
                                                   const Vector& w) const {
  const Vector x = deterministic_latent(theta, u);
  const int T = config_.horizon;
  require_size(w, T, "w");
  Vector gu = Vector::Zero(T);
  double ax_next = 0.0;
  for (int t = T - 1; t >= 0; --t) {
    if (t + 1 < T) gu(t) = ax_next;
    ax_next = w(t) * observation_derivative(x(t)) + ax_next * theta(0) * drift_shape_derivative(x(t));
  }
  return gu;
}

Simulation NonlinearSsmModel::simulate(const Vector& theta, const Vector& u,
                                       std::uint64_t seed) const {
  check_theta_input(theta, u);
  const int T = config_.horizon;
  const double s = config_.noise_std;
  Rng rng = make_rng(seed, {0x6e6c});

  Simulation sim{Vector(T), Vector(T)};
  double xt = s * draw_normal(rng);
  for (int t = 0; t < T; ++t) {
    sim.x(t) = xt;
    sim.y(t) = observation_mean(xt) + s * draw_normal(rng);
    xt = transition_mean(xt, u(t), theta(0)) + s * draw_normal(rng);
  }
  return sim;
}

Vector NonlinearSsmModel::deterministic_latent(const Vector& theta, const Vector& u) const {
  check_theta_input(theta, u);
  const int T = config_.horizon;
  Vector x(T);
  double xt = 0.0;
  for (int t = 0; t < T; ++t) {
    x(t) = xt;
    xt = transition_mean(xt, u(t), theta(0));
  }
  return x;
}

Vector NonlinearSsmModel::deterministic_output(const Vector& theta, const Vector& u) const {
  const Vector x = deterministic_latent(theta, u);
  return x.unaryExpr([](double v) { return observation_mean(v); });
}

}  // namespace hamid
