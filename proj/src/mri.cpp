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

#include "hamid/mri.hpp"

#include "hamid/bessel.hpp"
#include "hamid/random.hpp"

#include <cmath>

namespace hamid {
namespace {

ModelDims mri_dims(const MriConfig& c) {
  c.validate();
  ModelDims d;
  d.n_theta = 1;
  d.n_x = 0;
  d.n_u = 1;
  d.n_y = 1;
  d.horizon = c.horizon;
  return d;
}

/// Reverse pass through the rollout: d/du of sum_t a_nu[t] * x_{2,t}.
Vector input_vjp(const MriConfig& config, double tau1, const Vector& u, const MriRollout& roll,
                 const Vector& a_nu) {
  Vector gu(config.horizon);
  Eigen::Vector2d a = Eigen::Vector2d::Zero();
  for (int t = config.horizon - 1; t >= 0; --t) {
    a(1) += a_nu(t);
    const Eigen::Vector2d& x = roll.states[t];
    const Eigen::Vector2d z(tau1 * x(0) + 1.0 - tau1, config.tau2 * x(1));
    const double c = std::cos(u(t));
    const double sn = std::sin(u(t));
    gu(t) = a(0) * (-sn * z(0) - c * z(1)) + a(1) * (c * z(0) - sn * z(1));
    const Eigen::Vector2d az(c * a(0) + sn * a(1), -sn * a(0) + c * a(1));
    a = Eigen::Vector2d(tau1 * az(0), config.tau2 * az(1));
  }
  return gu;
}

}  // namespace

double relaxation_factor(double delta_t, double relaxation_time) {
  return std::exp(-delta_t / relaxation_time);
}

double mri_example_tau1() { return relaxation_factor(0.2, 0.68); }

void MriConfig::validate() const {
  require(sigma_sq > 0.0 && std::isfinite(sigma_sq), "mri: sigma_sq must be > 0");
  require(tau2 > 0.0 && tau2 < 1.0, "mri: tau2 must lie in (0, 1)");
  require(delta_t > 0.0, "mri: delta_t must be > 0");
  require(horizon >= 1, "mri: horizon must be >= 1");
  require(x_init.allFinite(), "mri: x_init must be finite");
}

MriRollout mri_forward(const MriConfig& config, double tau1, const Vector& u) {
  require_size(u, config.horizon, "u");
  MriRollout out;
  out.states.reserve(config.horizon + 1);
  out.sensitivities.reserve(config.horizon + 1);
  Eigen::Vector2d x = config.x_init;
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  out.states.push_back(x);
  out.sensitivities.push_back(s);
  for (int t = 0; t < config.horizon; ++t) {
    const double c = std::cos(u(t));
    const double sn = std::sin(u(t));
    const Eigen::Vector2d relaxed(tau1 * x(0) + 1.0 - tau1, config.tau2 * x(1));
    const Eigen::Vector2d drelaxed(x(0) - 1.0 + tau1 * s(0), config.tau2 * s(1));
    x = Eigen::Vector2d(c * relaxed(0) - sn * relaxed(1), sn * relaxed(0) + c * relaxed(1));
    s = Eigen::Vector2d(c * drelaxed(0) - sn * drelaxed(1), sn * drelaxed(0) + c * drelaxed(1));
    out.states.push_back(x);
    out.sensitivities.push_back(s);
  }
  return out;
}

MriModel::MriModel(MriConfig config, GaussianPrior prior)
    : ProbabilisticModel(mri_dims(config), prior), config_(config) {}

double MriModel::log_joint(const Vector& theta, const Vector& x, const Vector& u,
                           const Vector& y) const {
  check_arguments(theta, x, u, y);
  const auto roll = mri_forward(config_, theta(0), u);
  double value = 0.0;
  for (int t = 0; t < config_.horizon; ++t) {
    value += rician::log_pdf(y(t), roll.states[t + 1](1), config_.sigma_sq);
  }
  if (!std::isfinite(value)) throw NumericDomainError("mri: non-finite log likelihood");
  return value;
}

JointGradient MriModel::grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                                       const Vector& y) const {
  check_arguments(theta, x, u, y);
  const auto roll = mri_forward(config_, theta(0), u);
  double g = 0.0;
  for (int t = 0; t < config_.horizon; ++t) {
    g += rician::dlog_pdf_dnu(y(t), roll.states[t + 1](1), config_.sigma_sq) *
         roll.sensitivities[t + 1](1);
  }
  if (!std::isfinite(g)) throw NumericDomainError("mri: non-finite gradient");
  return {Vector::Constant(1, g), Vector(0)};
}

DataGradient MriModel::grad_log_joint_data(const Vector& theta, const Vector& x, const Vector& u,
                                           const Vector& y) const {
  check_arguments(theta, x, u, y);
  const auto roll = mri_forward(config_, theta(0), u);
  const int T = config_.horizon;
  Vector a_nu(T);
  DataGradient g{Vector(), Vector(T)};
  for (int t = 0; t < T; ++t) {
    const double nu = roll.states[t + 1](1);
    a_nu(t) = rician::dlog_pdf_dnu(y(t), nu, config_.sigma_sq);
    g.y(t) = rician::dlog_pdf_dy(y(t), nu, config_.sigma_sq);
  }
  g.u = input_vjp(config_, theta(0), u, roll, a_nu);
  if (!g.u.allFinite() || !g.y.allFinite()) throw NumericDomainError("mri: non-finite gradient");
  return g;
}

Vector MriModel::deterministic_output_vjp(const Vector& theta, const Vector& u,
                                          const Vector& w) const {
  check_theta_input(theta, u);
  require_size(w, config_.horizon, "w");
  const auto roll = mri_forward(config_, theta(0), u);
  Vector a_nu(config_.horizon);
  for (int t = 0; t < config_.horizon; ++t) {
    a_nu(t) = w(t) * rician::dmean_dnu(roll.states[t + 1](1), config_.sigma_sq);
  }
  return input_vjp(config_, theta(0), u, roll, a_nu);
}

Simulation MriModel::simulate(const Vector& theta, const Vector& u, std::uint64_t seed) const {
  check_theta_input(theta, u);
  const auto roll = mri_forward(config_, theta(0), u);
  Rng rng = make_rng(seed, {0x6d7269});
  const double sd = std::sqrt(config_.sigma_sq);
  Vector y(config_.horizon);
  for (int t = 0; t < config_.horizon; ++t) {
    const double z1 = roll.states[t + 1](1) + sd * draw_normal(rng);
    const double z2 = sd * draw_normal(rng);
    y(t) = std::hypot(z1, z2);
  }
  return {y, Vector(0)};
}

Vector MriModel::deterministic_output(const Vector& theta, const Vector& u) const {
  check_theta_input(theta, u);
  const auto roll = mri_forward(config_, theta(0), u);
  Vector y(config_.horizon);
  for (int t = 0; t < config_.horizon; ++t) {
    y(t) = rician::mean(roll.states[t + 1](1), config_.sigma_sq);
  }
  if (!y.allFinite()) throw NumericDomainError("mri: non-finite Rician mean");
  return y;
}

}  // namespace hamid
