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

#ifndef HAMID_TESTS_DOUBLES_HPP
#define HAMID_TESTS_DOUBLES_HPP

#include "hamid/model.hpp"
#include "hamid/random.hpp"

#include <cmath>
#include <limits>

namespace hamid::testing {

inline GaussianPrior flat_prior() { return GaussianPrior{std::numeric_limits<double>::infinity()}; }

/// U(q) = 0: leapfrog moves q in straight lines. The output echoes the input
/// so that the control problem has something to differentiate.
class FreeParticleModel final : public ProbabilisticModel {
 public:
  FreeParticleModel(int n_theta, int horizon)
      : ProbabilisticModel(ModelDims{n_theta, 0, 1, 1, horizon}, flat_prior()) {}
  std::string type_name() const override { return "free_particle"; }
  double log_joint(const Vector& theta, const Vector& x, const Vector& u,
                   const Vector& y) const override {
    check_arguments(theta, x, u, y);
    return 0.0;
  }
  JointGradient grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                               const Vector& y) const override {
    check_arguments(theta, x, u, y);
    return {Vector::Zero(theta.size()), Vector(0)};
  }
  Simulation simulate(const Vector& theta, const Vector& u, std::uint64_t) const override {
    check_theta_input(theta, u);
    return {u, Vector(0)};
  }
  Vector deterministic_output(const Vector& theta, const Vector& u) const override {
    check_theta_input(theta, u);
    return u;
  }
  bool has_data_gradient() const override { return true; }
  DataGradient grad_log_joint_data(const Vector&, const Vector&, const Vector& u,
                                   const Vector& y) const override {
    return {Vector::Zero(u.size()), Vector::Zero(y.size())};
  }
  Vector deterministic_output_vjp(const Vector&, const Vector&, const Vector& w) const override {
    return w;
  }
};

/// y_t = theta' u_t + v_t with v_t ~ N(0, s^2) and u_t of length n_theta.
/// With a Gaussian prior the posterior is Gaussian in closed form.
class LinearRegressionModel final : public ProbabilisticModel {
 public:
  LinearRegressionModel(int n_theta, int horizon, double noise_std, GaussianPrior prior)
      : ProbabilisticModel(ModelDims{n_theta, 0, n_theta, 1, horizon}, prior), s_(noise_std) {}
  std::string type_name() const override { return "linear_regression"; }

  Matrix design(const Vector& u) const {
    const auto& d = dims();
    return Eigen::Map<const Matrix>(u.data(), d.n_u, d.horizon).transpose();
  }
  double log_joint(const Vector& theta, const Vector& x, const Vector& u,
                   const Vector& y) const override {
    check_arguments(theta, x, u, y);
    const Vector r = y - design(u) * theta;
    return -0.5 * r.squaredNorm() / (s_ * s_) - dims().horizon * std::log(s_);
  }
  JointGradient grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                               const Vector& y) const override {
    check_arguments(theta, x, u, y);
    const Matrix X = design(u);
    return {X.transpose() * (y - X * theta) / (s_ * s_), Vector(0)};
  }
  Simulation simulate(const Vector& theta, const Vector& u, std::uint64_t seed) const override {
    check_theta_input(theta, u);
    Rng rng = make_rng(seed);
    return {design(u) * theta + s_ * standard_normal(dims().horizon, rng), Vector(0)};
  }
  Vector deterministic_output(const Vector& theta, const Vector& u) const override {
    check_theta_input(theta, u);
    return design(u) * theta;
  }
  /// Exact posterior N(mean, cov) of theta given (u, y).
  void posterior(const Vector& u, const Vector& y, Vector& mean, Matrix& cov) const {
    const Matrix X = design(u);
    Matrix precision = X.transpose() * X / (s_ * s_);
    if (std::isfinite(prior().sigma)) {
      precision.diagonal().array() += 1.0 / (prior().sigma * prior().sigma);
    }
    cov = precision.inverse();
    mean = cov * X.transpose() * y / (s_ * s_);
  }

 private:
  double s_;
};

/// Likelihood independent of theta: the posterior is the prior.
class FlatLikelihoodModel final : public ProbabilisticModel {
 public:
  FlatLikelihoodModel(int n_theta, GaussianPrior prior)
      : ProbabilisticModel(ModelDims{n_theta, 0, 1, 1, 1}, prior) {}
  std::string type_name() const override { return "flat_likelihood"; }
  double log_joint(const Vector& theta, const Vector& x, const Vector& u,
                   const Vector& y) const override {
    check_arguments(theta, x, u, y);
    return 0.0;
  }
  JointGradient grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                               const Vector& y) const override {
    check_arguments(theta, x, u, y);
    return {Vector::Zero(theta.size()), Vector(0)};
  }
  Simulation simulate(const Vector& theta, const Vector& u, std::uint64_t) const override {
    check_theta_input(theta, u);
    return {Vector::Zero(1), Vector(0)};
  }
  Vector deterministic_output(const Vector& theta, const Vector& u) const override {
    check_theta_input(theta, u);
    return Vector::Zero(1);
  }
};

/// log joint of a wrapped model plus a constant.
class ShiftedModel final : public ProbabilisticModel {
 public:
  ShiftedModel(const ProbabilisticModel& base, double shift)
      : ProbabilisticModel(base.dims(), base.prior()), base_(base), shift_(shift) {}
  std::string type_name() const override { return "shifted"; }
  double log_joint(const Vector& theta, const Vector& x, const Vector& u,
                   const Vector& y) const override {
    return base_.log_joint(theta, x, u, y) + shift_;
  }
  JointGradient grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                               const Vector& y) const override {
    return base_.grad_log_joint(theta, x, u, y);
  }
  Simulation simulate(const Vector& theta, const Vector& u, std::uint64_t seed) const override {
    return base_.simulate(theta, u, seed);
  }
  Vector deterministic_output(const Vector& theta, const Vector& u) const override {
    return base_.deterministic_output(theta, u);
  }
  Vector deterministic_latent(const Vector& theta, const Vector& u) const override {
    return base_.deterministic_latent(theta, u);
  }

 private:
  const ProbabilisticModel& base_;
  double shift_;
};

}  // namespace hamid::testing

#endif  // HAMID_TESTS_DOUBLES_HPP
