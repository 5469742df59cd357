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

#ifndef HAMID_NONLINEAR_SSM_HPP
#define HAMID_NONLINEAR_SSM_HPP

#include "hamid/model.hpp"

namespace hamid {

struct NonlinearSsmConfig {
  double noise_std = 0.1;
  int horizon = 30;

  void validate() const;
};

/// Scalar nonlinear state-space model
///
///   x_1 ~ N(0, s^2)
///   x_{t+1} = theta (x_t^3 - x_t) / (1 + x_t^2) + u_t + w_t
///   y_t = x_t + x_t^2 + x_t^3 / 10 + v_t
///
/// with w_t, v_t ~ N(0, s^2). The Hamiltonian position is augmented with the
/// latent states: q = [theta; x_1; ...; x_T]. The log joint keeps the
/// -2T log(s) normalisation and drops 2*pi terms.
class NonlinearSsmModel final : public ProbabilisticModel {
 public:
  explicit NonlinearSsmModel(NonlinearSsmConfig config = {}, GaussianPrior prior = {});

  const NonlinearSsmConfig& config() const { return config_; }
  std::string type_name() const override { return "nonlinear_ssm"; }

  double log_joint(const Vector& theta, const Vector& x, const Vector& u,
                   const Vector& y) const override;
  JointGradient grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                               const Vector& y) const override;
  Simulation simulate(const Vector& theta, const Vector& u, std::uint64_t seed) const override;
  Vector deterministic_output(const Vector& theta, const Vector& u) const override;
  Vector deterministic_latent(const Vector& theta, const Vector& u) const override;

  bool has_data_gradient() const override { return true; }
  DataGradient grad_log_joint_data(const Vector& theta, const Vector& x, const Vector& u,
                                   const Vector& y) const override;
  Vector deterministic_output_vjp(const Vector& theta, const Vector& u,
                                  const Vector& w) const override;

  // Building blocks, shared with the particle filter.
  static double drift_shape(double x) { return (x * x * x - x) / (1.0 + x * x); }
  static double transition_mean(double x, double u, double theta) {
    return theta * drift_shape(x) + u;
  }
  static double observation_mean(double x) { return x + x * x + x * x * x / 10.0; }

 private:
  NonlinearSsmConfig config_;
};

}  // namespace hamid

#endif  // HAMID_NONLINEAR_SSM_HPP
