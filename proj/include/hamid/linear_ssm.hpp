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

#ifndef HAMID_LINEAR_SSM_HPP
#define HAMID_LINEAR_SSM_HPP

#include "hamid/model.hpp"

#include <utility>
#include <vector>

namespace hamid {

/// Linear Gaussian state-space model
///
///   x_1 ~ N(x0_mean, x0_cov)
///   y_t = C x_t + D u_t + v_t,        v_t ~ N(0, sigma_v)
///   x_{t+1} = A x_t + B u_t + w_t,    w_t ~ N(0, sigma_w)
///
/// with theta the entries of A listed in free_param_index_set (0-based
/// row, column pairs).
struct LinearSsmConfig {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
  Matrix sigma_w;
  Matrix sigma_v;
  std::vector<std::pair<int, int>> free_param_index_set;
  Vector x0_mean;
  Matrix x0_cov;
  int horizon = 50;

  /// Two-state example: A = [[0.7, 0.3], [theta_1, theta_2]], B = [0; 1],
  /// C = [1 0], D = 0, process std 0.05, measurement std 0.1, x_1 ~ N(0, 0.1^2 I).
  static LinearSsmConfig example();

  int state_size() const { return static_cast<int>(A.rows()); }
  void validate() const;
  /// A with theta substituted into the free entries.
  Matrix system_matrix(const Vector& theta) const;
};

/// theta* of the two-state example.
Vector linear_example_theta_star();

struct KalmanResult {
  double value = 0.0;
  Vector grad;
};

/// Exact marginal log-likelihood log p(y | u, theta) via the prediction-error
/// decomposition (2*pi terms dropped), with its gradient from forward
/// sensitivity recursions of the filter mean and covariance.
KalmanResult kalman_loglik(const LinearSsmConfig& config, const Vector& theta, const Vector& u,
                           const Vector& y);

/// d/du and d/dy of the marginal log-likelihood (reverse pass through the
/// filter mean recursion).
DataGradient kalman_data_gradient(const LinearSsmConfig& config, const Vector& theta,
                                  const Vector& u, const Vector& y);

/// Linear SSM with the states marginalised: q = theta, n_x = 0.
class LinearSsmModel final : public ProbabilisticModel {
 public:
  explicit LinearSsmModel(LinearSsmConfig config, GaussianPrior prior = {});

  const LinearSsmConfig& config() const { return config_; }
  std::string type_name() const override { return "linear_ssm"; }

  double log_joint(const Vector& theta, const Vector& x, const Vector& u,
                   const Vector& y) const override;
  JointGradient grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                               const Vector& y) const override;
  Simulation simulate(const Vector& theta, const Vector& u, std::uint64_t seed) const override;
  Vector deterministic_output(const Vector& theta, const Vector& u) const override;

  bool has_data_gradient() const override { return true; }
  DataGradient grad_log_joint_data(const Vector& theta, const Vector& x, const Vector& u,
                                   const Vector& y) const override;
  Vector deterministic_output_vjp(const Vector& theta, const Vector& u,
                                  const Vector& w) const override;

 private:
  LinearSsmConfig config_;
};

}  // namespace hamid

#endif  // HAMID_LINEAR_SSM_HPP
