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

#ifndef HAMID_MRI_HPP
#define HAMID_MRI_HPP

#include "hamid/model.hpp"

#include <vector>

namespace hamid {

/// Relaxation factor tau = exp(-delta_t / relaxation_time).
double relaxation_factor(double delta_t, double relaxation_time);

struct MriConfig {
  double tau2 = relaxation_factor(0.2, 0.09);
  double sigma_sq = 0.1;
  double delta_t = 0.2;
  int horizon = 29;
  Eigen::Vector2d x_init = Eigen::Vector2d(1.0, 0.0);

  void validate() const;
};

/// tau_1 for a longitudinal relaxation time of 0.68 at the default sampling time.
double mri_example_tau1();

struct MriRollout {
  /// x_0 (= x_init), x_1, ..., x_T.
  std::vector<Eigen::Vector2d> states;
  /// d x_t / d tau_1, same indexing.
  std::vector<Eigen::Vector2d> sensitivities;
};

/// Magnetisation rollout under flip angles u_1..u_T:
///
///   x_t = R(u_t) [tau1 x_{1,t-1} + 1 - tau1; tau2 x_{2,t-1}],
///
/// with R the planar rotation, plus forward sensitivities in tau1.
MriRollout mri_forward(const MriConfig& config, double tau1, const Vector& u);

/// Flip-angle model. theta = tau1, the state is a deterministic function of
/// (tau1, u), and y_t ~ Rice(x_{2,t}, sigma^2) is read after pulse t. The
/// likelihood is exact (n_x = 0).
class MriModel final : public ProbabilisticModel {
 public:
  explicit MriModel(MriConfig config = {}, GaussianPrior prior = {});

  const MriConfig& config() const { return config_; }
  std::string type_name() const override { return "mri"; }

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
  MriConfig config_;
};

}  // namespace hamid

#endif  // HAMID_MRI_HPP
