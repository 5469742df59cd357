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

#include "hamid/gaussian_target.hpp"

#include <limits>

namespace hamid {
namespace {

ModelDims target_dims(const Vector& mean, const Matrix& cov) {
  require(mean.size() >= 1, "gaussian_target: mean must be non-empty");
  require(cov.rows() == mean.size() && cov.cols() == mean.size(),
          "gaussian_target: cov has wrong shape");
  ModelDims d;
  d.n_theta = static_cast<int>(mean.size());
  d.n_x = 0;
  d.n_u = 0;
  d.n_y = 0;
  d.horizon = 1;
  return d;
}

}  // namespace

GaussianTargetModel::GaussianTargetModel(Vector mean, Matrix cov)
    : ProbabilisticModel(target_dims(mean, cov),
                         GaussianPrior{std::numeric_limits<double>::infinity()}),
      mean_(std::move(mean)),
      cov_(std::move(cov)) {
  Eigen::LLT<Matrix> llt(cov_);
  require(llt.info() == Eigen::Success, "gaussian_target: cov must be positive definite");
  precision_ = llt.solve(Matrix::Identity(cov_.rows(), cov_.cols()));
}

double GaussianTargetModel::log_joint(const Vector& theta, const Vector& x, const Vector& u,
                                      const Vector& y) const {
  check_arguments(theta, x, u, y);
  const Vector d = theta - mean_;
  return -0.5 * d.dot(precision_ * d);
}

JointGradient GaussianTargetModel::grad_log_joint(const Vector& theta, const Vector& x,
                                                  const Vector& u, const Vector& y) const {
  check_arguments(theta, x, u, y);
  return {-(precision_ * (theta - mean_)), Vector(0)};
}

Simulation GaussianTargetModel::simulate(const Vector& theta, const Vector& u,
                                         std::uint64_t) const {
  check_theta_input(theta, u);
  return {Vector(0), Vector(0)};
}

Vector GaussianTargetModel::deterministic_output(const Vector& theta, const Vector& u) const {
  check_theta_input(theta, u);
  return Vector(0);
}

}  // namespace hamid
