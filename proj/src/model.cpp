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

#include "hamid/model.hpp"

#include <cmath>

namespace hamid {

void require(bool condition, const std::string& message) {
  if (!condition) throw ArgumentError(message);
}

void require_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) throw ArgumentError(what + ": non-finite entries");
}

void require_size(const Vector& v, Eigen::Index expected, const std::string& what) {
  if (v.size() != expected) {
    throw ArgumentError(what + ": expected length " + std::to_string(expected) + ", got " +
                        std::to_string(v.size()));
  }
}

void ModelDims::validate() const {
  require(n_theta >= 1, "dims: n_theta must be >= 1");
  require(n_x >= 0 && n_u >= 0 && n_y >= 0, "dims: negative dimension");
  require(horizon >= 1, "dims: horizon must be >= 1");
}

double GaussianPrior::log_density(const Vector& theta) const {
  if (std::isinf(sigma)) return 0.0;
  return -0.5 * theta.squaredNorm() / (sigma * sigma);
}

Vector GaussianPrior::gradient(const Vector& theta) const {
  if (std::isinf(sigma)) return Vector::Zero(theta.size());
  return -theta / (sigma * sigma);
}

ProbabilisticModel::ProbabilisticModel(ModelDims dims, GaussianPrior prior)
    : dims_(dims), prior_(prior) {
  dims_.validate();
  require(prior_.sigma > 0.0, "prior: sigma must be positive");
}

double ProbabilisticModel::log_prior(const Vector& theta) const {
  require_size(theta, dims_.n_theta, "theta");
  require_finite(theta, "theta");
  return prior_.log_density(theta);
}

Vector ProbabilisticModel::grad_log_prior(const Vector& theta) const {
  require_size(theta, dims_.n_theta, "theta");
  require_finite(theta, "theta");
  return prior_.gradient(theta);
}

Vector ProbabilisticModel::deterministic_latent(const Vector&, const Vector&) const {
  return Vector(0);
}

DataGradient ProbabilisticModel::grad_log_joint_data(const Vector&, const Vector&, const Vector&,
                                                    const Vector&) const {
  throw ArgumentError(type_name() + ": data gradients are not available");
}

Vector ProbabilisticModel::deterministic_output_vjp(const Vector&, const Vector&,
                                                    const Vector&) const {
  throw ArgumentError(type_name() + ": output derivatives are not available");
}

void ProbabilisticModel::check_arguments(const Vector& theta, const Vector& x, const Vector& u,
                                         const Vector& y) const {
  require_size(theta, dims_.n_theta, "theta");
  require_size(x, dims_.latent_size(), "x");
  require_size(u, dims_.input_size(), "u");
  require_size(y, dims_.output_size(), "y");
}

void ProbabilisticModel::check_theta_input(const Vector& theta, const Vector& u) const {
  require_size(theta, dims_.n_theta, "theta");
  require_size(u, dims_.input_size(), "u");
}

}  // namespace hamid
