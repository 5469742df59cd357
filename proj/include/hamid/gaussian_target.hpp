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

#ifndef HAMID_GAUSSIAN_TARGET_HPP
#define HAMID_GAUSSIAN_TARGET_HPP

#include "hamid/model.hpp"

namespace hamid {

/// Input-free model whose posterior is N(mean, cov) under a flat prior.
/// Used to check the sampler against a known target.
class GaussianTargetModel final : public ProbabilisticModel {
 public:
  GaussianTargetModel(Vector mean, Matrix cov);

  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  std::string type_name() const override { return "gaussian_target"; }

  double log_joint(const Vector& theta, const Vector& x, const Vector& u,
                   const Vector& y) const override;
  JointGradient grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                               const Vector& y) const override;
  Simulation simulate(const Vector& theta, const Vector& u, std::uint64_t seed) const override;
  Vector deterministic_output(const Vector& theta, const Vector& u) const override;

 private:
  Vector mean_;
  Matrix cov_;
  Matrix precision_;
};

}  // namespace hamid

#endif  // HAMID_GAUSSIAN_TARGET_HPP
