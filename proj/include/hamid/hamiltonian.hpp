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

#ifndef HAMID_HAMILTONIAN_HPP
#define HAMID_HAMILTONIAN_HPP

#include "hamid/model.hpp"

#include <vector>

namespace hamid {

/// Hamiltonian system attached to a model and a data set (u, y):
///
///   U(q) = -[log p(y, x | u, theta) + log p(theta)],   q = [theta; x]
///   K(rho) = rho' rho / (2 m)
///
/// at unit temperature. The context borrows the model; it must outlive the
/// context.
class HamiltonianContext {
 public:
  HamiltonianContext(const ProbabilisticModel& model, Vector u, Vector y, double mass = 1.0);

  const ProbabilisticModel& model() const { return *model_; }
  const Vector& u() const { return u_; }
  const Vector& y() const { return y_; }
  double mass() const { return mass_; }
  int dim() const { return model_->dims().position_size(); }

 private:
  const ProbabilisticModel* model_;
  Vector u_;
  Vector y_;
  double mass_;
};

struct LeapfrogParams {
  double epsilon = 0.05;
  int steps = 20;

  void validate() const;
};

double potential(const HamiltonianContext& ctx, const Vector& q);
Vector grad_potential(const HamiltonianContext& ctx, const Vector& q);
double kinetic(const HamiltonianContext& ctx, const Vector& rho);
double energy(const HamiltonianContext& ctx, const PhasePoint& p);

/// One leapfrog step: half momentum step, full position step with velocity
/// rho/m, half momentum step.
PhasePoint leapfrog_step(const HamiltonianContext& ctx, const PhasePoint& p, double epsilon);

/// All L+1 points of an L-step leapfrog trajectory, starting with p0. The
/// result equals repeated leapfrog_step calls bit for bit; the gradient at
/// each interior point is evaluated once.
std::vector<PhasePoint> leapfrog_rollout(const HamiltonianContext& ctx, const PhasePoint& p0,
                                         const LeapfrogParams& params);

/// Last point of leapfrog_rollout without storing the trajectory.
PhasePoint leapfrog_endpoint(const HamiltonianContext& ctx, const PhasePoint& p0,
                             const LeapfrogParams& params);

}  // namespace hamid

#endif  // HAMID_HAMILTONIAN_HPP
