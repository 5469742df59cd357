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

#include "hamid/hamiltonian.hpp"

#include <cmath>

namespace hamid {

HamiltonianContext::HamiltonianContext(const ProbabilisticModel& model, Vector u, Vector y,
                                       double mass)
    : model_(&model), u_(std::move(u)), y_(std::move(y)), mass_(mass) {
  require(mass_ > 0.0 && std::isfinite(mass_), "hamiltonian: mass must be positive");
  require_size(u_, model.dims().input_size(), "u");
  require_size(y_, model.dims().output_size(), "y");
}

void LeapfrogParams::validate() const {
  require(epsilon > 0.0 && std::isfinite(epsilon), "leapfrog: epsilon must be positive");
  require(steps >= 0, "leapfrog: steps must be non-negative");
}

double potential(const HamiltonianContext& ctx, const Vector& q) {
  const auto& dims = ctx.model().dims();
  require_size(q, dims.position_size(), "q");
  const Vector theta = q.head(dims.n_theta);
  const Vector x = q.tail(dims.latent_size());
  return -(ctx.model().log_joint(theta, x, ctx.u(), ctx.y()) + ctx.model().log_prior(theta));
}

Vector grad_potential(const HamiltonianContext& ctx, const Vector& q) {
  const auto& dims = ctx.model().dims();
  require_size(q, dims.position_size(), "q");
  const Vector theta = q.head(dims.n_theta);
  const Vector x = q.tail(dims.latent_size());
  const JointGradient g = ctx.model().grad_log_joint(theta, x, ctx.u(), ctx.y());
  Vector out(dims.position_size());
  out.head(dims.n_theta) = -(g.theta + ctx.model().grad_log_prior(theta));
  out.tail(dims.latent_size()) = -g.x;
  return out;
}

double kinetic(const HamiltonianContext& ctx, const Vector& rho) {
  return 0.5 * rho.squaredNorm() / ctx.mass();
}

double energy(const HamiltonianContext& ctx, const PhasePoint& p) {
  require(p.q.size() == p.rho.size(), "phase point: q and rho differ in length");
  return potential(ctx, p.q) + kinetic(ctx, p.rho);
}

namespace {

// Advances p by one step given the gradient at p.q; leaves the gradient at the
// new position in grad.
void step_in_place(const HamiltonianContext& ctx, PhasePoint& p, Vector& grad, double epsilon) {
  p.rho -= (epsilon / 2.0) * grad;
  p.q += (epsilon / ctx.mass()) * p.rho;
  grad = grad_potential(ctx, p.q);
  p.rho -= (epsilon / 2.0) * grad;
}

void check_start(const HamiltonianContext& ctx, const PhasePoint& p) {
  require_size(p.q, ctx.dim(), "q");
  require_size(p.rho, ctx.dim(), "rho");
}

}  // namespace

PhasePoint leapfrog_step(const HamiltonianContext& ctx, const PhasePoint& p, double epsilon) {
  require(epsilon > 0.0, "leapfrog: epsilon must be positive");
  check_start(ctx, p);
  PhasePoint next = p;
  Vector grad = grad_potential(ctx, p.q);
  step_in_place(ctx, next, grad, epsilon);
  return next;
}

std::vector<PhasePoint> leapfrog_rollout(const HamiltonianContext& ctx, const PhasePoint& p0,
                                         const LeapfrogParams& params) {
  params.validate();
  check_start(ctx, p0);
  std::vector<PhasePoint> traj;
  traj.reserve(static_cast<std::size_t>(params.steps) + 1);
  traj.push_back(p0);
  if (params.steps == 0) return traj;
  PhasePoint p = p0;
  Vector grad = grad_potential(ctx, p.q);
  for (int k = 0; k < params.steps; ++k) {
    step_in_place(ctx, p, grad, params.epsilon);
    traj.push_back(p);
  }
  return traj;
}

PhasePoint leapfrog_endpoint(const HamiltonianContext& ctx, const PhasePoint& p0,
                             const LeapfrogParams& params) {
  params.validate();
  check_start(ctx, p0);
  PhasePoint p = p0;
  if (params.steps == 0) return p;
  Vector grad = grad_potential(ctx, p.q);
  for (int k = 0; k < params.steps; ++k) step_in_place(ctx, p, grad, params.epsilon);
  return p;
}

}  // namespace hamid
