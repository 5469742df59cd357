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

#ifndef HAMID_OCP_HPP
#define HAMID_OCP_HPP

#include "hamid/hamiltonian.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hamid {

// ---------------------------------------------------------------------------
// Input constraint sets

/// Per-coordinate amplitude bounds. Length-1 bound vectors broadcast.
struct BoxConstraint {
  Vector lower;
  Vector upper;
};

/// Total power bound: sum_t u_t' u_t <= bound.
struct PowerBallConstraint {
  double bound = 1.0;
};

struct IntersectionConstraint {
  BoxConstraint box;
  PowerBallConstraint ball;
};

class ConstraintSet {
 public:
  using Variant = std::variant<BoxConstraint, PowerBallConstraint, IntersectionConstraint>;

  ConstraintSet();  // unconstrained box
  explicit ConstraintSet(Variant v);

  static ConstraintSet box(double lower, double upper);
  static ConstraintSet power(double bound);
  static ConstraintSet intersection(double lower, double upper, double bound);

  const Variant& variant() const { return v_; }
  std::string kind() const;

  /// Euclidean projection. Feasible inputs are returned unchanged.
  Vector project(const Vector& u) const;
  bool contains(const Vector& u) const;

 private:
  Variant v_;
};

/// Free-function form of ConstraintSet::project.
inline Vector project(const ConstraintSet& constraints, const Vector& u) {
  return constraints.project(u);
}

/// Dykstra's alternating projections onto box and ball.
Vector dykstra_projection(const IntersectionConstraint& c, const Vector& u, int max_sweeps = 100,
                          double tol = 1e-10);

// ---------------------------------------------------------------------------
// The batch optimal control problem

/// min_u (1/M) sum_i |q^i(L) - q*|_W^2 where each q^i(L) comes from L leapfrog
/// steps of the Hamiltonian system for data (u, y~(u)), started at a fixed
/// sampled phase point.
struct OcpSpec {
  std::shared_ptr<const ProbabilisticModel> model;
  Vector theta_star;
  std::vector<PhasePoint> initial_points;
  /// q* = [theta*; 0].
  Vector target;
  /// Diagonal of W: ones on the theta block, zeros on the latent block.
  Vector weight;
  LeapfrogParams leapfrog;
  double mass = 1.0;
  ConstraintSet constraints;
  /// Empty: single output y~(u) with all noise at its mean. Otherwise the cost
  /// is averaged over the outputs simulate(theta*, u, seed) for these seeds.
  std::vector<std::uint64_t> output_noise_seeds;
  int threads = 1;

  /// Fills target and weight from the model dimensions and theta*.
  static OcpSpec make(std::shared_ptr<const ProbabilisticModel> model, Vector theta_star,
                      std::vector<PhasePoint> initial_points, LeapfrogParams leapfrog,
                      double mass, ConstraintSet constraints);
  void validate() const;
};

enum class GradientMode { kFiniteDifference, kAdjoint };

struct PgdSettings {
  int max_iters = 100;
  double initial_step = 1.0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  GradientMode gradient_mode = GradientMode::kFiniteDifference;
  /// Central-difference step is fd_step * (1 + |u_t|).
  double fd_step = 1e-5;
  int threads = 1;

  void validate() const;
};

std::string to_string(GradientMode mode);
GradientMode gradient_mode_from_string(const std::string& s);

/// Output used inside the rollout: y~(u) at theta*.
Vector ocp_output(const OcpSpec& spec, const Vector& u, std::size_t realization = 0);

double ocp_cost(const OcpSpec& spec, const Vector& u);

/// Gradient of ocp_cost in u.
///
/// finite_difference: central differences of ocp_cost, each evaluation
/// recomputing y~(u).
///
/// adjoint: reverse accumulation through every leapfrog rollout and through
/// y~(u). The second-derivative products it needs are central differences of
/// the model's analytic gradients along the adjoint direction, so the model
/// must provide data gradients; only the deterministic output is supported.
Vector ocp_gradient(const OcpSpec& spec, const Vector& u, const PgdSettings& settings);

/// Removes the initial points whose rollout at u leaves the model's numerical
/// domain; returns how many were removed.
int drop_divergent_points(OcpSpec& spec, const Vector& u);

enum class PgdStop { kMaxIterations, kStepUnderflow, kCostStalled, kStationary };
std::string to_string(PgdStop stop);

struct PgdResult {
  Vector u;
  /// Cost at the projected start, then after every accepted step.
  std::vector<double> cost_trace;
  int iterations = 0;
  PgdStop stop = PgdStop::kMaxIterations;
};

/// Projected gradient descent with Armijo backtracking on the projected
/// point: accept u+ = P(u - a g) once J(u+) <= J(u) + c g'(u+ - u). The step
/// grows by 1/beta after each accepted iteration. Trial points whose cost
/// evaluation fails count as infinitely bad.
PgdResult projected_gradient_descent(const std::function<double(const Vector&)>& cost,
                                     const std::function<Vector(const Vector&)>& gradient,
                                     const ConstraintSet& constraints, const Vector& u_init,
                                     const PgdSettings& settings);

PgdResult pgd_solve(const OcpSpec& spec, const Vector& u_init, const PgdSettings& settings);

}  // namespace hamid

#endif  // HAMID_OCP_HPP
