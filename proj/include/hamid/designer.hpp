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

#ifndef HAMID_DESIGNER_HPP
#define HAMID_DESIGNER_HPP

#include "hamid/hmc.hpp"
#include "hamid/ocp.hpp"
#include "hamid/oracle.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace hamid {

/// Raised when the sampler's acceptance rate drops below the configured floor;
/// the message says which setting to change.
class SamplerTuningError : public NumericDomainError {
 public:
  using NumericDomainError::NumericDomainError;
};

struct DesignConfig {
  std::shared_ptr<const ProbabilisticModel> model;
  Vector theta_star;
  ConstraintSet constraints;
  Vector u_nominal;
  /// Samples per outer iteration.
  int samples = 40;
  /// Stop once ||u^(k) - u^(k-1)||_1 < delta_u.
  double delta_u = 1e-2;
  int max_outer = 10;
  /// Chain settings; `iterations` and `seed` are derived per outer iteration.
  HmcParams hmc;
  PgdSettings pgd;
  std::uint64_t seed = 0;
  /// Chain start for theta; empty means the prior mean.
  Vector theta_init;
  /// Abort when an outer iteration's acceptance rate falls below this.
  double min_acceptance = 0.1;
  std::vector<std::uint64_t> output_noise_seeds;
  int threads = 1;

  void validate() const;
};

struct OuterIteration {
  int index = 0;
  Vector u_start;
  Vector u_end;
  double cost_before = 0.0;
  double cost_after = 0.0;
  double acceptance_rate = 0.0;
  /// Samples left out of the control problem because their rollout diverged.
  int dropped_samples = 0;
  double delta_l1 = 0.0;
  int pgd_iterations = 0;
  PgdStop pgd_stop = PgdStop::kMaxIterations;
  std::vector<double> cost_trace;
  double wall_seconds = 0.0;
};

struct DesignReport {
  std::vector<OuterIteration> iterations;
  Vector u_nominal;
  Vector u_star;
  bool converged = false;
};

/// Chain start [theta_init; deterministic latent rollout at theta_init].
Vector chain_start(const ProbabilisticModel& model, const Vector& theta_init, const Vector& u);

/// M joint-canonical samples for data (u, y~(u)).
ChainOutput sample_canonical(const DesignConfig& config, const Vector& u, std::uint64_t seed);

/// Alternates sampling at the current input with a local solve of the batch
/// control problem until the input stops moving (first iteration always
/// runs). Deterministic given config.seed.
DesignReport design_input(const DesignConfig& config);

struct DesignEvaluation {
  Vector mean;
  Matrix covariance;
  double cost = 0.0;
  /// Grid oracle used; otherwise long-chain estimates.
  bool exact_grid = false;
  std::optional<GridPosterior> grid;
  /// Monte Carlo standard errors of the mean (chain estimates only).
  Vector mean_standard_error;
  double cost_standard_error = 0.0;
};

struct EvaluationSettings {
  GridSpec grid;  // empty axes: GridSpec::around(theta_star)
  int max_regrids = 8;
  /// Reference chain used when no grid likelihood is available.
  HmcParams reference_chain;
};

struct TrajectorySet {
  std::vector<std::vector<PhasePoint>> paths;
  /// sum_i |q^i(L) - q*|_W^2 over the paths.
  double statistic = 0.0;
};

/// Leapfrog trajectories of the Hamiltonian system for data (u, y~(u)) at
/// theta*, one per start point.
TrajectorySet hamiltonian_trajectories(const ProbabilisticModel& model, const Vector& theta_star,
                                       const Vector& u, const std::vector<PhasePoint>& starts,
                                       const HmcParams& hmc);

/// Posterior summary of p(theta | u, y~(u)) at theta*.
DesignEvaluation evaluate_design(const ProbabilisticModel& model, const Vector& theta_star,
                                 const Vector& u, const EvaluationSettings& settings);

}  // namespace hamid

#endif  // HAMID_DESIGNER_HPP
