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

#ifndef HAMID_ORACLE_HPP
#define HAMID_ORACLE_HPP

#include "hamid/model.hpp"
#include "hamid/nonlinear_ssm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hamid {

struct GridAxis {
  double lower = -1.0;
  double upper = 1.0;
  int nodes = 401;

  Vector values() const;
  double spacing() const { return (upper - lower) / (nodes - 1); }
};

struct ParticleFilterSettings {
  int particles = 5000;
  int runs = 20;
  double min_ess = 10.0;
  /// Nodes whose single-run estimate falls more than this many log units
  /// below the best node keep that estimate instead of the average.
  double pilot_log_gap = 40.0;
  std::uint64_t seed = 0;
};

struct GridSpec {
  std::vector<GridAxis> axes;
  ParticleFilterSettings particle_filter;
  int threads = 1;

  /// Default grid for a model: 161 x 161 over theta* +- 0.5 for two
  /// parameters, 401 nodes over theta* +- 1 for one.
  static GridSpec around(const Vector& theta_star);
};

/// Unnormalised log posterior on a tensor-product grid (one or two axes),
/// normalised with the trapezoid rule. Nodes are stored with the first axis
/// varying slowest.
struct GridPosterior {
  std::vector<Vector> axes;
  Vector log_density;
  /// log of the trapezoid-rule mass of exp(log_density).
  double log_normalizer = 0.0;
  /// Some boundary node carries more than 1e-6 of the peak density.
  bool boundary_warning = false;
  /// Smallest particle-filter effective sample size seen at a node carrying
  /// non-negligible mass (infinite for exact likelihoods).
  double min_filter_ess = 0.0;

  int dim() const { return static_cast<int>(axes.size()); }
  Eigen::Index size() const { return log_density.size(); }
  Vector node(Eigen::Index index) const;
  /// Trapezoid weight of each node.
  Vector weights() const;
  /// Normalised density values (integrate to one under weights()).
  Vector density() const;
};

struct PosteriorMoments {
  Vector mean;
  Matrix covariance;
};

struct ParticleFilterResult {
  double log_likelihood = 0.0;
  double min_ess = 0.0;
};

/// Bootstrap particle filter estimate of log p(y | u, theta) for the scalar
/// nonlinear SSM, with stratified resampling at every step. 2*pi terms are
/// dropped.
ParticleFilterResult particle_filter_loglik(const NonlinearSsmModel& model, double theta,
                                            const Vector& u, const Vector& y, int particles,
                                            std::uint64_t seed);

/// log of the average likelihood estimate over `runs` independent filters.
ParticleFilterResult averaged_particle_filter_loglik(const NonlinearSsmModel& model, double theta,
                                                     const Vector& u, const Vector& y,
                                                     const ParticleFilterSettings& settings,
                                                     std::uint64_t node_stream);

/// Log-likelihood used by the grid: exact when the model has no latent
/// states, particle-filter estimated for the nonlinear SSM.
bool has_grid_likelihood(const ProbabilisticModel& model);

GridPosterior grid_posterior(const ProbabilisticModel& model, const Vector& u, const Vector& y,
                             const GridSpec& spec);

/// Re-grids until the posterior is inside the grid and resolved: widens axes
/// while boundary_warning is set and zooms onto mean +- 10 sd while the
/// standard deviation spans fewer than five grid spacings.
GridPosterior adaptive_grid_posterior(const ProbabilisticModel& model, const Vector& u,
                                      const Vector& y, const GridSpec& initial,
                                      int max_regrids = 8);

PosteriorMoments moments(const GridPosterior& gp);

/// Trapezoid-rule E[|theta - theta*|^2].
double cost_from_grid(const GridPosterior& gp, const Vector& theta_star);

/// Empirical version of E|theta - theta*|^2 = |mu - theta*|^2 + tr(Sigma).
struct BiasVariance {
  double mean_squared_error = 0.0;
  double squared_bias = 0.0;
  double variance_trace = 0.0;
};

/// Rows of `samples` are parameter vectors; covariance uses denominator n.
BiasVariance bias_variance(const Matrix& samples, const Vector& theta_star);

}  // namespace hamid

#endif  // HAMID_ORACLE_HPP
