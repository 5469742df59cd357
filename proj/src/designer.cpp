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

#include "hamid/designer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace hamid {

void DesignConfig::validate() const {
  require(model != nullptr, "design: model is null");
  const auto& dims = model->dims();
  require_size(theta_star, dims.n_theta, "theta_star");
  require_size(u_nominal, dims.input_size(), "u_nominal");
  require_finite(u_nominal, "u_nominal");
  require(samples >= 1, "design: M must be >= 1");
  require(delta_u > 0.0, "design: delta_u must be > 0");
  require(max_outer >= 1, "design: max_outer must be >= 1");
  require(min_acceptance >= 0.0 && min_acceptance <= 1.0, "design: min_acceptance must lie in [0, 1]");
  require(theta_init.size() == 0 || theta_init.size() == dims.n_theta, "design: theta_init length");
  hmc.validate();
  pgd.validate();
}

Vector chain_start(const ProbabilisticModel& model, const Vector& theta_init, const Vector& u) {
  const auto& dims = model.dims();
  const Vector theta = theta_init.size() == 0 ? Vector::Zero(dims.n_theta) : theta_init;
  Vector q(dims.position_size());
  q.head(dims.n_theta) = theta;
  q.tail(dims.latent_size()) = model.deterministic_latent(theta, u);
  return q;
}

ChainOutput sample_canonical(const DesignConfig& config, const Vector& u, std::uint64_t seed) {
  const auto& model = *config.model;
  const HamiltonianContext ctx(model, u, model.deterministic_output(config.theta_star, u),
                               config.hmc.mass);
  HmcParams params = config.hmc;
  params.iterations = params.warmup + config.samples * params.thin;
  params.seed = seed;
  params.initial_q = chain_start(model, config.theta_init, u);
  return run_chain(ctx, params);
}

DesignReport design_input(const DesignConfig& config) {
  config.validate();
  DesignReport report;
  report.u_nominal = config.constraints.project(config.u_nominal);
  Vector u = report.u_nominal;

  for (int k = 0; k < config.max_outer; ++k) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t chain_seed = make_rng(config.seed, {static_cast<std::uint64_t>(k)})();
    ChainOutput chain = sample_canonical(config, u, chain_seed);
    if (chain.acceptance_rate < config.min_acceptance) {
      std::ostringstream msg;
      msg << "outer iteration " << k << ": HMC acceptance rate " << chain.acceptance_rate
          << " is below " << config.min_acceptance << "; reduce hmc.epsilon (currently "
          << config.hmc.epsilon << ") or increase hmc.mass (currently " << config.hmc.mass << ")";
      throw SamplerTuningError(msg.str());
    }

    OcpSpec spec = OcpSpec::make(config.model, config.theta_star, std::move(chain.samples),
                                 config.hmc.leapfrog(), config.hmc.mass, config.constraints);
    spec.output_noise_seeds = config.output_noise_seeds;
    spec.threads = config.threads;
    const int dropped = drop_divergent_points(spec, u);
    if (spec.initial_points.empty()) {
      std::ostringstream msg;
      msg << "outer iteration " << k << ": every sampled trajectory diverges at the current input; "
          << "reduce hmc.epsilon (currently " << config.hmc.epsilon << ")";
      throw SamplerTuningError(msg.str());
    }
    PgdSettings pgd = config.pgd;
    pgd.threads = config.threads;
    PgdResult solved = pgd_solve(spec, u, pgd);

    OuterIteration it;
    it.index = k;
    it.u_start = u;
    it.u_end = solved.u;
    it.cost_before = solved.cost_trace.front();
    it.cost_after = solved.cost_trace.back();
    it.acceptance_rate = chain.acceptance_rate;
    it.dropped_samples = dropped;
    it.delta_l1 = (solved.u - u).lpNorm<1>();
    it.pgd_iterations = solved.iterations;
    it.pgd_stop = solved.stop;
    it.cost_trace = std::move(solved.cost_trace);
    it.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    u = solved.u;
    const bool done = it.delta_l1 < config.delta_u;
    report.iterations.push_back(std::move(it));
    if (done) {
      report.converged = true;
      break;
    }
  }
  report.u_star = u;
  return report;
}

TrajectorySet hamiltonian_trajectories(const ProbabilisticModel& model, const Vector& theta_star,
                                       const Vector& u, const std::vector<PhasePoint>& starts,
                                       const HmcParams& hmc) {
  const HamiltonianContext ctx(model, u, model.deterministic_output(theta_star, u), hmc.mass);
  const int n_theta = model.dims().n_theta;
  TrajectorySet out;
  out.paths.reserve(starts.size());
  for (const auto& p0 : starts) {
    out.paths.push_back(leapfrog_rollout(ctx, p0, hmc.leapfrog()));
    out.statistic += (out.paths.back().back().q.head(n_theta) - theta_star).squaredNorm();
  }
  return out;
}

DesignEvaluation evaluate_design(const ProbabilisticModel& model, const Vector& theta_star,
                                 const Vector& u, const EvaluationSettings& settings) {
  const auto& dims = model.dims();
  require_size(theta_star, dims.n_theta, "theta_star");
  const Vector y = model.deterministic_output(theta_star, u);
  DesignEvaluation ev;

  if (has_grid_likelihood(model) && dims.n_theta <= 2) {
    GridSpec spec = settings.grid;
    if (spec.axes.empty()) {
      const GridSpec defaults = GridSpec::around(theta_star);
      spec.axes = defaults.axes;
    }
    GridPosterior gp = adaptive_grid_posterior(model, u, y, spec, settings.max_regrids);
    const PosteriorMoments m = moments(gp);
    ev.mean = m.mean;
    ev.covariance = m.covariance;
    ev.cost = cost_from_grid(gp, theta_star);
    ev.exact_grid = true;
    ev.mean_standard_error = Vector::Zero(dims.n_theta);
    ev.grid = std::move(gp);
    return ev;
  }

  const HamiltonianContext ctx(model, u, y, settings.reference_chain.mass);
  HmcParams params = settings.reference_chain;
  if (params.initial_q.size() == 0) params.initial_q = chain_start(model, Vector(0), u);
  const ChainOutput chain = run_chain(ctx, params);
  require(chain.samples.size() >= 2, "evaluate: reference chain produced fewer than two samples");
  const Matrix theta = sample_positions(chain).leftCols(dims.n_theta);
  const double n = static_cast<double>(theta.rows());
  ev.mean = theta.colwise().mean().transpose();
  const Matrix centered = theta.rowwise() - ev.mean.transpose();
  ev.covariance = centered.transpose() * centered / n;
  std::vector<double> sq(static_cast<std::size_t>(theta.rows()));
  for (Eigen::Index i = 0; i < theta.rows(); ++i) {
    sq[i] = (theta.row(i).transpose() - theta_star).squaredNorm();
  }
  double mean_sq = 0.0;
  for (double v : sq) mean_sq += v;
  mean_sq /= n;
  ev.cost = mean_sq;
  double var_sq = 0.0;
  for (double v : sq) var_sq += (v - mean_sq) * (v - mean_sq);
  var_sq /= n;
  ev.cost_standard_error = std::sqrt(var_sq / effective_sample_size(sq));
  ev.mean_standard_error.resize(dims.n_theta);
  for (int a = 0; a < dims.n_theta; ++a) {
    std::vector<double> col(theta.col(a).data(), theta.col(a).data() + theta.rows());
    ev.mean_standard_error(a) = std::sqrt(ev.covariance(a, a) / effective_sample_size(col));
  }
  return ev;
}

}  // namespace hamid
