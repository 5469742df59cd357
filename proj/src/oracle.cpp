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

#include "hamid/oracle.hpp"

#include "hamid/parallel.hpp"
#include "hamid/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamid {

Vector GridAxis::values() const {
  require(nodes >= 2, "grid: an axis needs at least two nodes");
  require(upper > lower, "grid: axis upper bound must exceed lower bound");
  return Vector::LinSpaced(nodes, lower, upper);
}

GridSpec GridSpec::around(const Vector& theta_star) {
  GridSpec spec;
  if (theta_star.size() == 2) {
    for (int i = 0; i < 2; ++i) spec.axes.push_back({theta_star(i) - 0.5, theta_star(i) + 0.5, 161});
  } else {
    for (Eigen::Index i = 0; i < theta_star.size(); ++i) {
      spec.axes.push_back({theta_star(i) - 1.0, theta_star(i) + 1.0, 401});
    }
  }
  return spec;
}

Vector GridPosterior::node(Eigen::Index index) const {
  Vector theta(dim());
  for (int a = dim() - 1; a >= 0; --a) {
    const auto n = axes[a].size();
    theta(a) = axes[a](index % n);
    index /= n;
  }
  return theta;
}

Vector GridPosterior::weights() const {
  Vector w = Vector::Ones(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    Eigen::Index index = i;
    for (int a = dim() - 1; a >= 0; --a) {
      const auto n = axes[a].size();
      const auto k = index % n;
      index /= n;
      const double h = (axes[a](n - 1) - axes[a](0)) / static_cast<double>(n - 1);
      w(i) *= (k == 0 || k == n - 1) ? 0.5 * h : h;
    }
  }
  return w;
}

Vector GridPosterior::density() const {
  return (log_density.array() - log_normalizer).exp().matrix();
}

ParticleFilterResult particle_filter_loglik(const NonlinearSsmModel& model, double theta,
                                            const Vector& u, const Vector& y, int particles,
                                            std::uint64_t seed) {
  require(particles >= 1, "particle filter: particles must be >= 1");
  const auto& dims = model.dims();
  require_size(u, dims.input_size(), "u");
  require_size(y, dims.output_size(), "y");
  const int T = dims.horizon;
  const double s = model.config().noise_std;
  const double inv_two_var = 1.0 / (2.0 * s * s);
  const double log_s = std::log(s);

  Rng rng = make_rng(seed, {0x7066});

  std::vector<double> x(particles), next(particles), logw(particles), cdf(particles);
  for (auto& xi : x) xi = s * draw_normal(rng);

  ParticleFilterResult res;
  res.min_ess = std::numeric_limits<double>::infinity();
  for (int t = 0; t < T; ++t) {
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < particles; ++i) {
      const double e = y(t) - NonlinearSsmModel::observation_mean(x[i]);
      logw[i] = -e * e * inv_two_var - log_s;
      peak = std::max(peak, logw[i]);
    }
    if (!std::isfinite(peak)) {
      res.log_likelihood = -std::numeric_limits<double>::infinity();
      res.min_ess = 0.0;
      return res;
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < particles; ++i) {
      const double w = std::exp(logw[i] - peak);
      sum += w;
      sum_sq += w * w;
      cdf[i] = sum;
    }
    res.log_likelihood += peak + std::log(sum / particles);
    res.min_ess = std::min(res.min_ess, sum * sum / sum_sq);
    if (t + 1 == T) break;

    // Stratified resampling followed by propagation.
    int j = 0;
    for (int i = 0; i < particles; ++i) {
      const double target = (i + draw_uniform(rng)) / particles * sum;
      while (j < particles - 1 && cdf[j] < target) ++j;
      next[i] = NonlinearSsmModel::transition_mean(x[j], u(t), theta) + s * draw_normal(rng);
    }
    std::swap(x, next);
  }
  return res;
}

namespace {

std::uint64_t filter_seed(const ParticleFilterSettings& settings, std::uint64_t node_stream, int run) {
  return make_rng(settings.seed, {node_stream, static_cast<std::uint64_t>(run)})();
}

/// Log-mean-exp of `runs` filter estimates, reusing an already computed first run.
ParticleFilterResult average_runs(const NonlinearSsmModel& model, double theta, const Vector& u,
                                  const Vector& y, const ParticleFilterSettings& settings,
                                  std::uint64_t node_stream, const ParticleFilterResult& first) {
  std::vector<double> logs(settings.runs);
  ParticleFilterResult out;
  logs[0] = first.log_likelihood;
  out.min_ess = first.min_ess;
  for (int r = 1; r < settings.runs; ++r) {
    const auto one = particle_filter_loglik(model, theta, u, y, settings.particles,
                                            filter_seed(settings, node_stream, r));
    logs[r] = one.log_likelihood;
    out.min_ess = std::min(out.min_ess, one.min_ess);
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(peak)) {
    out.log_likelihood = peak;
    return out;
  }
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - peak);
  out.log_likelihood = peak + std::log(sum / settings.runs);
  return out;
}

}  // namespace

ParticleFilterResult averaged_particle_filter_loglik(const NonlinearSsmModel& model, double theta,
                                                     const Vector& u, const Vector& y,
                                                     const ParticleFilterSettings& settings,
                                                     std::uint64_t node_stream) {
  require(settings.runs >= 1, "particle filter: runs must be >= 1");
  const auto first = particle_filter_loglik(model, theta, u, y, settings.particles,
                                            filter_seed(settings, node_stream, 0));
  return average_runs(model, theta, u, y, settings, node_stream, first);
}

bool has_grid_likelihood(const ProbabilisticModel& model) {
  return model.dims().n_x == 0 || dynamic_cast<const NonlinearSsmModel*>(&model) != nullptr;
}

GridPosterior grid_posterior(const ProbabilisticModel& model, const Vector& u, const Vector& y,
                             const GridSpec& spec) {
  const auto& dims = model.dims();
  require(!spec.axes.empty() && spec.axes.size() <= 2,
          "grid posterior: only one- or two-parameter grids are supported");
  require(static_cast<int>(spec.axes.size()) == dims.n_theta,
          "grid posterior: number of axes must equal n_theta");
  require(has_grid_likelihood(model),
          "grid posterior: model has latent states and no particle-filter likelihood");
  require_size(u, dims.input_size(), "u");
  require_size(y, dims.output_size(), "y");

  GridPosterior gp;
  Eigen::Index total = 1;
  for (const auto& axis : spec.axes) {
    gp.axes.push_back(axis.values());
    total *= axis.nodes;
  }
  gp.log_density.resize(total);
  Vector node_ess = Vector::Constant(total, std::numeric_limits<double>::infinity());

  const auto* nonlinear = dynamic_cast<const NonlinearSsmModel*>(&model);
  const bool exact = dims.n_x == 0;
  const Vector no_latent(0);
  const double neg_inf = -std::numeric_limits<double>::infinity();
  auto finite_or_zero = [&](double v) { return std::isnan(v) ? neg_inf : v; };

  if (exact) {
    parallel_for(static_cast<int>(total), spec.threads, [&](int i) {
      const Vector theta = gp.node(i);
      double loglik = neg_inf;
      try {
        loglik = model.log_joint(theta, no_latent, u, y);
      } catch (const NumericDomainError&) {
        // Zero likelihood at this node.
      }
      gp.log_density(i) = finite_or_zero(loglik + model.log_prior(theta));
    });
  } else {
    const auto& pf = spec.particle_filter;
    require(pf.runs >= 1 && pf.particles >= 1, "grid posterior: invalid particle filter settings");
    // One filter run per node first; the remaining runs are spent only where
    // the pilot estimate is within pilot_log_gap of the best node.
    std::vector<ParticleFilterResult> pilot(static_cast<std::size_t>(total));
    parallel_for(static_cast<int>(total), spec.threads, [&](int i) {
      pilot[i] = particle_filter_loglik(*nonlinear, gp.node(i)(0), u, y, pf.particles,
                                        filter_seed(pf, static_cast<std::uint64_t>(i), 0));
      gp.log_density(i) = finite_or_zero(pilot[i].log_likelihood + model.log_prior(gp.node(i)));
      node_ess(i) = pilot[i].min_ess;
    });
    const double pilot_peak = gp.log_density.maxCoeff();
    parallel_for(static_cast<int>(total), spec.threads, [&](int i) {
      if (!(gp.log_density(i) >= pilot_peak - pf.pilot_log_gap)) return;
      const auto avg = average_runs(*nonlinear, gp.node(i)(0), u, y, pf,
                                    static_cast<std::uint64_t>(i), pilot[i]);
      gp.log_density(i) = finite_or_zero(avg.log_likelihood + model.log_prior(gp.node(i)));
      node_ess(i) = avg.min_ess;
    });
  }

  const double peak = gp.log_density.maxCoeff();
  if (!std::isfinite(peak)) {
    throw NumericDomainError("grid posterior: likelihood vanishes on every grid node");
  }
  const Vector w = gp.weights();
  double mass = 0.0;
  for (Eigen::Index i = 0; i < total; ++i) mass += w(i) * std::exp(gp.log_density(i) - peak);
  gp.log_normalizer = peak + std::log(mass);

  gp.min_filter_ess = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < total; ++i) {
    const double relative = std::exp(gp.log_density(i) - peak);
    if (relative >= 1e-3) gp.min_filter_ess = std::min(gp.min_filter_ess, node_ess(i));
    Eigen::Index index = i;
    bool on_boundary = false;
    for (int a = gp.dim() - 1; a >= 0; --a) {
      const auto n = gp.axes[a].size();
      const auto k = index % n;
      index /= n;
      on_boundary = on_boundary || k == 0 || k == n - 1;
    }
    if (on_boundary && relative > 1e-6) gp.boundary_warning = true;
  }
  if (!exact && gp.min_filter_ess < spec.particle_filter.min_ess) {
    throw NumericDomainError("grid posterior: particle filter degenerated (ESS " +
                             std::to_string(gp.min_filter_ess) + ") in the posterior bulk");
  }
  return gp;
}

GridPosterior adaptive_grid_posterior(const ProbabilisticModel& model, const Vector& u,
                                      const Vector& y, const GridSpec& initial, int max_regrids) {
  GridSpec spec = initial;
  for (int r = 0;; ++r) {
    GridPosterior gp = grid_posterior(model, u, y, spec);
    if (r >= max_regrids) return gp;
    if (gp.boundary_warning) {
      for (auto& axis : spec.axes) {
        const double center = 0.5 * (axis.lower + axis.upper);
        const double half = axis.upper - axis.lower;
        axis.lower = center - half;
        axis.upper = center + half;
      }
      continue;
    }
    const PosteriorMoments mom = moments(gp);
    bool zoomed = false;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      auto& axis = spec.axes[a];
      const double h = axis.spacing();
      const double sd = std::sqrt(std::max(0.0, mom.covariance(a, a)));
      if (sd < 5.0 * h) {
        const double width = std::max(sd, 0.25 * h);
        axis.lower = mom.mean(a) - 10.0 * width;
        axis.upper = mom.mean(a) + 10.0 * width;
        zoomed = true;
      }
    }
    if (!zoomed) return gp;
  }
}

PosteriorMoments moments(const GridPosterior& gp) {
  const Vector p = gp.density().cwiseProduct(gp.weights());
  const int d = gp.dim();
  PosteriorMoments m{Vector::Zero(d), Matrix::Zero(d, d)};
  for (Eigen::Index i = 0; i < gp.size(); ++i) m.mean += p(i) * gp.node(i);
  for (Eigen::Index i = 0; i < gp.size(); ++i) {
    const Vector c = gp.node(i) - m.mean;
    m.covariance += p(i) * c * c.transpose();
  }
  return m;
}

double cost_from_grid(const GridPosterior& gp, const Vector& theta_star) {
  require_size(theta_star, gp.dim(), "theta_star");
  const Vector p = gp.density().cwiseProduct(gp.weights());
  double j = 0.0;
  for (Eigen::Index i = 0; i < gp.size(); ++i) j += p(i) * (gp.node(i) - theta_star).squaredNorm();
  return j;
}

BiasVariance bias_variance(const Matrix& samples, const Vector& theta_star) {
  require(samples.rows() >= 1, "bias_variance: no samples");
  require(samples.cols() == theta_star.size(), "bias_variance: dimension mismatch");
  const double n = static_cast<double>(samples.rows());
  const Vector mean = samples.colwise().sum().transpose() / n;
  BiasVariance bv;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    bv.mean_squared_error += (samples.row(i).transpose() - theta_star).squaredNorm();
    bv.variance_trace += (samples.row(i).transpose() - mean).squaredNorm();
  }
  bv.mean_squared_error /= n;
  bv.variance_trace /= n;
  bv.squared_bias = (mean - theta_star).squaredNorm();
  return bv;
}

}  // namespace hamid
