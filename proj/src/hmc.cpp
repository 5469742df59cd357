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

#include "hamid/hmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamid {

int HmcParams::sample_count() const {
  if (iterations <= warmup) return 0;
  return (iterations - warmup) / thin;
}

void HmcParams::validate() const {
  require(mass > 0.0 && std::isfinite(mass), "hmc: mass must be positive");
  require(epsilon > 0.0 && std::isfinite(epsilon), "hmc: epsilon must be positive");
  require(steps >= 1, "hmc: steps must be >= 1");
  require(thin >= 1, "hmc: thin must be >= 1");
  require(warmup >= 0, "hmc: warmup must be >= 0");
  require(iterations >= 0, "hmc: iterations must be >= 0");
}

Vector draw_momentum(int dim, double mass, Rng& rng) {
  require(dim >= 1, "draw_momentum: dim must be >= 1");
  return std::sqrt(mass) * standard_normal(dim, rng);
}

TransitionResult hmc_transition(const HamiltonianContext& ctx, const Vector& current_q,
                                const HmcParams& params, Rng& rng) {
  require_finite(current_q, "hmc: current position");
  TransitionResult r;
  r.start.q = current_q;
  r.start.rho = draw_momentum(ctx.dim(), ctx.mass(), rng);
  r.start_energy = energy(ctx, r.start);
  const double log_uniform = std::log(draw_uniform(rng));

  r.proposal_energy = std::numeric_limits<double>::infinity();
  try {
    r.next = leapfrog_endpoint(ctx, r.start, params.leapfrog());
    if (r.next.q.allFinite() && r.next.rho.allFinite()) {
      r.proposal_energy = energy(ctx, r.next);
    }
  } catch (const NumericDomainError&) {
    // Treated as an infinite-energy proposal.
  }

  r.accepted = std::isfinite(r.proposal_energy) &&
               log_uniform < r.start_energy - r.proposal_energy;
  if (!r.accepted) r.next = r.start;
  return r;
}

ChainOutput run_chain(const HamiltonianContext& ctx, const HmcParams& params) {
  params.validate();
  Vector q = params.initial_q.size() == 0 ? Vector::Zero(ctx.dim()) : params.initial_q;
  require_size(q, ctx.dim(), "hmc: initial_q");

  Rng rng = make_rng(params.seed, {0x686d63});
  ChainOutput out;
  out.samples.reserve(static_cast<std::size_t>(params.sample_count()));
  for (int i = 0; i < params.iterations; ++i) {
    TransitionResult r = hmc_transition(ctx, q, params, rng);
    ++out.proposals;
    if (r.accepted) ++out.accepted;
    if (i >= params.warmup && (i - params.warmup + 1) % params.thin == 0) {
      out.energies.push_back(r.start_energy);
      out.samples.push_back(std::move(r.start));
    }
    q = std::move(r.next.q);
  }
  out.acceptance_rate =
      out.proposals == 0 ? 0.0 : static_cast<double>(out.accepted) / out.proposals;
  return out;
}

double pilot_acceptance(const HamiltonianContext& ctx, const HmcParams& params, int iterations) {
  HmcParams pilot = params;
  pilot.iterations = iterations;
  pilot.warmup = iterations;
  return run_chain(ctx, pilot).acceptance_rate;
}

Matrix sample_positions(const ChainOutput& chain) {
  if (chain.samples.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(chain.samples.size()), chain.samples.front().q.size());
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = chain.samples[i].q.transpose();
  }
  return m;
}

double effective_sample_size(std::span<const double> series) {
  const auto n = static_cast<std::ptrdiff_t>(series.size());
  if (n < 4) return static_cast<double>(n);
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  auto autocov = [&](std::ptrdiff_t lag) {
    double s = 0.0;
    for (std::ptrdiff_t i = 0; i + lag < n; ++i) {
      s += (series[i] - mean) * (series[i + lag] - mean);
    }
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (c0 <= 0.0) return static_cast<double>(n);

  // Sum of pairs Gamma_k = rho_{2k} + rho_{2k+1}, truncated at the first
  // non-positive pair and forced monotone.
  double tau = -1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::ptrdiff_t k = 0; 2 * k + 1 < n; ++k) {
    double pair = (autocov(2 * k) + autocov(2 * k + 1)) / c0;
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  tau = std::max(tau, 1.0 / static_cast<double>(n));
  return std::min(static_cast<double>(n), static_cast<double>(n) / tau);
}

}  // namespace hamid
