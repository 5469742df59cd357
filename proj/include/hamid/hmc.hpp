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

#ifndef HAMID_HMC_HPP
#define HAMID_HMC_HPP

#include "hamid/hamiltonian.hpp"
#include "hamid/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hamid {

struct HmcParams {
  double mass = 1.0;
  double epsilon = 0.05;
  int steps = 20;
  /// Total number of transitions, warmup included.
  int iterations = 1500;
  int warmup = 500;
  int thin = 5;
  /// Chain start; empty means the origin.
  Vector initial_q;
  std::uint64_t seed = 0;

  LeapfrogParams leapfrog() const { return {epsilon, steps}; }
  /// Number of stored samples: floor((iterations - warmup) / thin).
  int sample_count() const;
  void validate() const;
};

struct ChainOutput {
  /// Post-warmup, thinned phase points (q, rho) taken right after the
  /// momentum refresh, i.e. draws from the joint canonical distribution.
  std::vector<PhasePoint> samples;
  /// Energy H(q, rho) of each stored sample.
  std::vector<double> energies;
  int proposals = 0;
  int accepted = 0;
  double acceptance_rate = 0.0;
};

struct TransitionResult {
  PhasePoint start;  // current position with refreshed momentum
  PhasePoint next;
  double start_energy = 0.0;
  double proposal_energy = 0.0;
  bool accepted = false;
};

/// I.i.d. N(0, m) momentum coordinates.
Vector draw_momentum(int dim, double mass, Rng& rng);

/// Momentum refresh, L leapfrog steps, Metropolis test on the energy change.
/// A proposal with non-finite energy, or one whose rollout leaves the model's
/// numerical domain, is rejected.
TransitionResult hmc_transition(const HamiltonianContext& ctx, const Vector& current_q,
                                const HmcParams& params, Rng& rng);

/// Runs params.iterations transitions from params.initial_q. Deterministic
/// given params.seed.
ChainOutput run_chain(const HamiltonianContext& ctx, const HmcParams& params);

/// Acceptance rate of a short chain with the given settings (for manual
/// step-size tuning).
double pilot_acceptance(const HamiltonianContext& ctx, const HmcParams& params, int iterations);

/// Positions of the samples as rows.
Matrix sample_positions(const ChainOutput& chain);

/// Effective sample size of a scalar series using Geyer's initial monotone
/// sequence estimator of the integrated autocorrelation time.
double effective_sample_size(std::span<const double> series);

}  // namespace hamid

#endif  // HAMID_HMC_HPP
