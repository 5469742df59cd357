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

#ifndef HAMID_RANDOM_HPP
#define HAMID_RANDOM_HPP

#include "hamid/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hamid {

using Rng = std::mt19937_64;

/// Engine seeded from a base seed and a list of stream identifiers, so that
/// independent consumers (chains, outer iterations, filter runs) never share
/// a stream.
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> streams = {});

/// One N(0, 1) draw.
double draw_normal(Rng& rng);

/// Uniform on [0, 1) from the top 53 bits of one engine output.
double draw_uniform(Rng& rng);

Vector standard_normal(Eigen::Index n, Rng& rng);

/// Symmetric square root factor S with S S^T = cov, for positive
/// semidefinite cov (zero covariances allowed).
Matrix psd_factor(const Matrix& cov);

bool is_symmetric_psd(const Matrix& m, double tol = 1e-12);

}  // namespace hamid

#endif  // HAMID_RANDOM_HPP
