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

#ifndef HAMID_TYPES_HPP
#define HAMID_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hamid {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Bad dimensions, invalid settings, malformed configuration.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation left its numerical domain (overflow, non-PD covariance, ...).
class NumericDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sizes of a probabilistic model. Signals are stored time-major:
/// u = [u_1; u_2; ...; u_T], each block of length n_u.
struct ModelDims {
  int n_theta = 1;
  int n_x = 0;
  int n_u = 1;
  int n_y = 1;
  int horizon = 1;

  int input_size() const { return n_u * horizon; }
  int output_size() const { return n_y * horizon; }
  int latent_size() const { return n_x * horizon; }
  /// Dimension of the Hamiltonian position q = [theta; x].
  int position_size() const { return n_theta + latent_size(); }

  void validate() const;
};

/// State (q, rho) of the Hamiltonian system.
struct PhasePoint {
  Vector q;
  Vector rho;

  int dim() const { return static_cast<int>(q.size()); }
};

/// Gradient of a log joint density, split into parameter and latent blocks.
struct JointGradient {
  Vector theta;
  Vector x;
};

/// Partial derivatives of a log joint density with respect to the data.
struct DataGradient {
  Vector u;
  Vector y;
};

/// Outputs of a stochastic simulation.
struct Simulation {
  Vector y;
  Vector x;
};

void require(bool condition, const std::string& message);
void require_finite(const Vector& v, const std::string& what);
void require_size(const Vector& v, Eigen::Index expected, const std::string& what);

}  // namespace hamid

#endif  // HAMID_TYPES_HPP
