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

#ifndef HAMID_MODEL_HPP
#define HAMID_MODEL_HPP

#include "hamid/types.hpp"

#include <limits>
#include <string>

namespace hamid {

/// Zero-mean isotropic Gaussian prior on theta. An infinite sigma gives a flat
/// prior (value and gradient zero).
struct GaussianPrior {
  double sigma = 10.0;

  double log_density(const Vector& theta) const;
  Vector gradient(const Vector& theta) const;
};

/// A parametric probabilistic input/output model p(y, x | u, theta) p(theta).
///
/// Implementations provide the log joint density and its exact gradient with
/// respect to theta and the latent trajectory x. When n_x == 0 the log joint is
/// the exact marginal log-likelihood log p(y | u, theta). Normalising constants
/// that depend on neither theta nor x may be dropped, but each model fixes its
/// convention once.
///
/// All methods are const and reentrant.
class ProbabilisticModel {
 public:
  explicit ProbabilisticModel(ModelDims dims, GaussianPrior prior = {});
  virtual ~ProbabilisticModel() = default;

  const ModelDims& dims() const { return dims_; }
  const GaussianPrior& prior() const { return prior_; }
  virtual std::string type_name() const = 0;

  virtual double log_joint(const Vector& theta, const Vector& x, const Vector& u,
                           const Vector& y) const = 0;
  virtual JointGradient grad_log_joint(const Vector& theta, const Vector& x, const Vector& u,
                                       const Vector& y) const = 0;

  virtual double log_prior(const Vector& theta) const;
  virtual Vector grad_log_prior(const Vector& theta) const;

  /// Draws (y, x) ~ p(y, x | u, theta); a pure function of its arguments.
  virtual Simulation simulate(const Vector& theta, const Vector& u, std::uint64_t seed) const = 0;

  /// Output with every stochastic term replaced by its mean.
  virtual Vector deterministic_output(const Vector& theta, const Vector& u) const = 0;

  /// Latent trajectory of the noise-free rollout; empty when n_x == 0.
  virtual Vector deterministic_latent(const Vector& theta, const Vector& u) const;

  /// Whether grad_log_joint_data and deterministic_output_vjp are provided.
  virtual bool has_data_gradient() const { return false; }
  /// Partial derivatives of log p(y, x | u, theta) in u and y at fixed
  /// (theta, x). Throws ArgumentError unless has_data_gradient().
  virtual DataGradient grad_log_joint_data(const Vector& theta, const Vector& x, const Vector& u,
                                           const Vector& y) const;
  /// (d deterministic_output / du)' w.
  virtual Vector deterministic_output_vjp(const Vector& theta, const Vector& u,
                                          const Vector& w) const;

 protected:
  /// Throws ArgumentError unless all arguments match dims().
  void check_arguments(const Vector& theta, const Vector& x, const Vector& u,
                       const Vector& y) const;
  void check_theta_input(const Vector& theta, const Vector& u) const;

 private:
  ModelDims dims_;
  GaussianPrior prior_;
};

}  // namespace hamid

#endif  // HAMID_MODEL_HPP
