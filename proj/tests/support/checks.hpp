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

#ifndef HAMID_TESTS_CHECKS_HPP
#define HAMID_TESTS_CHECKS_HPP

#include "hamid/hmc.hpp"
#include "hamid/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace hamid::testing {

inline Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                                 double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector a = x;
    Vector b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

/// Largest coordinate error, each measured relative to the reference value,
/// or absolutely where the reference is below `floor` in magnitude.
inline double worst_relative_error(const Vector& value, const Vector& reference,
                                   double floor = 1e-3) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < value.size(); ++i) {
    const double err = std::abs(value(i) - reference(i));
    worst = std::max(worst, std::abs(reference(i)) > floor ? err / std::abs(reference(i)) : err);
  }
  return worst;
}

/// True when every coordinate agrees to relative error `rel`, or to absolute
/// error `abs` when the reference coordinate is itself that small.
inline bool gradient_matches(const Vector& value, const Vector& reference, double rel, double abs) {
  for (Eigen::Index i = 0; i < value.size(); ++i) {
    const double err = std::abs(value(i) - reference(i));
    if (err <= abs) continue;
    if (err > rel * std::abs(reference(i))) return false;
  }
  return true;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
inline double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the KS statistic for n draws.
inline double ks_critical_1pct(double n) { return 1.628 / std::sqrt(n); }

/// Mean and variance of a correlated scalar series with standard errors
/// scaled by its effective sample size.
struct SeriesMoments {
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
  double ess = 0.0;
};

inline SeriesMoments series_moments(const std::vector<double>& x) {
  SeriesMoments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v / n;
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - m.mean) * (x[i] - m.mean);
  for (double v : sq) m.variance += v / n;
  double var_sq = 0.0;
  for (double v : sq) var_sq += (v - m.variance) * (v - m.variance) / n;
  m.ess = effective_sample_size(x);
  m.mean_se = std::sqrt(m.variance / m.ess);
  m.variance_se = std::sqrt(var_sq / effective_sample_size(sq));
  return m;
}

inline std::vector<double> column(const Matrix& m, Eigen::Index j) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, j);
  return out;
}

}  // namespace hamid::testing

#endif  // HAMID_TESTS_CHECKS_HPP
