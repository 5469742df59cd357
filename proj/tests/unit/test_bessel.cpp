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

#include "hamid/bessel.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

using namespace hamid;

namespace {

/// exp(-z) I_n(z) from the power series, summed in long double.
double series_scaled(int n, double z) {
  const long double h = 0.5L * z;
  long double term = std::pow(h, static_cast<long double>(n));
  for (int k = 1; k <= n; ++k) term /= k;
  long double sum = term;
  for (int k = 1; k < 5000; ++k) {
    term *= h * h / (static_cast<long double>(k) * (k + n));
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  return static_cast<double>(sum * std::exp(-static_cast<long double>(z)));
}

}  // namespace

TEST_CASE("scaled Bessel functions against the power series") {
  for (double z : {0.0, 1e-3, 0.5, 1.0, 3.7, 10.0, 25.0, 49.9, 50.0, 50.1, 75.0, 200.0, 600.0}) {
    CAPTURE(z);
    CHECK(bessel::i0_scaled(z) == doctest::Approx(series_scaled(0, z)).epsilon(1e-12));
    CHECK(bessel::i1_scaled(z) == doctest::Approx(series_scaled(1, z)).epsilon(1e-12));
  }
}

TEST_CASE("symmetry and large arguments") {
  for (double z : {0.3, 7.0, 80.0}) {
    CHECK(bessel::i0_scaled(-z) == bessel::i0_scaled(z));
    CHECK(bessel::i1_scaled(-z) == -bessel::i1_scaled(z));
    CHECK(bessel::i1_over_i0(-z) == -bessel::i1_over_i0(z));
  }
  CHECK(bessel::i0_scaled(0.0) == 1.0);
  CHECK(bessel::i1_scaled(0.0) == 0.0);
  CHECK(bessel::log_i0(0.0) == 0.0);
  const double z = 1e6;
  CHECK(std::isfinite(bessel::log_i0(z)));
  CHECK(bessel::log_i0(z) ==
        doctest::Approx(z - 0.5 * std::log(2.0 * std::numbers::pi * z)).epsilon(1e-12));
  CHECK(bessel::i1_over_i0(z) == doctest::Approx(1.0 - 0.5 / z).epsilon(1e-12));
}

TEST_CASE("log I0 derivative is the Bessel ratio") {
  for (double z : {0.2, 4.0, 49.0, 51.0, 120.0}) {
    const double h = 1e-5 * (1.0 + z);
    const double fd = (bessel::log_i0(z + h) - bessel::log_i0(z - h)) / (2.0 * h);
    CHECK(bessel::i1_over_i0(z) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("Rician density and mean") {
  const double s2 = 0.1;
  CHECK(rician::mean(0.0, s2) == doctest::Approx(std::sqrt(s2 * std::numbers::pi / 2.0)));
  // The mean approaches nu + sigma^2 / (2 nu) for large nu.
  const double nu = 40.0;
  CHECK(rician::mean(nu, s2) == doctest::Approx(nu + s2 / (2.0 * nu)).epsilon(1e-9));
  // Trapezoid integral of the density is one and its first moment the mean.
  for (double v : {0.0, 0.4, 1.0, 3.0}) {
    double mass = 0.0;
    double first = 0.0;
    const double dy = 1e-4;
    for (double y = dy; y < v + 4.0; y += dy) {
      const double p = std::exp(rician::log_pdf(y, v, s2));
      mass += p * dy;
      first += y * p * dy;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(first == doctest::Approx(rician::mean(v, s2)).epsilon(1e-6));
  }
  for (double v : {0.0, 0.3, 1.2, 8.0}) {
    for (double y : {0.05, 0.7, 2.5, 9.0}) {
      const double h = 1e-6;
      const double fd_nu = (rician::log_pdf(y, v + h, s2) - rician::log_pdf(y, v - h, s2)) / (2 * h);
      const double fd_y = (rician::log_pdf(y + h, v, s2) - rician::log_pdf(y - h, v, s2)) / (2 * h);
      CHECK(rician::dlog_pdf_dnu(y, v, s2) == doctest::Approx(fd_nu).epsilon(1e-6).scale(1.0));
      CHECK(rician::dlog_pdf_dy(y, v, s2) == doctest::Approx(fd_y).epsilon(1e-6).scale(1.0));
    }
    const double h = 1e-6;
    const double fd = (rician::mean(v + h, s2) - rician::mean(v - h, s2)) / (2 * h);
    CHECK(rician::dmean_dnu(v, s2) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
  }
}
