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

#include "hamid/types.hpp"

#include <cmath>
#include <numbers>

namespace hamid::bessel {
namespace {

// Hankel expansion of exp(-z) I_n(z) for z >= kAsymptoticThreshold:
//   (2 pi z)^{-1/2} sum_k (-1)^k a_k(n) / z^k,
//   a_k(n) = prod_{j=1..k} (4n^2 - (2j-1)^2) / (k! 8^k).
double scaled_asymptotic(int order, double z) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * z);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

double scaled(int order, double az) {
  if (az >= kAsymptoticThreshold) return scaled_asymptotic(order, az);
  return std::cyl_bessel_i(static_cast<double>(order), az) * std::exp(-az);
}

}  // namespace

double i0_scaled(double z) {
  if (!std::isfinite(z)) throw NumericDomainError("bessel i0: non-finite argument");
  return scaled(0, std::abs(z));
}

double i1_scaled(double z) {
  if (!std::isfinite(z)) throw NumericDomainError("bessel i1: non-finite argument");
  const double v = scaled(1, std::abs(z));
  return z < 0.0 ? -v : v;
}

double log_i0(double z) { return std::log(i0_scaled(z)) + std::abs(z); }

double i1_over_i0(double z) { return i1_scaled(z) / i0_scaled(z); }

}  // namespace hamid::bessel

namespace hamid::rician {

double mean(double nu, double sigma_sq) {
  const double z = nu * nu / (2.0 * sigma_sq);
  // L_{1/2}(-z) = exp(-z/2) [(1+z) I0(z/2) + z I1(z/2)]; the scaled Bessel
  // functions absorb the exponential.
  const double laguerre = (1.0 + z) * bessel::i0_scaled(0.5 * z) + z * bessel::i1_scaled(0.5 * z);
  return std::sqrt(sigma_sq) * std::sqrt(std::numbers::pi / 2.0) * laguerre;
}

double log_pdf(double y, double nu, double sigma_sq) {
  if (!(y > 0.0)) throw NumericDomainError("rician log_pdf: observation must be positive");
  return std::log(y / sigma_sq) - (y * y + nu * nu) / (2.0 * sigma_sq) +
         bessel::log_i0(y * nu / sigma_sq);
}

double dlog_pdf_dnu(double y, double nu, double sigma_sq) {
  return -nu / sigma_sq + (y / sigma_sq) * bessel::i1_over_i0(y * nu / sigma_sq);
}

double dlog_pdf_dy(double y, double nu, double sigma_sq) {
  if (!(y > 0.0)) throw NumericDomainError("rician log_pdf: observation must be positive");
  return 1.0 / y - y / sigma_sq + (nu / sigma_sq) * bessel::i1_over_i0(y * nu / sigma_sq);
}

double dmean_dnu(double nu, double sigma_sq) {
  const double z = nu * nu / (2.0 * sigma_sq);
  const double shape = 0.5 * (bessel::i0_scaled(0.5 * z) + bessel::i1_scaled(0.5 * z));
  return std::sqrt(sigma_sq) * std::sqrt(std::numbers::pi / 2.0) * shape * nu / sigma_sq;
}

}  // namespace hamid::rician
