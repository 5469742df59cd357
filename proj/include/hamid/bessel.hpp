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

#ifndef HAMID_BESSEL_HPP
#define HAMID_BESSEL_HPP

namespace hamid::bessel {

/// Above this argument the scaled functions switch to the large-z expansion.
inline constexpr double kAsymptoticThreshold = 50.0;

/// exp(-|z|) * I0(z).
double i0_scaled(double z);

/// exp(-|z|) * I1(z). Odd in z.
double i1_scaled(double z);

/// log I0(z), finite for every finite z.
double log_i0(double z);

/// I1(z) / I0(z), the derivative of log I0.
double i1_over_i0(double z);

}  // namespace hamid::bessel

namespace hamid::rician {

/// Mean of a Rice(nu, sigma^2) variable: sigma*sqrt(pi/2)*L_{1/2}(-nu^2/(2 sigma^2)).
double mean(double nu, double sigma_sq);

/// log p(y | nu) for y > 0, including the log(y / sigma^2) term.
double log_pdf(double y, double nu, double sigma_sq);

/// d/dnu log p(y | nu).
double dlog_pdf_dnu(double y, double nu, double sigma_sq);

/// d/dy log p(y | nu).
double dlog_pdf_dy(double y, double nu, double sigma_sq);

/// d mean / d nu.
double dmean_dnu(double nu, double sigma_sq);

}  // namespace hamid::rician

#endif  // HAMID_BESSEL_HPP
