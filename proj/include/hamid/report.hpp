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

#ifndef HAMID_REPORT_HPP
#define HAMID_REPORT_HPP

#include "hamid/csv.hpp"
#include "hamid/designer.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace hamid {

// Serialisation of run results. Nothing here records wall-clock time, so the
// output is a pure function of the inputs; timing_json() is kept apart.

nlohmann::json to_json(const DesignReport& report);
nlohmann::json timing_json(const DesignReport& report);
nlohmann::json to_json(const DesignEvaluation& evaluation, const Vector& theta_star);
nlohmann::json chain_diagnostics(const ChainOutput& chain, const HmcParams& params);

namespace csv {

/// Columns outer, step, cost.
Table cost_trace_table(const DesignReport& report);
/// Columns outer, t, u_1..u_n: the input at the end of every outer iteration.
Table iterates_table(const DesignReport& report, int n_u);
/// Columns q_1..q_d, rho_1..rho_d, one row per sample.
Table samples_table(const ChainOutput& chain);
/// Columns input, theta_1[, theta_2], density.
Table grid_table(int n_theta);
void append_grid(Table& table, const std::string& label, const GridPosterior& gp);

}  // namespace csv
}  // namespace hamid

#endif  // HAMID_REPORT_HPP
