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

#include "hamid/report.hpp"

#include "hamid/config.hpp"

#include <cmath>

namespace hamid {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const DesignReport& report) {
  json iterations = json::array();
  for (const auto& it : report.iterations) {
    json trace = json::array();
    for (double c : it.cost_trace) trace.push_back(number_or_null(c));
    iterations.push_back(json{{"index", it.index},
                              {"u", to_json(it.u_end)},
                              {"cost_before", number_or_null(it.cost_before)},
                              {"cost_after", number_or_null(it.cost_after)},
                              {"acceptance_rate", it.acceptance_rate},
                              {"dropped_samples", it.dropped_samples},
                              {"delta_l1", it.delta_l1},
                              {"pgd_iterations", it.pgd_iterations},
                              {"pgd_stop", to_string(it.pgd_stop)},
                              {"cost_trace", trace}});
  }
  return json{{"iterations", iterations},
              {"outer_iterations", report.iterations.size()},
              {"converged", report.converged},
              {"u_nominal", to_json(report.u_nominal)},
              {"u_star", to_json(report.u_star)}};
}

json timing_json(const DesignReport& report) {
  json out = json::array();
  double total = 0.0;
  for (const auto& it : report.iterations) {
    out.push_back(it.wall_seconds);
    total += it.wall_seconds;
  }
  return json{{"outer_wall_seconds", out}, {"total_wall_seconds", total}};
}

json to_json(const DesignEvaluation& ev, const Vector& theta_star) {
  const Vector bias = ev.mean - theta_star;
  json out{{"mean", to_json(ev.mean)},
           {"covariance", to_json(ev.covariance)},
           {"variance_trace", ev.covariance.trace()},
           {"squared_bias", bias.squaredNorm()},
           {"J", ev.cost},
           {"method", ev.exact_grid ? "grid" : "reference_chain"}};
  if (ev.grid) {
    json axes = json::array();
    for (const auto& a : ev.grid->axes) {
      axes.push_back(json{{"lower", a(0)}, {"upper", a(a.size() - 1)}, {"nodes", a.size()}});
    }
    out["grid"] = json{{"axes", axes},
                       {"boundary_warning", ev.grid->boundary_warning},
                       {"min_filter_ess", number_or_null(ev.grid->min_filter_ess)}};
  } else {
    out["mean_standard_error"] = to_json(ev.mean_standard_error);
    out["J_standard_error"] = ev.cost_standard_error;
  }
  return out;
}

json chain_diagnostics(const ChainOutput& chain, const HmcParams& params) {
  return json{{"acceptance_rate", chain.acceptance_rate},
              {"n_samples", chain.samples.size()},
              {"proposals", chain.proposals},
              {"accepted", chain.accepted},
              {"params",
               json{{"mass", params.mass},
                    {"epsilon", params.epsilon},
                    {"steps", params.steps},
                    {"iterations", params.iterations},
                    {"warmup", params.warmup},
                    {"thin", params.thin},
                    {"seed", params.seed},
                    {"initial_q", to_json(params.initial_q)}}}};
}

namespace csv {

Table cost_trace_table(const DesignReport& report) {
  Table table({"outer", "step", "cost"});
  for (const auto& it : report.iterations) {
    for (std::size_t k = 0; k < it.cost_trace.size(); ++k) {
      table.add_row({std::to_string(it.index), std::to_string(k), format(it.cost_trace[k])});
    }
  }
  return table;
}

Table iterates_table(const DesignReport& report, int n_u) {
  std::vector<std::string> header{"outer", "t"};
  for (int i = 1; i <= n_u; ++i) header.push_back("u_" + std::to_string(i));
  Table table(std::move(header));
  for (const auto& it : report.iterations) {
    const auto steps = it.u_end.size() / n_u;
    for (Eigen::Index t = 0; t < steps; ++t) {
      std::vector<std::string> row{std::to_string(it.index), std::to_string(t + 1)};
      for (int i = 0; i < n_u; ++i) row.push_back(format(it.u_end(t * n_u + i)));
      table.add_row(std::move(row));
    }
  }
  return table;
}

Table samples_table(const ChainOutput& chain) {
  const int d = chain.samples.empty() ? 0 : chain.samples.front().dim();
  std::vector<std::string> header;
  for (int i = 1; i <= d; ++i) header.push_back("q_" + std::to_string(i));
  for (int i = 1; i <= d; ++i) header.push_back("rho_" + std::to_string(i));
  Table table(std::move(header));
  for (const auto& p : chain.samples) {
    std::vector<double> row(p.q.data(), p.q.data() + p.q.size());
    row.insert(row.end(), p.rho.data(), p.rho.data() + p.rho.size());
    table.add_numeric_row(row);
  }
  return table;
}

Table grid_table(int n_theta) {
  std::vector<std::string> header{"input"};
  for (int i = 1; i <= n_theta; ++i) header.push_back("theta_" + std::to_string(i));
  header.push_back("density");
  return Table(std::move(header));
}

void append_grid(Table& table, const std::string& label, const GridPosterior& gp) {
  const Vector density = gp.density();
  for (Eigen::Index i = 0; i < gp.size(); ++i) {
    const Vector node = gp.node(i);
    std::vector<std::string> row{label};
    for (Eigen::Index a = 0; a < node.size(); ++a) row.push_back(format(node(a)));
    row.push_back(format(density(i)));
    table.add_row(std::move(row));
  }
}

}  // namespace csv
}  // namespace hamid
