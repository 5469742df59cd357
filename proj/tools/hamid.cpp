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

// hamid: input design for probabilistic dynamical systems.
//
//   hamid design       --config run.json --out DIR
//   hamid sample       --config run.json --out DIR
//   hamid evaluate     --config run.json --out DIR [--u label=u.csv ...]
//   hamid trajectories --config run.json --out DIR [--u label=u.csv ...]
//
// Exit codes: 0 success, 2 invalid configuration or input, 3 numerical abort.

#include "manifest.hpp"

#include "hamid/config.hpp"
#include "hamid/csv.hpp"
#include "hamid/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef HAMID_VERSION
#define HAMID_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace hamid::tools {
namespace {

struct Options {
  std::string command;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> inputs;
};

class Run {
 public:
  Run(const Options& options, RunConfig config, std::string config_bytes)
      : options_(options), config_(std::move(config)), config_bytes_(std::move(config_bytes)),
        started_(std::chrono::system_clock::now()) {
    fs::create_directories(options_.out);
  }

  const RunConfig& config() const { return config_; }
  RunConfig& config() { return config_; }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream f(fs::path(options_.out) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + name);
    f << text;
    if (!f) throw std::runtime_error("cannot write " + name);
    files_.push_back(name);
  }
  void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }
  void write_csv(const std::string& name, const csv::Table& t) { write_text(name, t.str()); }

  void finish(json timing = json::object()) {
    json manifest{{"tool", "hamid"},
                  {"version", HAMID_VERSION},
                  {"command", options_.command},
                  {"config", {{"path", options_.config}, {"sha256", sha256_hex(config_bytes_)}}},
                  {"seed", config_.seed},
                  {"threads", config_.threads},
                  {"started_at", iso_timestamp(started_)},
                  {"finished_at", iso_timestamp(std::chrono::system_clock::now())},
                  {"timing", timing},
                  {"files", file_inventory(options_.out, files_)}};
    std::ofstream f(fs::path(options_.out) / "manifest.json", std::ios::binary);
    f << manifest.dump(2) << "\n";
    if (!f) throw std::runtime_error("cannot write manifest.json");
  }

  json header() const {
    json warnings = json::array();
    for (const auto& w : config_.warnings) warnings.push_back(w);
    return json{{"config", echo(config_)}, {"warnings", warnings}};
  }

 private:
  const Options& options_;
  RunConfig config_;
  std::string config_bytes_;
  std::chrono::system_clock::time_point started_;
  std::vector<std::string> files_;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("config", "cannot open " + path);
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

int threads_from_env() {
  const char* env = std::getenv("HAMID_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const int n = std::stoi(env, &used);
    if (used == std::string(env).size() && n >= 1) return n;
  } catch (const std::exception&) {
  }
  throw ConfigError("HAMID_THREADS", "expected a positive integer");
}

Run open_run(const Options& options) {
  std::string bytes = read_file(options.config);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config", "expected an object");
  if (options.seed) doc["seed"] = *options.seed;
  if (options.threads) {
    doc["threads"] = *options.threads;
  } else if (const int env = threads_from_env()) {
    doc["threads"] = env;
  }
  RunConfig config = parse_config(doc, fs::absolute(options.config).parent_path());
  for (const auto& w : config.warnings) std::cerr << "warning: " << w << "\n";
  return Run(options, std::move(config), std::move(bytes));
}

// Inputs named in the config, overridden or extended by --u label=path.
std::vector<NamedSignal> collect_inputs(Run& run, std::vector<NamedSignal> inputs,
                                        const std::vector<std::string>& flags,
                                        const std::string& section) {
  for (const auto& flag : flags) {
    const auto eq = flag.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == flag.size()) {
      throw ConfigError("--u", "expected label=path, got '" + flag + "'");
    }
    const std::string label = flag.substr(0, eq);
    const json spec{{"csv", fs::absolute(flag.substr(eq + 1)).string()}};
    Vector u = resolve_input(spec, run.config(), "--u " + label);
    bool replaced = false;
    for (auto& s : inputs) {
      if (s.label == label) {
        s.values = u;
        replaced = true;
      }
    }
    if (!replaced) inputs.push_back({label, std::move(u)});
  }
  if (inputs.empty()) throw ConfigError(section, "no inputs given");
  return inputs;
}

int width(const RunConfig& c) { return std::max(1, c.model->dims().n_u); }

void cmd_design(const Options& options) {
  Run run = open_run(options);
  const RunConfig& c = run.config();
  const DesignConfig dc = design_config(c);
  const DesignReport report = design_input(dc);

  json out = run.header();
  out.update(to_json(report));
  run.write_json("report.json", out);
  run.write_csv("u_nominal.csv", csv::signal_table(report.u_nominal, width(c)));
  run.write_csv("u_optimized.csv", csv::signal_table(report.u_star, width(c)));
  run.write_csv("u_iterates.csv", csv::iterates_table(report, width(c)));
  run.write_csv("cost_trace.csv", csv::cost_trace_table(report));
  run.finish(timing_json(report));
}

void cmd_sample(const Options& options) {
  Run run = open_run(options);
  const RunConfig& c = run.config();
  const auto& model = *c.model;
  if (c.sample.u.size() != model.dims().input_size()) {
    throw ConfigError("sample.u", "required field is missing (no u_nominal to fall back on)");
  }
  const Vector y = c.sample.y ? *c.sample.y : model.deterministic_output(c.theta_star, c.sample.u);
  const HamiltonianContext ctx(model, c.sample.u, y, c.hmc.mass);
  HmcParams params = c.hmc;
  params.initial_q = chain_start(model, c.theta_init, c.sample.u);
  const ChainOutput chain = run_chain(ctx, params);

  run.write_csv("samples.csv", csv::samples_table(chain));
  json diag = run.header();
  diag.update(chain_diagnostics(chain, params));
  run.write_json("diagnostics.json", diag);
  run.finish();
}

void cmd_evaluate(const Options& options) {
  Run run = open_run(options);
  const auto inputs =
      collect_inputs(run, run.config().evaluate_inputs, options.inputs, "evaluate.inputs");
  const RunConfig& c = run.config();

  json summary = run.header();
  json results = json::object();
  json order = json::array();
  csv::Table grid = csv::grid_table(c.model->dims().n_theta);
  bool any_grid = false;
  for (const auto& in : inputs) {
    const DesignEvaluation ev = evaluate_design(*c.model, c.theta_star, in.values, c.evaluation);
    results[in.label] = to_json(ev, c.theta_star);
    order.push_back(in.label);
    if (ev.grid) {
      csv::append_grid(grid, in.label, *ev.grid);
      any_grid = true;
    }
  }
  summary["inputs"] = results;
  summary["order"] = order;
  if (any_grid) run.write_csv("grid_posterior.csv", grid);
  run.write_json("summary.json", summary);
  run.finish();
}

void cmd_trajectories(const Options& options) {
  Run run = open_run(options);
  const auto inputs =
      collect_inputs(run, run.config().trajectories.inputs, options.inputs, "trajectories.inputs");
  const RunConfig& c = run.config();

  DesignConfig dc;
  dc.model = c.model;
  dc.theta_star = c.theta_star;
  dc.hmc = c.hmc;
  dc.theta_init = c.theta_init;
  dc.samples = c.trajectories.count;
  constexpr std::uint64_t kStream = 0x7472616aULL;

  std::optional<ChainOutput> shared;
  if (c.trajectories.sampling == TrajectorySampling::kShared) {
    if (!c.u_nominal) throw ConfigError("u_nominal", "required for shared trajectory starts");
    shared = sample_canonical(dc, *c.u_nominal, make_rng(c.seed, {kStream})());
  }

  const int d = c.model->dims().position_size();
  csv::Table table = csv::trajectory_table(d);
  json results = json::object();
  json order = json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    const ChainOutput chain =
        shared ? *shared : sample_canonical(dc, in.values, make_rng(c.seed, {kStream, i})());
    const TrajectorySet set =
        hamiltonian_trajectories(*c.model, c.theta_star, in.values, chain.samples, c.hmc);
    json finals = json::array();
    for (std::size_t k = 0; k < set.paths.size(); ++k) {
      csv::append_trajectory(table, in.label, static_cast<int>(k), set.paths[k]);
      finals.push_back(to_json(Vector(set.paths[k].back().q.head(c.model->dims().n_theta))));
    }
    results[in.label] = json{{"statistic", set.statistic},
                             {"start_acceptance_rate", chain.acceptance_rate},
                             {"final_theta", finals}};
    order.push_back(in.label);
  }
  json summary = run.header();
  summary["inputs"] = results;
  summary["order"] = order;
  run.write_csv("trajectories.csv", table);
  run.write_json("summary.json", summary);
  run.finish();
}

void report_error(int code, const std::string& kind, const std::string& field,
                  const std::string& message) {
  json err{{"code", code}, {"kind", kind}, {"message", message}};
  err["field"] = field.empty() ? json(nullptr) : json(field);
  std::cerr << json{{"error", err}}.dump() << std::endl;
}

}  // namespace
}  // namespace hamid::tools

int main(int argc, char** argv) {
  using namespace hamid::tools;
  Options options;
  CLI::App app{"Input design for probabilistic dynamical systems via Hamiltonian dynamics",
               "hamid"};
  app.set_version_flag("--version", HAMID_VERSION);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config, "Run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", options.out, "Output directory")->required();
    sub->add_option("--seed", options.seed, "Overrides the configured seed");
    sub->add_option("--threads", options.threads, "Worker threads (default: $HAMID_THREADS)")
        ->check(CLI::PositiveNumber);
  };
  auto* design = app.add_subcommand("design", "Optimise the input (outer sampling/control loop)");
  auto* sample = app.add_subcommand("sample", "Run the HMC sampler at one input");
  auto* evaluate = app.add_subcommand("evaluate", "Posterior summaries for one or more inputs");
  auto* trajectories =
      app.add_subcommand("trajectories", "Leapfrog trajectories of the Hamiltonian system");
  for (auto* sub : {design, sample, evaluate, trajectories}) add_common(sub);
  for (auto* sub : {evaluate, trajectories}) {
    sub->add_option("--u", options.inputs, "Extra input as label=path.csv (repeatable)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(2, "usage", "", e.what());
    return 2;
  }
  options.command = app.get_subcommands().front()->get_name();

  try {
    if (options.command == "design") cmd_design(options);
    if (options.command == "sample") cmd_sample(options);
    if (options.command == "evaluate") cmd_evaluate(options);
    if (options.command == "trajectories") cmd_trajectories(options);
  } catch (const hamid::ConfigError& e) {
    report_error(2, "validation", e.field(), e.what());
    return 2;
  } catch (const hamid::ArgumentError& e) {
    report_error(2, "validation", "", e.what());
    return 2;
  } catch (const hamid::NumericDomainError& e) {
    report_error(3, "numeric", "", e.what());
    return 3;
  } catch (const std::exception& e) {
    report_error(1, "internal", "", e.what());
    return 1;
  }
  return 0;
}
