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

#ifndef HAMID_CONFIG_HPP
#define HAMID_CONFIG_HPP

#include "hamid/designer.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hamid {

/// Invalid or missing configuration entry. field() is the dotted path of the
/// offending entry, e.g. "design.delta_u".
class ConfigError : public ArgumentError {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct NamedSignal {
  std::string label;
  Vector values;
};

struct DesignSection {
  int samples = 40;
  double delta_u = 1e-2;
  int max_outer = 10;
  double min_acceptance = 0.1;
};

enum class TrajectorySampling {
  /// Every input starts from the same draws of the nominal canonical
  /// distribution.
  kShared,
  /// Each input starts from draws of its own canonical distribution.
  kPerInput,
};

std::string to_string(TrajectorySampling s);

struct TrajectorySection {
  std::vector<NamedSignal> inputs;
  int count = 15;
  TrajectorySampling sampling = TrajectorySampling::kShared;
};

struct SampleSection {
  Vector u;
  /// Empty: y~(u) at theta*.
  std::optional<Vector> y;
  nlohmann::json y_echo = "deterministic";
};

/// A parsed run configuration. Every default is filled in; echo() renders it
/// back as JSON.
struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  std::shared_ptr<const ProbabilisticModel> model;
  nlohmann::json model_echo;
  Vector theta_star;
  ConstraintSet constraints;
  /// Projected onto the constraint set; absent when not configured.
  std::optional<Vector> u_nominal;
  HmcParams hmc;
  Vector theta_init;
  PgdSettings pgd;
  std::optional<DesignSection> design;
  EvaluationSettings evaluation;
  std::vector<NamedSignal> evaluate_inputs;
  SampleSection sample;
  TrajectorySection trajectories;
  /// Non-fatal remarks, e.g. an input that had to be projected.
  std::vector<std::string> warnings;
  /// Directory that relative CSV paths are resolved against.
  std::filesystem::path base_dir;
};

RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Resolves an input signal spec against a parsed configuration and projects
/// it onto the constraint set. Accepted forms: an array of numbers,
/// {"values": [...]}, {"csv": path}, {"constant": c},
/// {"distribution": "normal", "mean": m, "std": s, "seed": k}, and the labels
/// "nominal" and "sign" (sign of the nominal input).
Vector resolve_input(const nlohmann::json& spec, RunConfig& config, const std::string& field);

/// Model described by a {"type": ..., ...} object.
std::shared_ptr<const ProbabilisticModel> parse_model(const nlohmann::json& spec,
                                                      nlohmann::json* echo = nullptr);

/// Throws ConfigError when the design section or the nominal input is missing.
DesignConfig design_config(const RunConfig& config);

nlohmann::json echo(const RunConfig& config);
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const ConstraintSet& c);

}  // namespace hamid

#endif  // HAMID_CONFIG_HPP
