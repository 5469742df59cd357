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

#ifndef HAMID_TOOLS_MANIFEST_HPP
#define HAMID_TOOLS_MANIFEST_HPP

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace hamid::tools {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// UTC, e.g. 2026-01-31T12:00:00Z.
std::string iso_timestamp(std::chrono::system_clock::time_point t);

/// Inventory entry {name, bytes, sha256} for every listed file in dir.
nlohmann::json file_inventory(const std::filesystem::path& dir,
                              const std::vector<std::string>& names);

}  // namespace hamid::tools

#endif  // HAMID_TOOLS_MANIFEST_HPP
