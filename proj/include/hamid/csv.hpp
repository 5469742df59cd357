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

#ifndef HAMID_CSV_HPP
#define HAMID_CSV_HPP

#include "hamid/hamiltonian.hpp"
#include "hamid/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hamid::csv {

/// Shortest decimal string that parses back to exactly x.
std::string format(double x);

class Table {
 public:
  explicit Table(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_numeric_row(const std::vector<double>& values);
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Header "t,u_1,...,u_n" followed by one row per time step (t from 1).
Table signal_table(const Vector& signal, int width, const std::string& name = "u");

/// Reads a signal written by signal_table (or any CSV whose first column is
/// named t and whose remaining columns are the signal components). Throws
/// ArgumentError on malformed input.
Vector read_signal(const std::filesystem::path& path);

/// Columns input, sample, step, q_1..q_d, rho_1..rho_d.
void append_trajectory(Table& table, const std::string& input, int sample,
                       const std::vector<PhasePoint>& trajectory);
Table trajectory_table(int dim);

}  // namespace hamid::csv

#endif  // HAMID_CSV_HPP
