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

#include "hamid/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hamid::csv {

std::string format(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<std::string> cells) {
  require(cells.size() == header_.size(), "csv: row width does not match header");
  rows_.push_back(std::move(cells));
}

void Table::add_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format(v));
  add_row(std::move(cells));
}

std::string Table::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

void Table::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("csv: cannot open " + path.string() + " for writing");
  f << str();
}

Table signal_table(const Vector& signal, int width, const std::string& name) {
  require(width >= 1 && signal.size() % width == 0, "csv: signal length is not a multiple of width");
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= width; ++i) header.push_back(name + "_" + std::to_string(i));
  Table table(std::move(header));
  const auto steps = signal.size() / width;
  for (Eigen::Index t = 0; t < steps; ++t) {
    std::vector<std::string> row{std::to_string(t + 1)};
    for (int i = 0; i < width; ++i) row.push_back(format(signal(t * width + i)));
    table.add_row(std::move(row));
  }
  return table;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& raw, const std::string& where) {
  std::string s = raw;
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ArgumentError("csv: cannot parse '" + raw + "' as a number at " + where);
  }
  return v;
}

}  // namespace

Vector read_signal(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ArgumentError("csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw ArgumentError("csv: " + path.string() + " is empty");
  const auto header = split(line);
  if (header.size() < 2 || header.front() != "t") {
    throw ArgumentError("csv: " + path.string() + " must start with a 't' column and a signal column");
  }
  std::vector<double> values;
  int row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ArgumentError("csv: " + path.string() + " row " + std::to_string(row) +
                          " has the wrong number of columns");
    }
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const double v = parse_number(cells[i], path.string() + ":" + std::to_string(row));
      if (!std::isfinite(v)) throw ArgumentError("csv: non-finite value in " + path.string());
      values.push_back(v);
    }
  }
  if (values.empty()) throw ArgumentError("csv: " + path.string() + " has no data rows");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Table trajectory_table(int dim) {
  std::vector<std::string> header{"input", "sample", "step"};
  for (int i = 1; i <= dim; ++i) header.push_back("q_" + std::to_string(i));
  for (int i = 1; i <= dim; ++i) header.push_back("rho_" + std::to_string(i));
  return Table(std::move(header));
}

void append_trajectory(Table& table, const std::string& input, int sample,
                       const std::vector<PhasePoint>& trajectory) {
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    std::vector<std::string> row{input, std::to_string(sample), std::to_string(k)};
    for (Eigen::Index i = 0; i < trajectory[k].q.size(); ++i) row.push_back(format(trajectory[k].q(i)));
    for (Eigen::Index i = 0; i < trajectory[k].rho.size(); ++i) {
      row.push_back(format(trajectory[k].rho(i)));
    }
    table.add_row(std::move(row));
  }
}

}  // namespace hamid::csv
