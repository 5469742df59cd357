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
#include "hamid/random.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

using namespace hamid;

namespace {

double parse(const std::string& s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

TEST_CASE("numbers are written in shortest round-trip form") {
  Rng rng = make_rng(81);
  for (int i = 0; i < 2000; ++i) {
    const double x = draw_normal(rng) * std::pow(10.0, static_cast<int>(draw_uniform(rng) * 40) - 20);
    CHECK(parse(csv::format(x)) == x);
  }
  CHECK(csv::format(0.1) == "0.1");
  CHECK(csv::format(1.0) == "1");
  CHECK(csv::format(-2.5e-300) == "-2.5e-300");
  CHECK(parse(csv::format(std::numeric_limits<double>::denorm_min())) ==
        std::numeric_limits<double>::denorm_min());
}

TEST_CASE("signals round-trip through CSV") {
  const auto dir = std::filesystem::temp_directory_path() / "hamid_csv_test";
  std::filesystem::create_directories(dir);
  Rng rng = make_rng(82);
  for (int width : {1, 2, 3}) {
    const Vector u = standard_normal(12 * width, rng) / 3.0;
    const auto path = dir / ("u" + std::to_string(width) + ".csv");
    csv::signal_table(u, width).write(path);
    CHECK(csv::read_signal(path) == u);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header.rfind("t,u_1", 0) == 0);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed CSV input") {
  const auto dir = std::filesystem::temp_directory_path() / "hamid_csv_bad";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return dir / name;
  };
  CHECK_THROWS_AS(csv::read_signal(dir / "missing.csv"), ArgumentError);
  CHECK_THROWS_AS(csv::read_signal(write("empty.csv", "")), ArgumentError);
  CHECK_THROWS_AS(csv::read_signal(write("header.csv", "time,u\n1,2\n")), ArgumentError);
  CHECK_THROWS_AS(csv::read_signal(write("ragged.csv", "t,u_1\n1,0.5,3\n")), ArgumentError);
  CHECK_THROWS_AS(csv::read_signal(write("text.csv", "t,u_1\n1,x\n")), ArgumentError);
  CHECK_THROWS_AS(csv::read_signal(write("nan.csv", "t,u_1\n1,nan\n")), ArgumentError);
  CHECK_THROWS_AS(csv::read_signal(write("rows.csv", "t,u_1\n")), ArgumentError);
  CHECK(csv::read_signal(write("crlf.csv", "t,u_1\r\n1,0.5\r\n2,-0.25\r\n")) == Vector{{0.5, -0.25}});
  std::filesystem::remove_all(dir);
}

TEST_CASE("tables") {
  csv::Table t({"a", "b"});
  t.add_numeric_row({1.0, 0.5});
  t.add_row({"x", "2"});
  CHECK(t.str() == "a,b\n1,0.5\nx,2\n");
  CHECK_THROWS_AS(t.add_row({"1"}), ArgumentError);
  csv::Table traj = csv::trajectory_table(2);
  csv::append_trajectory(traj, "nominal", 3,
                         {PhasePoint{Vector{{1.0, 2.0}}, Vector{{0.0, -1.0}}}});
  CHECK(traj.str() == "input,sample,step,q_1,q_2,rho_1,rho_2\nnominal,3,0,1,2,0,-1\n");
}
