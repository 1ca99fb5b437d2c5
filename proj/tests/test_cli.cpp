// Copyright 2026 The flatpush Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "flatpush/flatness.hpp"
#include "flatpush/reference_paths.hpp"
#include "flatpush/timelaw.hpp"

namespace fp = flatpush;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FLATPUSH_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scene(const std::string& name) {
  return std::string(FLATPUSH_SCENES) + "/" + name;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("flatpush_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Numeric CSV rows keyed by header, comment lines collected separately.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;
  size_t col(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i) if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (csv.header.empty()) {
      csv.header = cells;
    } else {
      std::vector<double> row;
      for (const auto& c : cells) row.push_back(std::stod(c));
      csv.rows.push_back(row);
    }
  }
  return csv;
}

double comment_value(const Csv& csv, const std::string& key) {
  for (const auto& c : csv.comments) {
    const auto pos = c.find(key + "=");
    if (pos != std::string::npos) return std::stod(c.substr(pos + key.size() + 1));
  }
  FAIL("missing comment " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("beta report") {
  const auto r = run("beta --a 1 --b 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("0.408248") != std::string::npos);
  CHECK(r.out.find("0.382598") != std::string::npos);
  CHECK(r.out.find("1.06704") != std::string::npos);
  CHECK(run("beta --a 0 --b 1").code == 2);
  CHECK(run("beta --a nope").code == 2);

  const auto grid = parse_csv(run("beta --grid --points 25").out);
  REQUIRE(grid.rows.size() == 25);
  for (const auto& row : grid.rows) {
    CHECK(row[grid.col("ratio")] >= 1.03);
    CHECK(row[grid.col("ratio")] <= 1.25);
  }
}

TEST_CASE("simulate scenarios") {
  auto push = parse_csv(run("simulate --scenario push --T 20").out);
  CHECK(push.comments.back() == "# termination_reason=contact_lost");
  CHECK(push.rows.back()[0] < 20.0);

  auto ellipse = parse_csv(run("simulate --scenario ellipse --a 1 --b 1 --r 0.2 --T 20").out);
  CHECK(comment_value(ellipse, "endpoint_error") < 1e-3);
  CHECK(ellipse.comments.back() == "# termination_reason=completed");

  auto zero = parse_csv(run("simulate --scenario zero --c0 0.1 --T 1 --dt 0.01").out);
  REQUIRE(zero.rows.size() == 101);
  for (const auto& row : zero.rows) {
    for (size_t j = 1; j <= 4; ++j) CHECK(row[j] == zero.rows.front()[j]);
  }
}

TEST_CASE("noise runs are reproducible") {
  const std::string args = "simulate --scenario lemniscate --T 20 --noise 0.05 --intervals 250 --dt 0.01";
  const auto a = run(args + " --seed 4");
  const auto b = run(args + " --seed 4");
  const auto c = run(args + " --seed 5");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("reprofile keeps states and changes inputs") {
  const auto constant = run("reprofile --profile constant --T 10");
  const auto trapezoid = run("reprofile --profile trapezoidal:1,3.3333333333333335 --T 10");
  REQUIRE(constant.code == 0);
  REQUIRE(trapezoid.code == 0);
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const auto path = fp::two_lobe_path();
  const std::vector<std::string> states{"theta_s", "c", "x_p", "y_p"};

  std::vector<Csv> runs{parse_csv(constant.out), parse_csv(trapezoid.out)};
  for (const auto& csv : runs) {
    CHECK(std::abs(comment_value(csv, "final_tau") - 1.0) < 1e-6);
    double worst = 0.0;
    double prev = 0.0;
    bool first = true;
    for (const auto& row : csv.rows) {
      const double tau = row[csv.col("tau")];
      const auto ref = first ? fp::inflate_state(path.jet(tau), p)
                             : fp::inflate_state(path.jet(tau), p, prev);
      prev = ref.slider.theta;
      first = false;
      const double expect[] = {ref.slider.theta, ref.slider.c, ref.pusher.x, ref.pusher.y};
      for (size_t k = 0; k < states.size(); ++k) {
        worst = std::max(worst, std::abs(row[csv.col(states[k])] - expect[k]));
      }
    }
    CHECK(worst < 1e-9);
  }

  // compare v_n at matching tau by linear interpolation of the second run
  const Csv& a = runs[0];
  const Csv& b = runs[1];
  double gap = 0.0;
  size_t j = 1;
  for (const auto& row : a.rows) {
    const double tau = row[a.col("tau")];
    while (j + 1 < b.rows.size() && b.rows[j][b.col("tau")] < tau) ++j;
    const double t0 = b.rows[j - 1][b.col("tau")], t1 = b.rows[j][b.col("tau")];
    if (!(t1 > t0) || tau < t0 || tau > t1) continue;
    const double w = (tau - t0) / (t1 - t0);
    const double vn = (1 - w) * b.rows[j - 1][b.col("v_n")] + w * b.rows[j][b.col("v_n")];
    gap = std::max(gap, std::abs(vn - row[a.col("v_n")]));
  }
  CHECK(gap > 1e-2);
}

TEST_CASE("reprofile curvature law slows down in bends") {
  const auto r = run("reprofile --profile curvature:0.5 --T 10");
  REQUIRE(r.code == 0);
  const auto csv = parse_csv(r.out);
  CHECK(std::abs(comment_value(csv, "final_tau") - 1.0) < 1e-6);
  const auto path = fp::two_lobe_path();
  // path-coordinate rate from the tau column, curvature from the path
  double min_rate = INFINITY, rate_at_peak = 0.0, peak = -1.0;
  for (size_t i = 1; i + 1 < csv.rows.size(); ++i) {
    const double tau = csv.rows[i][csv.col("tau")];
    const double rate = (csv.rows[i + 1][csv.col("tau")] - csv.rows[i - 1][csv.col("tau")]) /
                        (csv.rows[i + 1][0] - csv.rows[i - 1][0]);
    const auto g = path.jet(tau);
    const double kappa = std::abs(g.d1.x() * g.d2.y() - g.d2.x() * g.d1.y()) /
                         std::pow(g.d1.norm(), 3);
    min_rate = std::min(min_rate, rate);
    if (kappa > peak) {
      peak = kappa;
      rate_at_peak = rate;
    }
  }
  CHECK(rate_at_peak <= 1.01 * min_rate);
}

TEST_CASE("plan corridor") {
  const auto dir = scratch("corridor");
  const auto r = run("plan --scene " + scene("corridor.json") + " --out " + dir.string() + " --svg");
  REQUIRE(r.code == 0);
  const auto plan = nlohmann::json::parse(slurp(dir / "plan.json"));
  const double T = plan["T"].get<double>();
  CHECK(T >= 0.93);
  CHECK(T <= 1.03);
  CHECK(plan["geometric"]["max_violation"].get<double>() <= 1e-6);
  CHECK(plan["time"]["solver"]["status"] == "converged");
  for (const char* f : {"trajectory.csv", "init.svg", "shortest.svg", "fastest.svg"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto traj = parse_csv(slurp(dir / "trajectory.csv"));
  CHECK(traj.header.size() == 12);
  CHECK(traj.header[0] == "t");
  CHECK(traj.header[11] == "omega_p");

  const auto again = scratch("corridor_again");
  REQUIRE(run("plan --scene " + scene("corridor.json") + " --out " + again.string()).code == 0);
  CHECK(slurp(dir / "trajectory.csv") == slurp(again / "trajectory.csv"));
}

TEST_CASE("plan failures and flags") {
  const auto dir = scratch("bad");
  CHECK(run("plan --scene " + scene("goal_in_obstacle.json") + " --out " + dir.string()).code == 3);
  CHECK(run("plan --scene " + (dir / "missing.json").string() + " --out " + dir.string()).code == 2);
  std::ofstream(dir / "broken.json") << "{\"slider\": ";
  CHECK(run("plan --scene " + (dir / "broken.json").string() + " --out " + dir.string()).code == 2);

  const auto open = scratch("open");
  REQUIRE(run("plan --scene " + scene("open_field.json") + " --out " + open.string() + " --skip-time").code == 0);
  const auto plan = nlohmann::json::parse(slurp(open / "plan.json"));
  CHECK(!plan.contains("time"));
  CHECK(std::abs(plan["geometric"]["length"].get<double>() - std::sqrt(128.0)) < 1e-4);
  CHECK(!fs::exists(open / "trajectory.csv"));
}
