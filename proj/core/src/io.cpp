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

#include "flatpush/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "flatpush/errors.hpp"

namespace flatpush {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid JSON: ") + e.what());
  }
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw DomainError(std::string(what) + " must be a number");
  return j.get<double>();
}

Vec2 point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) {
    throw DomainError(std::string(what) + " must be an [x, y] pair");
  }
  return {number(j[0], what), number(j[1], what)};
}

std::vector<Vec2> points(const json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string(what) + " must be a list");
  std::vector<Vec2> out;
  for (const auto& p : j) out.push_back(point(p, what));
  return out;
}

json to_json(const Vec2& p) { return json::array({p.x(), p.y()}); }

json to_json(const BSplinePath& path) {
  json cps = json::array();
  for (const Vec2& p : path.control_points()) cps.push_back(to_json(p));
  return {{"degree", path.degree()},
          {"knots", path.knots()},
          {"control_points", cps}};
}

json to_json(const SolverReport& r) {
  return {{"status", to_string(r.status)},
          {"iterations", r.iterations},
          {"kkt_residual", r.kkt_residual},
          {"max_violation", r.max_violation}};
}

json geometric_json(const GeometricPlan& plan) {
  return {{"spline", to_json(plan.path)},
          {"objective", plan.objective},
          {"length", plan.length},
          {"max_violation", plan.residuals.max_violation()},
          {"min_clearance_margin", plan.residuals.min_clearance()},
          {"solver", to_json(plan.solver)}};
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw DomainError("malformed number '" + item + "' in profile");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

Scene parse_scene(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw DomainError("scene must be a JSON object");
  Scene scene;
  try {
    if (j.contains("slider")) {
      const json& s = j.at("slider");
      const double a = number(s.at("a"), "slider.a");
      const double b = number(s.at("b"), "slider.b");
      const double r = s.contains("r") ? number(s.at("r"), "slider.r") : 0.0;
      const json beta = s.value("beta", json("beta2"));
      if (beta.is_number()) {
        scene.params = SliderParams::with_beta(a, b, r, beta.get<double>());
      } else if (beta.is_string()) {
        scene.params = SliderParams::rectangle(
            a, b, r, beta_kind_from_string(beta.get<std::string>()));
      } else {
        throw DomainError("slider.beta must be a name or a number");
      }
    }
    scene.start = point(j.at("start"), "start");
    scene.goal = point(j.at("goal"), "goal");
    if (j.contains("obstacles")) {
      for (const auto& o : j.at("obstacles")) {
        scene.obstacles.emplace_back(Polygon(points(o, "obstacle")));
      }
    }
    if (j.contains("bounds")) {
      const json& b = j.at("bounds");
      if (b.contains("v_p")) scene.bounds.v_p = number(b.at("v_p"), "v_p");
      if (b.contains("omega_p")) {
        scene.bounds.omega_p = number(b.at("omega_p"), "omega_p");
      }
      if (b.contains("v_n_min")) {
        scene.bounds.v_n_min = number(b.at("v_n_min"), "v_n_min");
      }
    }
    if (j.contains("clearance")) {
      scene.clearance = number(j.at("clearance"), "clearance");
    }
    if (j.contains("init")) scene.init_via = points(j.at("init"), "init");
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed scene: ") + e.what());
  } catch (const GeometryError& e) {
    throw DomainError(std::string("malformed obstacle: ") + e.what());
  }
  scene.validate();
  return scene;
}

Scene load_scene(const std::string& filename) {
  return parse_scene(read_file(filename));
}

std::string spline_to_json(const BSplinePath& path) {
  return to_json(path).dump(2) + "\n";
}

BSplinePath parse_spline(const std::string& text) {
  const json j = parse_json(text);
  try {
    const json& s = j.contains("spline") ? j.at("spline") : j;
    return BSplinePath(s.at("degree").get<int>(),
                       s.at("knots").get<std::vector<double>>(),
                       points(s.at("control_points"), "control point"));
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed spline: ") + e.what());
  }
}

BSplinePath load_spline(const std::string& filename) {
  return parse_spline(read_file(filename));
}

std::string geometric_plan_to_json(const GeometricPlan& plan) {
  return json{{"geometric", geometric_json(plan)}}.dump(2) + "\n";
}

std::string plan_to_json(const GeometricPlan& geometric, const TimePlan& time) {
  json t = {{"K", static_cast<int>(time.tau.size()) - 1},
            {"tau", time.tau},
            {"z", time.z},
            {"z1", time.z1},
            {"z2", time.z2},
            {"v", time.v},
            {"t", time.t},
            {"T", time.T},
            {"solver", to_json(time.solver)}};
  json out = {{"geometric", geometric_json(geometric)}, {"time", t},
              {"T", time.T}};
  return out.dump(2) + "\n";
}

VelocityProfile parse_profile(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{}
                                 : split_numbers(text.substr(colon + 1));
  if (name == "constant" && args.size() <= 1) {
    return VelocityProfile::constant(args.empty() ? 1.0 : args[0]);
  }
  if (name == "trapezoidal" && args.size() == 2) {
    return VelocityProfile::trapezoidal(args[0], args[1]);
  }
  if (name == "curvature" && args.size() == 1) {
    return VelocityProfile::curvature(args[0]);
  }
  throw DomainError("unknown profile '" + text + "'");
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_trajectory_row(std::ostream& os, const TrajectoryRow& r) {
  const double vals[] = {r.t,         r.slider.x,  r.slider.y, r.slider.theta,
                         r.slider.c,  r.pusher.x,  r.pusher.y, r.pusher.theta,
                         r.contact.v_t, r.contact.v_n, r.car.v, r.car.omega};
  for (size_t i = 0; i < std::size(vals); ++i) {
    if (i) os << ',';
    os << format_number(vals[i]);
  }
  os << '\n';
}

void write_trajectory_csv(std::ostream& os,
                          const std::vector<TrajectoryRow>& rows) {
  os << kTrajectoryHeader << '\n';
  for (const auto& r : rows) write_trajectory_row(os, r);
}

std::string read_file(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw DomainError("cannot read " + filename);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& filename, const std::string& content) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw DomainError("cannot write " + filename);
  out << content;
}

}  // namespace flatpush
