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

#include "flatpush/reference_paths.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "flatpush/errors.hpp"

namespace flatpush {

namespace {

constexpr double kPi = std::numbers::pi;

// Jet of (A cos(wt + p), B sin(wt + p)) style components via complex
// rotation: derivative k of cos is cos(x + k pi/2).
double dcos(double x, double w, int k) {
  return std::pow(w, k) * std::cos(x + k * kPi / 2.0);
}
double dsin(double x, double w, int k) {
  return std::pow(w, k) * std::sin(x + k * kPi / 2.0);
}

}  // namespace

TimePath ellipse_path(double horizon) {
  const double w = 2.0 * kPi / horizon;
  return [w](double t) {
    FlatJet j;
    const double x = w * t;
    for (int k = 0; k <= 4; ++k) {
      j.derivative(k) = Vec2(2.0 * dcos(x, w, k), dsin(x, w, k));
    }
    return j;
  };
}

TimePath lemniscate_path(double horizon) {
  const double w = 2.0 * kPi / horizon;
  return [w](double t) {
    // 2 cos x sin x = sin 2x
    FlatJet j;
    const double x = w * t;
    for (int k = 0; k <= 4; ++k) {
      j.derivative(k) = Vec2(2.0 * dcos(x, w, k), dsin(2.0 * x, 2.0 * w, k));
    }
    return j;
  };
}

BSplinePath waypoint_spline() {
  static const std::array<Vec2, 6> way = {
      Vec2(-2, -1), Vec2(-2, 1), Vec2(0, 1),
      Vec2(0, -1),  Vec2(2, -1), Vec2(2, 1)};
  return fit_interpolating(way, 5, 2);
}

FlatJet spline_time_jet(const BSplinePath& path, double t, double horizon) {
  FlatJet g = eval_jet(path, std::clamp(t / horizon, 0.0, 1.0), 4);
  double f = 1.0;
  for (int k = 1; k <= 4; ++k) {
    f /= horizon;
    g.derivative(k) *= f;
  }
  return g;
}

TimePath waypoint_path(double horizon) {
  const BSplinePath path = waypoint_spline();
  return [path, horizon](double t) {
    return spline_time_jet(path, t, horizon);
  };
}

std::vector<std::string> reference_path_names() {
  return {"ellipse", "lemniscate", "waypoints"};
}

TimePath reference_path(const std::string& name, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (name == "ellipse") return ellipse_path(horizon);
  if (name == "lemniscate") return lemniscate_path(horizon);
  if (name == "waypoints") return waypoint_path(horizon);
  throw DomainError("unknown reference path '" + name + "'");
}

PathField two_lobe_path() {
  PathField field;
  field.breakpoints = {0.0, 0.5, 1.0};
  field.jet = [](double tau) {
    if (tau < -1e-12 || tau > 1.0 + 1e-12) {
      throw DomainError("path coordinate outside [0, 1]");
    }
    const double w = 3.0 * kPi;
    const double s = w * tau;
    const double sign = tau <= 0.5 ? 1.0 : -1.0;
    FlatJet j;
    for (int k = 0; k <= 4; ++k) {
      j.derivative(k) = Vec2(4.0 * dcos(s, w, k), sign * 2.0 * dsin(s, w, k));
    }
    j.zeta.y() += sign * 2.0;
    return j;
  };
  return field;
}

}  // namespace flatpush
