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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flatpush/geometry.hpp"
#include "flatpush/planner.hpp"
#include "flatpush/splines.hpp"
#include "flatpush/timelaw.hpp"

namespace flatpush {

// Scene file:
//   {"slider": {"a": 1, "b": 1, "r": 0.2, "beta": "beta2"},
//    "start": [0, 0], "goal": [8, 8],
//    "obstacles": [[[x, y], ...], ...],
//    "bounds": {"v_p": 20, "omega_p": 5, "v_n_min": 0},
//    "clearance": 0.01, "init": [[x, y], ...]}
// "beta" is "beta1", "beta2" or a number. Malformed input raises
// DomainError.
Scene parse_scene(const std::string& text);
Scene load_scene(const std::string& filename);

// {"degree": d, "knots": [...], "control_points": [[x, y], ...]}
std::string spline_to_json(const BSplinePath& path);
BSplinePath parse_spline(const std::string& text);
BSplinePath load_spline(const std::string& filename);

std::string geometric_plan_to_json(const GeometricPlan& plan);
std::string plan_to_json(const GeometricPlan& geometric, const TimePlan& time);

// Profile string: "constant[:v0]", "trapezoidal:a0,delta" or
// "curvature:kappa0".
VelocityProfile parse_profile(const std::string& text);

// Shortest round-trip decimal representation.
std::string format_number(double value);

inline constexpr const char* kTrajectoryHeader =
    "t,x_s,y_s,theta_s,c,x_p,y_p,theta_p,v_t,v_n,v_p,omega_p";

void write_trajectory_csv(std::ostream& os,
                          const std::vector<TrajectoryRow>& rows);
void write_trajectory_row(std::ostream& os, const TrajectoryRow& row);

std::string read_file(const std::string& filename);
void write_file(const std::string& filename, const std::string& content);

}  // namespace flatpush
