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

#include <functional>
#include <string>
#include <vector>

#include "flatpush/flatness.hpp"
#include "flatpush/splines.hpp"
#include "flatpush/timelaw.hpp"

namespace flatpush {

// Flat output as a function of time on [0, T].
using TimePath = std::function<FlatJet(double t)>;

// (2 cos wt, sin wt), w = 2 pi / T.
TimePath ellipse_path(double horizon);
// (2 cos wt, 2 cos wt sin wt), a lemniscate of Gerono.
TimePath lemniscate_path(double horizon);
// Quintic interpolating spline through six waypoints (single segment),
// traversed with tau = t / T.
BSplinePath waypoint_spline();
TimePath waypoint_path(double horizon);

// Names accepted by reference_path: "ellipse", "lemniscate", "waypoints".
std::vector<std::string> reference_path_names();
TimePath reference_path(const std::string& name, double horizon);

// Two half-ellipse lobes joined with matching tangent at the origin:
// (4 cos s, 2 sin s + 2) for s in [0, 3pi/2], (4 cos s, -2 sin s - 2) for
// s in [3pi/2, 3pi], s = 3 pi tau.
PathField two_lobe_path();

// Jet of a spline traversed at constant rate tau = t / T.
FlatJet spline_time_jet(const BSplinePath& path, double t, double horizon);

}  // namespace flatpush
