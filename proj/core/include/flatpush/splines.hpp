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

#include <span>
#include <vector>

#include "flatpush/flatness.hpp"

namespace flatpush {

// Clamped B-spline curve on [0, 1] with 2-D control points. With m
// distinct knots (endpoints included) and degree d there are
// N = m + d - 1 control points.
class BSplinePath {
 public:
  BSplinePath(int degree, std::vector<double> knots,
              std::vector<Vec2> control_points);

  // Uniformly spaced breakpoints, endpoints repeated degree + 1 times.
  static BSplinePath clamped_uniform(int degree, int knot_count,
                                     std::vector<Vec2> control_points);
  static std::vector<double> clamped_uniform_knots(int degree, int knot_count);
  static int control_point_count(int degree, int knot_count) {
    return knot_count + degree - 1;
  }

  int degree() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<Vec2>& control_points() const { return control_points_; }
  // Distinct knot values including 0 and 1.
  std::vector<double> breakpoints() const;

  BSplinePath with_control_points(std::vector<Vec2> control_points) const;

 private:
  int degree_;
  std::vector<double> knots_;
  std::vector<Vec2> control_points_;
};

// Value and derivatives 1..order at tau. Orders above the degree are
// exactly zero.
FlatJet eval_jet(const BSplinePath& path, double tau, int order = 4);

// Arc length by Gauss-Legendre quadrature on each knot span.
double arc_length(const BSplinePath& path);

// Interpolates `waypoints` at chord-length parameters; surplus freedom goes
// to minimizing the bending energy int |zeta''|^2. Throws InfeasibleError
// when the control polygon cannot carry the waypoints.
BSplinePath fit_interpolating(std::span<const Vec2> waypoints, int degree,
                              int knot_count);

// Chord-length parameters in [0, 1] used by fit_interpolating.
std::vector<double> chord_length_parameters(std::span<const Vec2> waypoints);

}  // namespace flatpush
