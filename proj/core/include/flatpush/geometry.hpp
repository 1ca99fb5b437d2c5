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

#include <limits>
#include <vector>

#include "flatpush/model.hpp"

namespace flatpush {

// Simple polygon with counter-clockwise vertices. Clockwise input is
// reversed; degenerate or self-intersecting input throws GeometryError.
class Polygon {
 public:
  explicit Polygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  size_t size() const { return vertices_.size(); }
  double area() const;
  bool is_convex() const;
  Polygon transformed(double angle, const Vec2& offset) const;

 private:
  std::vector<Vec2> vertices_;
};

double signed_area(const std::vector<Vec2>& vertices);

// Splits a simple polygon into convex pieces (ear clipping followed by
// greedy merging of adjacent pieces). Convex input comes back unchanged.
std::vector<Polygon> convex_decompose(const Polygon& polygon);

// Footprint of the slider: a x b rectangle rotated by theta about (x, y).
Polygon slider_polygon(const SliderState& state, const SliderParams& params);

// Signed distance between convex polygons: minimum Euclidean distance when
// disjoint, minus the penetration depth (minimum translation) otherwise.
double convex_distance(const Polygon& p, const Polygon& q);

// Signed distance for arbitrary simple polygons via convex decomposition;
// the most negative piece pair wins.
double poly_distance(const Polygon& p, const Polygon& q);

// Obstacle with its convex pieces computed once.
class Obstacle {
 public:
  explicit Obstacle(Polygon outline);
  const Polygon& outline() const { return outline_; }
  const std::vector<Polygon>& pieces() const { return pieces_; }

 private:
  Polygon outline_;
  std::vector<Polygon> pieces_;
};

// Signed distance from a convex polygon to an obstacle.
double obstacle_distance(const Polygon& convex, const Obstacle& obstacle);

struct InputBounds {
  double v_p = std::numeric_limits<double>::infinity();
  double omega_p = std::numeric_limits<double>::infinity();
  double v_n_min = 0.0;
};

struct Scene {
  std::vector<Obstacle> obstacles;
  SliderParams params = SliderParams::rectangle(1.0, 1.0, 0.2);
  Vec2 start = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
  InputBounds bounds;
  double clearance = 1e-2;
  // Optional waypoints for the initial path (start and goal excluded).
  std::vector<Vec2> init_via;

  void validate() const;
};

}  // namespace flatpush
