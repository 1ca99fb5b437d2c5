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

#include "flatpush/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "flatpush/errors.hpp"

namespace flatpush {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return cross(b - a, c - a);
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                        const Vec2& q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

// Minimum distance over all edge pairs; 0 when any pair of edges touches.
double edge_pair_distance(const Polygon& p, const Polygon& q) {
  const auto& pv = p.vertices();
  const auto& qv = q.vertices();
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pv.size(); ++i) {
    const Vec2& a = pv[i];
    const Vec2& b = pv[(i + 1) % pv.size()];
    for (size_t j = 0; j < qv.size(); ++j) {
      const Vec2& c = qv[j];
      const Vec2& d = qv[(j + 1) % qv.size()];
      if (segments_intersect(a, b, c, d)) return 0.0;
      best = std::min({best, point_segment_distance(a, c, d),
                       point_segment_distance(b, c, d),
                       point_segment_distance(c, a, b),
                       point_segment_distance(d, a, b)});
    }
  }
  return best;
}

Vec2 support(const std::vector<Vec2>& vertices, const Vec2& dir) {
  size_t best = 0;
  double best_dot = vertices[0].dot(dir);
  for (size_t i = 1; i < vertices.size(); ++i) {
    const double d = vertices[i].dot(dir);
    if (d > best_dot) {
      best_dot = d;
      best = i;
    }
  }
  return vertices[best];
}

// Largest separating gap over the edge normals of both polygons; the
// smallest overlap is reported through `min_overlap` (penetration depth
// when nothing separates).
double max_axis_gap(const Polygon& p, const Polygon& q, double* min_overlap) {
  double best_gap = -std::numeric_limits<double>::infinity();
  double overlap = std::numeric_limits<double>::infinity();
  for (const Polygon* owner : {&p, &q}) {
    const auto& v = owner->vertices();
    for (size_t i = 0; i < v.size(); ++i) {
      const Vec2 e = v[(i + 1) % v.size()] - v[i];
      const Vec2 n = Vec2(e.y(), -e.x()).normalized();
      double pmin = INFINITY, pmax = -INFINITY, qmin = INFINITY, qmax = -INFINITY;
      for (const Vec2& x : p.vertices()) {
        const double s = n.dot(x);
        pmin = std::min(pmin, s);
        pmax = std::max(pmax, s);
      }
      for (const Vec2& x : q.vertices()) {
        const double s = n.dot(x);
        qmin = std::min(qmin, s);
        qmax = std::max(qmax, s);
      }
      const double gap = std::max(qmin - pmax, pmin - qmax);
      best_gap = std::max(best_gap, gap);
      overlap = std::min(overlap, -gap);
    }
  }
  if (min_overlap != nullptr) *min_overlap = overlap;
  return best_gap;
}

// GJK distance between disjoint convex polygons. Returns a negative value
// if the iteration did not settle.
double gjk_distance(const Polygon& p, const Polygon& q) {
  const auto& pv = p.vertices();
  const auto& qv = q.vertices();
  const auto support_diff = [&](const Vec2& d) {
    return Vec2(support(pv, d) - support(qv, -d));
  };

  std::vector<Vec2> simplex{pv[0] - qv[0]};
  Vec2 v = simplex[0];
  for (int iter = 0; iter < 64; ++iter) {
    const double vv = v.squaredNorm();
    if (vv == 0.0) return 0.0;
    const Vec2 w = support_diff(-v);
    if (vv - v.dot(w) <= 1e-14 * vv) return std::sqrt(vv);
    for (const Vec2& s : simplex) {
      if ((s - w).squaredNorm() <= 1e-28) return std::sqrt(vv);
    }
    simplex.push_back(w);

    if (simplex.size() == 2) {
      const Vec2 a = simplex[0];
      const Vec2 ab = simplex[1] - a;
      const double t = std::clamp(-a.dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      v = a + t * ab;
      if (t == 0.0) simplex = {simplex[0]};
      else if (t == 1.0) simplex = {simplex[1]};
    } else {
      const Vec2 a = simplex[0], b = simplex[1], c = simplex[2];
      const double area = orient(a, b, c);
      const double s0 = orient(Vec2::Zero(), b, c);
      const double s1 = orient(a, Vec2::Zero(), c);
      const double s2 = orient(a, b, Vec2::Zero());
      if ((area > 0 && s0 >= 0 && s1 >= 0 && s2 >= 0) ||
          (area < 0 && s0 <= 0 && s1 <= 0 && s2 <= 0)) {
        return 0.0;
      }
      // Closest feature is one of the edges.
      double best = INFINITY;
      std::vector<Vec2> next;
      for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
        const Vec2 e0 = simplex[i];
        const Vec2 ed = simplex[j] - e0;
        const double t = std::clamp(-e0.dot(ed) / ed.squaredNorm(), 0.0, 1.0);
        const Vec2 cand = e0 + t * ed;
        if (cand.squaredNorm() < best) {
          best = cand.squaredNorm();
          v = cand;
          if (t == 0.0) next = {simplex[i]};
          else if (t == 1.0) next = {simplex[j]};
          else next = {simplex[i], simplex[j]};
        }
      }
      simplex = next;
    }
  }
  return -1.0;
}

std::vector<Vec2> make_ccw(std::vector<Vec2> v) {
  if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
  return v;
}

bool is_convex_ring(const std::vector<Vec2>& v) {
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    if (orient(v[i], v[(i + 1) % n], v[(i + 2) % n]) < -1e-12) return false;
  }
  return true;
}

bool point_in_triangle(const Vec2& p, const Vec2& a, const Vec2& b,
                       const Vec2& c) {
  return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

}  // namespace

double signed_area(const std::vector<Vec2>& v) {
  double twice = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    twice += cross(v[i], v[(i + 1) % v.size()]);
  }
  return 0.5 * twice;
}

Polygon::Polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) {
    throw GeometryError("polygon needs at least three vertices");
  }
  for (const Vec2& p : vertices) {
    if (!p.allFinite()) throw GeometryError("polygon vertex is not finite");
  }
  vertices_ = make_ccw(std::move(vertices));
  const double a = signed_area(vertices_);
  double extent = 0.0;
  for (const Vec2& p : vertices_) {
    extent = std::max(extent, (p - vertices_[0]).norm());
  }
  if (!(a > 1e-12 * extent * extent)) {
    throw GeometryError("polygon is degenerate (zero area)");
  }
  const size_t n = vertices_.size();
  for (size_t i = 0; i < n; ++i) {
    if ((vertices_[i] - vertices_[(i + 1) % n]).norm() == 0.0) {
      throw GeometryError("polygon has repeated vertices");
    }
    for (size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(vertices_[i], vertices_[(i + 1) % n],
                             vertices_[j], vertices_[(j + 1) % n])) {
        throw GeometryError("polygon is self-intersecting");
      }
    }
  }
}

double Polygon::area() const { return signed_area(vertices_); }

bool Polygon::is_convex() const { return is_convex_ring(vertices_); }

Polygon Polygon::transformed(double angle, const Vec2& offset) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::vector<Vec2> out;
  out.reserve(vertices_.size());
  for (const Vec2& p : vertices_) {
    out.emplace_back(c * p.x() - s * p.y() + offset.x(),
                     s * p.x() + c * p.y() + offset.y());
  }
  return Polygon(std::move(out));
}

std::vector<Polygon> convex_decompose(const Polygon& polygon) {
  if (polygon.is_convex()) return {polygon};
  const auto& v = polygon.vertices();

  // Ear clipping into triangles (vertex index triples).
  std::vector<std::vector<int>> pieces;
  std::vector<int> ring(v.size());
  for (size_t i = 0; i < v.size(); ++i) ring[i] = static_cast<int>(i);
  int guard = 0;
  while (ring.size() > 3) {
    bool clipped = false;
    const size_t n = ring.size();
    for (size_t i = 0; i < n; ++i) {
      const int a = ring[(i + n - 1) % n];
      const int b = ring[i];
      const int c = ring[(i + 1) % n];
      if (orient(v[a], v[b], v[c]) <= 0) continue;
      bool empty = true;
      for (int k : ring) {
        if (k == a || k == b || k == c) continue;
        if (point_in_triangle(v[k], v[a], v[b], v[c])) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      pieces.push_back({a, b, c});
      ring.erase(ring.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped || ++guard > 10000) {
      throw GeometryError("convex decomposition failed (no ear found)");
    }
  }
  pieces.push_back(ring);

  // Greedy merge across shared diagonals while the union stays convex.
  bool merged = true;
  while (merged) {
    merged = false;
    for (size_t i = 0; i < pieces.size() && !merged; ++i) {
      for (size_t j = i + 1; j < pieces.size() && !merged; ++j) {
        auto& pi = pieces[i];
        auto& pj = pieces[j];
        for (size_t a = 0; a < pi.size() && !merged; ++a) {
          const int u = pi[a];
          const int w = pi[(a + 1) % pi.size()];
          for (size_t b = 0; b < pj.size(); ++b) {
            if (pj[b] != w || pj[(b + 1) % pj.size()] != u) continue;
            // Splice pj into pi along the shared edge (u, w).
            std::vector<int> joined;
            for (size_t k = 0; k <= a; ++k) joined.push_back(pi[k]);
            for (size_t k = 2; k < pj.size(); ++k) {
              joined.push_back(pj[(b + k) % pj.size()]);
            }
            for (size_t k = a + 1; k < pi.size(); ++k) joined.push_back(pi[k]);
            std::vector<Vec2> pts;
            for (int idx : joined) pts.push_back(v[idx]);
            if (is_convex_ring(pts)) {
              pi = joined;
              pieces.erase(pieces.begin() + static_cast<long>(j));
              merged = true;
            }
            break;
          }
        }
      }
    }
  }

  std::vector<Polygon> out;
  for (const auto& piece : pieces) {
    std::vector<Vec2> pts;
    for (int idx : piece) pts.push_back(v[idx]);
    out.emplace_back(std::move(pts));
  }
  return out;
}

Polygon slider_polygon(const SliderState& state, const SliderParams& params) {
  const double ha = params.a() / 2.0;
  const double hb = params.b() / 2.0;
  const double c = std::cos(state.theta);
  const double s = std::sin(state.theta);
  std::vector<Vec2> corners;
  corners.reserve(4);
  for (const auto& [lx, ly] :
       {std::pair{-ha, -hb}, std::pair{ha, -hb}, std::pair{ha, hb},
        std::pair{-ha, hb}}) {
    corners.emplace_back(state.x + c * lx - s * ly, state.y + s * lx + c * ly);
  }
  return Polygon(std::move(corners));
}

double convex_distance(const Polygon& p, const Polygon& q) {
  double overlap = 0.0;
  const double gap = max_axis_gap(p, q, &overlap);
  if (gap <= 0.0) return -overlap;
  const double d = gjk_distance(p, q);
  // The separating gap is a lower bound on the true distance.
  if (d < 0.0 || d < gap - 1e-12) return edge_pair_distance(p, q);
  return d;
}

double poly_distance(const Polygon& p, const Polygon& q) {
  if (p.is_convex() && q.is_convex()) return convex_distance(p, q);
  double best = std::numeric_limits<double>::infinity();
  for (const Polygon& a : convex_decompose(p)) {
    for (const Polygon& b : convex_decompose(q)) {
      best = std::min(best, convex_distance(a, b));
    }
  }
  return best;
}

Obstacle::Obstacle(Polygon outline)
    : outline_(std::move(outline)), pieces_(convex_decompose(outline_)) {}

double obstacle_distance(const Polygon& convex, const Obstacle& obstacle) {
  double best = std::numeric_limits<double>::infinity();
  for (const Polygon& piece : obstacle.pieces()) {
    best = std::min(best, convex_distance(convex, piece));
  }
  return best;
}

void Scene::validate() const {
  if (!(clearance > 0.0)) throw DomainError("scene clearance must be positive");
  if (!start.allFinite() || !goal.allFinite()) {
    throw DomainError("scene start and goal must be finite");
  }
  if (!(bounds.v_p > 0.0) || !(bounds.omega_p > 0.0)) {
    throw DomainError("input bounds must be positive");
  }
  if (!std::isfinite(bounds.v_n_min)) {
    throw DomainError("v_n lower bound must be finite");
  }
}

}  // namespace flatpush
