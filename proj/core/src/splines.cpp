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

#include "flatpush/splines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "flatpush/errors.hpp"

namespace flatpush {

namespace {

constexpr double kTauSlack = 1e-12;

int find_span(const std::vector<double>& knots, int degree, int count,
              double u) {
  const int n = count - 1;
  if (u >= knots[n + 1]) return n;
  if (u <= knots[degree]) return degree;
  int low = degree;
  int high = n + 1;
  int mid = (low + high) / 2;
  while (u < knots[mid] || u >= knots[mid + 1]) {
    if (u < knots[mid]) {
      high = mid;
    } else {
      low = mid;
    }
    mid = (low + high) / 2;
  }
  return mid;
}

// Non-vanishing basis functions and their derivatives at u (Piegl &
// Tiller, algorithm A2.3). ders(k, j) is the k-th derivative of
// N_{span-degree+j}.
Eigen::MatrixXd basis_derivatives(const std::vector<double>& U, int span,
                                  double u, int p, int n) {
  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = u - U[span + 1 - j];
    right[j] = U[span + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }

  Eigen::MatrixXd ders = Eigen::MatrixXd::Zero(n + 1, p + 1);
  for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0;
    int s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= n; ++k) {
      double d = 0.0;
      const int rk = r - k;
      const int pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= n; ++k) {
    ders.row(k) *= factor;
    factor *= (p - k);
  }
  return ders;
}

}  // namespace

BSplinePath::BSplinePath(int degree, std::vector<double> knots,
                         std::vector<Vec2> control_points)
    : degree_(degree),
      knots_(std::move(knots)),
      control_points_(std::move(control_points)) {
  if (degree_ < 1) throw DomainError("spline degree must be >= 1");
  const size_t n = control_points_.size();
  if (n < static_cast<size_t>(degree_) + 1) {
    throw DomainError("spline needs at least degree + 1 control points");
  }
  if (knots_.size() != n + degree_ + 1) {
    std::ostringstream msg;
    msg << "knot vector has " << knots_.size() << " entries, expected "
        << n + degree_ + 1;
    throw DomainError(msg.str());
  }
  if (!std::is_sorted(knots_.begin(), knots_.end())) {
    throw DomainError("knot vector must be non-decreasing");
  }
  for (int i = 0; i <= degree_; ++i) {
    if (knots_[i] != 0.0 || knots_[knots_.size() - 1 - i] != 1.0) {
      throw DomainError("knot vector must be clamped on [0, 1]");
    }
  }
}

std::vector<double> BSplinePath::clamped_uniform_knots(int degree,
                                                       int knot_count) {
  if (knot_count < 2) throw DomainError("need at least 2 knots (0 and 1)");
  std::vector<double> knots(degree + 1, 0.0);
  const int interior = knot_count - 2;
  for (int i = 1; i <= interior; ++i) {
    knots.push_back(static_cast<double>(i) / (interior + 1));
  }
  knots.insert(knots.end(), degree + 1, 1.0);
  return knots;
}

BSplinePath BSplinePath::clamped_uniform(int degree, int knot_count,
                                         std::vector<Vec2> control_points) {
  if (static_cast<int>(control_points.size()) !=
      control_point_count(degree, knot_count)) {
    std::ostringstream msg;
    msg << "(knots, degree) = (" << knot_count << ", " << degree
        << ") needs " << control_point_count(degree, knot_count)
        << " control points, got " << control_points.size();
    throw DomainError(msg.str());
  }
  return BSplinePath(degree, clamped_uniform_knots(degree, knot_count),
                     std::move(control_points));
}

std::vector<double> BSplinePath::breakpoints() const {
  std::vector<double> out;
  for (double k : knots_) {
    if (out.empty() || k > out.back()) out.push_back(k);
  }
  return out;
}

BSplinePath BSplinePath::with_control_points(
    std::vector<Vec2> control_points) const {
  return BSplinePath(degree_, knots_, std::move(control_points));
}

FlatJet eval_jet(const BSplinePath& path, double tau, int order) {
  if (!(tau >= -kTauSlack && tau <= 1.0 + kTauSlack)) {
    std::ostringstream msg;
    msg << "path coordinate " << tau << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  if (order < 0 || order > 4) throw DomainError("jet order must be in 0..4");
  tau = std::clamp(tau, 0.0, 1.0);

  const int p = path.degree();
  const auto& cps = path.control_points();
  const int span =
      find_span(path.knots(), p, static_cast<int>(cps.size()), tau);
  const int n = std::min(order, p);
  const Eigen::MatrixXd ders = basis_derivatives(path.knots(), span, tau, p, n);

  FlatJet jet;
  jet.order = order;
  for (int k = 0; k <= n; ++k) {
    Vec2 acc = Vec2::Zero();
    for (int j = 0; j <= p; ++j) acc += ders(k, j) * cps[span - p + j];
    jet.derivative(k) = acc;
  }
  return jet;
}

double arc_length(const BSplinePath& path) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const auto bp = path.breakpoints();
  double total = 0.0;
  for (size_t i = 0; i + 1 < bp.size(); ++i) {
    total += Rule::integrate(
        [&](double tau) { return eval_jet(path, tau, 1).d1.norm(); }, bp[i],
        bp[i + 1]);
  }
  return total;
}

std::vector<double> chord_length_parameters(std::span<const Vec2> waypoints) {
  std::vector<double> params(waypoints.size(), 0.0);
  for (size_t i = 1; i < waypoints.size(); ++i) {
    params[i] = params[i - 1] + (waypoints[i] - waypoints[i - 1]).norm();
  }
  const double total = params.back();
  if (!(total > 0.0)) throw DomainError("waypoints are all coincident");
  for (double& p : params) p /= total;
  params.back() = 1.0;
  return params;
}

BSplinePath fit_interpolating(std::span<const Vec2> waypoints, int degree,
                              int knot_count) {
  if (waypoints.size() < 2) throw DomainError("need at least two waypoints");
  const int n = BSplinePath::control_point_count(degree, knot_count);
  const int w = static_cast<int>(waypoints.size());
  if (n < w) {
    std::ostringstream msg;
    msg << "too few control points: " << n << " for "
        << w << " waypoints";
    throw InfeasibleError(msg.str());
  }
  const auto params = chord_length_parameters(waypoints);
  const auto knots = BSplinePath::clamped_uniform_knots(degree, knot_count);
  std::vector<Vec2> zeros(n, Vec2::Zero());
  const BSplinePath basis_path(degree, knots, zeros);

  // Collocation matrix A(i, j) = B_j(t_i).
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(w, n);
  for (int i = 0; i < w; ++i) {
    const int span = find_span(knots, degree, n, params[i]);
    const Eigen::MatrixXd d = basis_derivatives(knots, span, params[i], degree, 0);
    for (int j = 0; j <= degree; ++j) A(i, span - degree + j) = d(0, j);
  }

  // Bending-energy Gram matrix Q(j, l) = int B_j'' B_l''.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  if (degree >= 2) {
    using Rule = boost::math::quadrature::gauss<double, 10>;
    const auto bp = basis_path.breakpoints();
    for (size_t s = 0; s + 1 < bp.size(); ++s) {
      const double lo = bp[s];
      const double hi = bp[s + 1];
      const double half = 0.5 * (hi - lo);
      const double mid = 0.5 * (hi + lo);
      const auto& x = Rule::abscissa();
      const auto& wt = Rule::weights();
      for (size_t k = 0; k < x.size(); ++k) {
        for (int sign : {-1, 1}) {
          if (x[k] == 0.0 && sign < 0) continue;
          const double u = mid + sign * half * x[k];
          const int span = find_span(knots, degree, n, u);
          const Eigen::MatrixXd d = basis_derivatives(knots, span, u, degree, 2);
          for (int j = 0; j <= degree; ++j) {
            for (int l = 0; l <= degree; ++l) {
              Q(span - degree + j, span - degree + l) +=
                  half * wt[k] * d(2, j) * d(2, l);
            }
          }
        }
      }
    }
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + w, n + w);
  kkt.topLeftCorner(n, n) = Q;
  kkt.topRightCorner(n, w) = A.transpose();
  kkt.bottomLeftCorner(w, n) = A;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + w, 2);
  for (int i = 0; i < w; ++i) rhs.row(n + i) = waypoints[i].transpose();

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (lu.rank() < n + w) {
    throw InfeasibleError(
        "interpolation system is singular for these waypoint parameters");
  }
  const Eigen::MatrixXd sol = lu.solve(rhs);
  std::vector<Vec2> cps(n);
  for (int j = 0; j < n; ++j) cps[j] = sol.row(j).transpose();

  BSplinePath out(degree, knots, std::move(cps));
  for (int i = 0; i < w; ++i) {
    const double err = (eval_jet(out, params[i], 0).zeta - waypoints[i]).norm();
    if (!(err < 1e-9 * std::max(1.0, waypoints[i].norm()))) {
      throw InfeasibleError("interpolation residual too large");
    }
  }
  return out;
}

}  // namespace flatpush
