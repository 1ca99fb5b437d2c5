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

#include "flatpush/generalized.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "flatpush/errors.hpp"

namespace flatpush {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kQuadratureTolerance = 1e-10;

// Integrates f over [0, 2pi) split at the geometry's breakpoints.
template <class F>
double integrate_periodic(const std::vector<double>& breakpoints, F f) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double error = 0.0;
    total += Quad::integrate(f, breakpoints[i], breakpoints[i + 1], 15,
                             kQuadratureTolerance, &error);
    if (!std::isfinite(total)) {
      throw NumericError("radial quadrature produced a non-finite value");
    }
  }
  return total;
}

double wrap(double phi) {
  phi = std::fmod(phi, kTwoPi);
  return phi < 0.0 ? phi + kTwoPi : phi;
}

}  // namespace

RadialGeometry::RadialGeometry(Radius r, Radius r_prime,
                               std::vector<double> kinks)
    : r_(std::move(r)), r_prime_(std::move(r_prime)) {
  breakpoints_.push_back(0.0);
  for (double k : kinks) {
    const double w = wrap(k);
    if (w > 0.0) breakpoints_.push_back(w);
  }
  breakpoints_.push_back(kTwoPi);
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()),
                     breakpoints_.end());

  constexpr int kSamples = 720;
  double r_max = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double value = r_(kTwoPi * i / kSamples);
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw GeometryError("radial outline must be positive and finite");
    }
    r_max = std::max(r_max, value);
  }
  const Eigen::Vector2d offset = centroid_offset(*this);
  if (offset.norm() > 1e-8 * r_max) {
    throw GeometryError("radial outline is not centred on its centroid");
  }
  beta_r_ = flatpush::beta_r(*this);
}

RadialGeometry RadialGeometry::disc(double radius) {
  if (!(radius > 0.0)) throw GeometryError("disc radius must be positive");
  return RadialGeometry([radius](double) { return radius; },
                        [](double) { return 0.0; });
}

RadialGeometry RadialGeometry::rectangle(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw GeometryError("rectangle dimensions must be positive");
  }
  // Faces at y = -b/2 (phi near 0), x = a/2, y = b/2, x = -a/2.
  auto r = [a, b](double phi) {
    const double s = std::abs(std::sin(phi));
    const double c = std::abs(std::cos(phi));
    const double to_end_face = c > 0.0 ? b / (2.0 * c) : INFINITY;
    const double to_side_face = s > 0.0 ? a / (2.0 * s) : INFINITY;
    return std::min(to_end_face, to_side_face);
  };
  auto r_prime = [a, b](double phi) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const double to_end_face = std::abs(c) > 0.0 ? b / (2.0 * std::abs(c))
                                                 : INFINITY;
    const double to_side_face = std::abs(s) > 0.0 ? a / (2.0 * std::abs(s))
                                                  : INFINITY;
    if (to_end_face <= to_side_face) {
      return b * s / (2.0 * c * c) * (c > 0.0 ? 1.0 : -1.0);
    }
    return -a * c / (2.0 * s * s) * (s > 0.0 ? 1.0 : -1.0);
  };
  const double corner = std::atan2(a, b);
  return RadialGeometry(
      r, r_prime,
      {corner, std::numbers::pi - corner, std::numbers::pi + corner,
       kTwoPi - corner});
}

double RadialGeometry::r(double phi) const { return r_(phi); }

double beta_r(const RadialGeometry& geometry) {
  const double second = integrate_periodic(
      geometry.breakpoints(), [&](double phi) {
        const double r = geometry.r(phi);
        return r * r * r * r / 4.0;
      });
  const double area = integrate_periodic(geometry.breakpoints(),
                                         [&](double phi) {
                                           const double r = geometry.r(phi);
                                           return r * r / 2.0;
                                         });
  if (!(area > 0.0)) throw NumericError("radial outline has zero area");
  return std::sqrt(second / area);
}

Eigen::Vector2d centroid_offset(const RadialGeometry& geometry) {
  const auto& bp = geometry.breakpoints();
  const double area = integrate_periodic(bp, [&](double phi) {
    const double r = geometry.r(phi);
    return r * r / 2.0;
  });
  const double mx = integrate_periodic(bp, [&](double phi) {
    const double r = geometry.r(phi);
    return r * r * r / 3.0 * std::sin(phi);
  });
  const double my = integrate_periodic(bp, [&](double phi) {
    const double r = geometry.r(phi);
    return -r * r * r / 3.0 * std::cos(phi);
  });
  return Eigen::Vector2d(mx, my) / area;
}

GeneralizedState generalized_rhs(const GeneralizedState& state,
                                 const NormalFrameInput& input,
                                 const RadialGeometry& geometry,
                                 double beta_override) {
  const double r = geometry.r(state.phi);
  if (!(r > 0.0)) throw GeometryError("radial outline must be positive");
  const double rp = geometry.r_prime(state.phi);
  const double beta = beta_override > 0.0 ? beta_override : geometry.beta_r();
  const double b2 = beta * beta;

  const double arc = std::sqrt(r * r + rp * rp);  // |d p_contact / d phi|
  const double local = std::atan2(-rp, r);        // surface normal tilt
  const double denom = b2 * (r * r + rp * rp) + r * r * rp * rp;
  const double translate = b2 * (r * r + rp * rp) / denom * input.v_n;
  const double heading = local + state.phi + state.theta;

  GeneralizedState rate;
  rate.x = -translate * std::sin(heading);
  rate.y = translate * std::cos(heading);
  rate.theta = r * rp * arc / denom * input.v_n;
  rate.phi = input.v_t / arc - r * r * r * rp / (arc * denom) * input.v_n;
  return rate;
}

}  // namespace flatpush
