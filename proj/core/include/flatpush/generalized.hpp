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
#include <vector>

#include <Eigen/Core>

namespace flatpush {

// Star-shaped slider outline r(phi) around its centroid. phi is measured
// from the slider's -y axis, so the contact point in the slider frame is
// (sin(phi) r, -cos(phi) r).
class RadialGeometry {
 public:
  using Radius = std::function<double(double phi)>;

  // Validates positivity and the centroid conditions, then computes the
  // generalized factor by quadrature. `kinks` lists angles in [0, 2pi)
  // where r is not smooth; they become integration breakpoints.
  RadialGeometry(Radius r, Radius r_prime, std::vector<double> kinks = {});

  static RadialGeometry disc(double radius);
  // Full rectangle outline (a along x, b along y), piecewise in phi.
  static RadialGeometry rectangle(double a, double b);

  double r(double phi) const;
  double r_prime(double phi) const { return r_prime_(phi); }
  double beta_r() const { return beta_r_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  Radius r_;
  Radius r_prime_;
  std::vector<double> breakpoints_;
  double beta_r_ = 0.0;
};

// Area-normalized second moment: sqrt( int r^4/4 dphi / int r^2/2 dphi ).
// Adaptive Gauss-Kronrod with the radial integral done analytically.
double beta_r(const RadialGeometry& geometry);

// Area-weighted centroid of the outline; zero for a valid parametrization.
Eigen::Vector2d centroid_offset(const RadialGeometry& geometry);

struct GeneralizedState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

// Pusher velocity expressed in the contact-normal frame (rotated by phi
// and then by the local surface angle).
struct NormalFrameInput {
  double v_t = 0.0;
  double v_n = 0.0;
};

// Quasi-static kinematics of a point pusher on a general outline. Returns
// (x', y', theta', phi') packed in a GeneralizedState. Uses beta_r from the
// geometry unless `beta_override` is positive.
GeneralizedState generalized_rhs(const GeneralizedState& state,
                                 const NormalFrameInput& input,
                                 const RadialGeometry& geometry,
                                 double beta_override = 0.0);

}  // namespace flatpush
