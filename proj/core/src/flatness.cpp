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

#include "flatpush/flatness.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "flatpush/errors.hpp"

namespace flatpush {

namespace {

double cross(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

// Heading, contact offset and their first two derivatives along the jet's
// variable, written in terms of the cross product q = zeta' x zeta'' and the
// squared speed S = |zeta'|^2.
struct SliderKinematics {
  double heading;
  double heading_d1;
  double heading_d2;
  double c;
  double c_d1;
  double c_d2;
};

SliderKinematics slider_kinematics(const FlatJet& jet, double beta_sq,
                                   int needed_order) {
  const Vec2& u1 = jet.d1;
  const Vec2& u2 = jet.d2;
  const Vec2& u3 = jet.d3;
  const Vec2& u4 = jet.d4;
  const double S = u1.squaredNorm();
  if (!(std::sqrt(S) >= kSingularSpeed)) {
    std::ostringstream msg;
    msg << "slider jet is singular: |zeta'| = " << std::sqrt(S);
    throw SingularJetError(SingularJetError::Which::kSlider, msg.str());
  }
  const double q = cross(u1, u2);
  const double s = std::sqrt(S);
  const double S32 = S * s;

  SliderKinematics k{};
  k.heading = std::atan2(-u1.x(), u1.y());
  k.heading_d1 = q / S;
  k.c = beta_sq * q / S32;
  if (needed_order < 3) return k;

  const double q1 = cross(u1, u3);
  const double S1 = 2.0 * u1.dot(u2);
  const double S52 = S32 * S;
  k.heading_d2 = (q1 * S - q * S1) / (S * S);
  k.c_d1 = beta_sq * (q1 / S32 - 1.5 * q * S1 / S52);
  if (needed_order < 4) return k;

  const double q2 = cross(u2, u3) + cross(u1, u4);
  const double S2 = 2.0 * (u2.squaredNorm() + u1.dot(u3));
  const double S72 = S52 * S;
  k.c_d2 = beta_sq * (q2 / S32 - 3.0 * q1 * S1 / S52 - 1.5 * q * S2 / S52 +
                      3.75 * q * S1 * S1 / S72);
  return k;
}

void require_order(const FlatJet& jet, int order, const char* what) {
  if (jet.order < order) {
    std::ostringstream msg;
    msg << what << " needs a jet of order " << order << ", got " << jet.order;
    throw DomainError(msg.str());
  }
}

}  // namespace

const Vec2& FlatJet::derivative(int k) const {
  switch (k) {
    case 0:
      return zeta;
    case 1:
      return d1;
    case 2:
      return d2;
    case 3:
      return d3;
    case 4:
      return d4;
    default:
      throw DomainError("flat jet derivative order must be in 0..4");
  }
}

Vec2& FlatJet::derivative(int k) {
  return const_cast<Vec2&>(std::as_const(*this).derivative(k));
}

double unwrap_near(double angle, double reference) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  return angle + kTwoPi * std::round((reference - angle) / kTwoPi);
}

Vec2 project(const FullState& state) {
  return {state.slider.x, state.slider.y};
}

PusherJet pusher_jet(const FlatJet& jet, const SliderParams& params) {
  require_order(jet, 4, "pusher_jet");
  const SliderKinematics k = slider_kinematics(jet, params.beta_sq(), 4);
  const double alpha = params.alpha();
  // e1 points from the contact face towards the pusher rotated by -90 deg;
  // the pusher sits at zeta + alpha e1 + c e2.
  const Vec2 e1(std::sin(k.heading), -std::cos(k.heading));
  const Vec2 e2(std::cos(k.heading), std::sin(k.heading));
  const double w = k.heading_d1;

  PusherJet p;
  p.position = jet.zeta + alpha * e1 + k.c * e2;
  p.d1 = jet.d1 + (alpha * w + k.c_d1) * e2 - k.c * w * e1;
  p.d2 = jet.d2 + (alpha * k.heading_d2 + k.c_d2 - k.c * w * w) * e2 -
         (alpha * w * w + 2.0 * k.c_d1 * w + k.c * k.heading_d2) * e1;
  return p;
}

FullState inflate_state(const FlatJet& jet, const SliderParams& params,
                        std::optional<double> heading_reference) {
  require_order(jet, 2, "inflate_state");
  const int order = jet.order >= 3 ? 3 : 2;
  const SliderKinematics k = slider_kinematics(jet, params.beta_sq(), order);

  FullState out;
  out.slider.x = jet.zeta.x();
  out.slider.y = jet.zeta.y();
  out.slider.theta = heading_reference
                         ? unwrap_near(k.heading, *heading_reference)
                         : k.heading;
  out.slider.c = k.c;

  const double alpha = params.alpha();
  const double st = std::sin(k.heading);
  const double ct = std::cos(k.heading);
  out.pusher.x = jet.zeta.x() + alpha * st + k.c * ct;
  out.pusher.y = jet.zeta.y() - alpha * ct + k.c * st;

  if (order >= 3) {
    const Vec2 e1(st, -ct);
    const Vec2 e2(ct, st);
    const double w = k.heading_d1;
    const Vec2 pd1 = jet.d1 + (alpha * w + k.c_d1) * e2 - k.c * w * e1;
    if (!(pd1.norm() >= kSingularSpeed)) {
      throw SingularJetError(SingularJetError::Which::kPusher,
                             "pusher jet is singular (zero pusher speed)");
    }
    const double heading = std::atan2(-pd1.x(), pd1.y());
    out.pusher.theta = unwrap_near(heading, out.slider.theta);
    out.pusher_heading_known = true;
  }
  return out;
}

InflatedInput inflate_input(const FlatJet& jet, const SliderParams& params) {
  require_order(jet, 4, "inflate_input");
  const SliderKinematics k = slider_kinematics(jet, params.beta_sq(), 4);
  const double speed = jet.d1.norm();

  InflatedInput in;
  const double curvature_term = k.c / params.beta_sq();  // q / S^{3/2}
  in.contact.v_n =
      (1.0 + params.beta_sq() * curvature_term * curvature_term) * speed;
  in.contact.v_t = k.c_d1 + params.alpha() * k.heading_d1;

  const PusherJet p = pusher_jet(jet, params);
  const double ps = p.d1.squaredNorm();
  if (!(std::sqrt(ps) >= kSingularSpeed)) {
    throw SingularJetError(SingularJetError::Which::kPusher,
                           "pusher jet is singular (zero pusher speed)");
  }
  in.car.v = std::sqrt(ps);
  in.car.omega = cross(p.d1, p.d2) / ps;
  in.pusher_heading = std::atan2(-p.d1.x(), p.d1.y());
  return in;
}

}  // namespace flatpush
