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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "flatpush/errors.hpp"
#include "flatpush/flatness.hpp"
#include "flatpush/reference_paths.hpp"
#include "oracles.hpp"

namespace fp = flatpush;
using fp::Vec2;

namespace {

fp::FlatJet circle(double R, double t) {
  fp::FlatJet j;
  const double c = std::cos(t), s = std::sin(t);
  j.zeta = R * Vec2(c, s);
  j.d1 = R * Vec2(-s, c);
  j.d2 = R * Vec2(-c, -s);
  j.d3 = R * Vec2(s, -c);
  j.d4 = R * Vec2(c, s);
  return j;
}

fp::FlatJet line(double t) {
  fp::FlatJet j;
  j.zeta = Vec2(0, t);
  j.d1 = Vec2(0, 1);
  return j;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("projection") {
  fp::FullState s;
  s.slider = {1, 2, 0.3, 0.1};
  CHECK(fp::project(s) == Vec2(1, 2));
  CHECK(fp::project(fp::FullState{}) == Vec2(0, 0));
  const auto j = circle(2.0, 0.4);
  CHECK(fp::project(fp::inflate_state(j, fp::SliderParams::rectangle(1, 1, 0.2))) == j.zeta);
}

TEST_CASE("circle closed forms") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const double R = 3.0;
  for (double t : {0.1, 1.0, 2.5}) {
    const auto s = fp::inflate_state(circle(R, t), p);
    CHECK(std::abs(s.slider.theta - t) < 1e-14);
    CHECK(std::abs(s.slider.c - p.beta_sq() / R) < 1e-14);
    const auto in = fp::inflate_input(circle(R, t), p);
    CHECK(std::abs(in.contact.v_n - (R + p.beta_sq() / R)) < 1e-13);
    CHECK(std::abs(in.contact.v_t - p.alpha()) < 1e-13);
  }
}

TEST_CASE("straight line closed forms") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const auto s = fp::inflate_state(line(2.0), p);
  CHECK(s.slider.theta == 0.0);
  CHECK(s.slider.c == 0.0);
  CHECK(std::abs(s.pusher.x) < 1e-15);
  CHECK(std::abs(s.pusher.y - (2.0 - p.alpha())) < 1e-15);
  const auto in = fp::inflate_input(line(2.0), p);
  CHECK(in.contact.v_n == 1.0);
  CHECK(in.contact.v_t == 0.0);
  CHECK(in.car.v == 1.0);
  CHECK(in.car.omega == 0.0);
}

TEST_CASE("ellipse at t = 0 against hand derivatives") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const auto s = fp::inflate_state(fp::ellipse_path(20.0)(0.0), p);
  // zeta' = (0, w), zeta'' = (-2 w^2, 0)
  CHECK(std::abs(s.slider.theta) < 1e-15);
  CHECK(std::abs(s.slider.c - 2 * p.beta_sq()) < 1e-14);
  CHECK(std::abs(s.pusher.x - (2 + 2 * p.beta_sq())) < 1e-14);
  CHECK(std::abs(s.pusher.y + p.alpha()) < 1e-14);
}

TEST_CASE("singular jets") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  fp::FlatJet j;
  try {
    fp::inflate_state(j, p);
    FAIL("expected SingularJetError");
  } catch (const fp::SingularJetError& e) {
    CHECK(e.which() == fp::SingularJetError::Which::kSlider);
  }
  fp::FlatJet low = line(0.0);
  low.order = 1;
  CHECK_THROWS_AS(fp::inflate_state(low, p), fp::DomainError);
}

TEST_CASE("rigid offset identity and heading continuity") {
  const auto p = fp::SliderParams::rectangle(1, 1.2, 0.15);
  const auto path = fp::lemniscate_path(20.0);
  double prev = 0.0;
  bool first = true;
  for (int i = 0; i <= 400; ++i) {
    const double t = 20.0 * i / 400;
    const auto s = first ? fp::inflate_state(path(t), p)
                         : fp::inflate_state(path(t), p, prev);
    const double d2 = (Vec2(s.pusher.x, s.pusher.y) - Vec2(s.slider.x, s.slider.y)).squaredNorm();
    CHECK(std::abs(d2 - (s.slider.c * s.slider.c + p.alpha() * p.alpha())) < 1e-12);
    if (!first) CHECK(std::abs(s.slider.theta - prev) < 0.5);
    prev = s.slider.theta;
    first = false;
  }
}

TEST_CASE("inputs agree with finite differences of the inflated state") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const double T = 20.0;
  const auto path = fp::lemniscate_path(T);
  for (int i = 0; i < 16; ++i) {
    const double t = 0.3 + (T - 0.6) * i / 15.0;
    const auto centre = fp::inflate_state(path(t), p);
    auto state_at = [&](double s) {
      const auto st = fp::inflate_state(path(s), p, centre.slider.theta);
      const double heading = fp::unwrap_near(st.pusher.theta, centre.pusher.theta);
      Eigen::VectorXd v(7);
      v << st.slider.x, st.slider.y, st.slider.theta, st.slider.c, st.pusher.x,
          st.pusher.y, heading;
      return v;
    };
    const auto d = oracle::fd_derivatives(state_at, t, 0.05);
    const auto in = fp::inflate_input(path(t), p);
    const auto rate = fp::slider_rhs(centre.slider, in.contact, p);
    const Eigen::Vector4d fd_rate = d[1].head<4>();
    CHECK(rel(rate.x, fd_rate[0]) < 1e-6);
    CHECK(rel(rate.y, fd_rate[1]) < 1e-6);
    CHECK(rel(rate.theta, fd_rate[2]) < 1e-6);
    CHECK(rel(rate.c, fd_rate[3]) < 1e-6);
    CHECK(rel(in.car.v, d[1].segment<2>(4).norm()) < 1e-6);
    CHECK(rel(in.car.omega, d[1][6]) < 1e-6);

    const auto pj = fp::pusher_jet(path(t), p);
    CHECK((pj.d1 - d[1].segment<2>(4)).norm() < 1e-6 * std::max(1.0, pj.d1.norm()));
    CHECK((pj.d2 - d[2].segment<2>(4)).norm() < 1e-6 * std::max(1.0, pj.d2.norm()));
  }
}

TEST_CASE("unwrap") {
  CHECK(std::abs(fp::unwrap_near(0.1, 2 * std::numbers::pi) - (0.1 + 2 * std::numbers::pi)) < 1e-15);
  CHECK(fp::unwrap_near(-3.0, -3.1) == -3.0);
}
