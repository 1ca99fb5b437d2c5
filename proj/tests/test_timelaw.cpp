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
#include <vector>

#include <doctest.h>

#include "flatpush/errors.hpp"
#include "flatpush/flatness.hpp"
#include "flatpush/reference_paths.hpp"
#include "flatpush/timelaw.hpp"
#include "oracles.hpp"

namespace fp = flatpush;
using fp::Vec2;

namespace {

// zeta(tau) = (tau^3 - tau + tau^5 / 2, 2 tau^2 + tau^4 + tau)
fp::FlatJet poly_path(double t) {
  fp::FlatJet j;
  j.zeta = Vec2(t * t * t - t + 0.5 * std::pow(t, 5), 2 * t * t + std::pow(t, 4) + t);
  j.d1 = Vec2(3 * t * t - 1 + 2.5 * std::pow(t, 4), 4 * t + 4 * t * t * t + 1);
  j.d2 = Vec2(6 * t + 10 * t * t * t, 4 + 12 * t * t);
  j.d3 = Vec2(6 + 30 * t * t, 24 * t);
  j.d4 = Vec2(60 * t, 24);
  return j;
}

fp::PathField line_field(double length) {
  fp::PathField f;
  f.jet = [length](double t) {
    fp::FlatJet j;
    j.zeta = Vec2(length * t, 0);
    j.d1 = Vec2(length, 0);
    return j;
  };
  return f;
}

fp::FlatJet circle(double R, double t) {
  fp::FlatJet j;
  j.zeta = R * Vec2(std::cos(t), std::sin(t));
  j.d1 = R * Vec2(-std::sin(t), std::cos(t));
  j.d2 = -j.zeta;
  j.d3 = -j.d1;
  j.d4 = j.zeta;
  return j;
}

}  // namespace

TEST_CASE("chain rule examples") {
  const auto g = poly_path(0.3);
  const auto same = fp::geometric_to_time(g, {0.3, 1, 0, 0, 0});
  for (int k = 0; k <= 4; ++k) CHECK(same.derivative(k) == g.derivative(k));

  fp::FlatJet q;  // (tau, tau^2) at tau = 1
  q.zeta = Vec2(1, 1);
  q.d1 = Vec2(1, 2);
  q.d2 = Vec2(0, 2);
  const auto out = fp::geometric_to_time(q, {1, 2, 2, 0, 0});  // tau = t^2, t = 1
  CHECK(out.d1 == Vec2(2, 4));
  CHECK(out.d2 == Vec2(2, 12));

  fp::FlatJet quartic;  // (tau^4, 0) at tau = 1
  quartic.d1 = Vec2(4, 0);
  quartic.d2 = Vec2(12, 0);
  quartic.d3 = Vec2(24, 0);
  quartic.d4 = Vec2(24, 0);
  CHECK(fp::geometric_to_time(quartic, {1, 1, 0, 0, 0}).d4 == Vec2(24, 0));
}

TEST_CASE("chain rule against finite differences of the composition") {
  auto tau = [](double t) { return 0.2 + 0.3 * t + 0.05 * std::sin(3 * t); };
  for (double t : {0.1, 0.7, 1.3, 2.0}) {
    const double s = std::sin(3 * t), c = std::cos(3 * t);
    const fp::TauJet tj{tau(t), 0.3 + 0.15 * c, -0.45 * s, -1.35 * c, 4.05 * s};
    const auto jet = fp::geometric_to_time(poly_path(tj.tau), tj);
    const auto d = oracle::fd_derivatives(
        [&](double x) -> Eigen::VectorXd { return poly_path(tau(x)).zeta; }, t, 0.02);
    for (int k = 1; k <= 4; ++k) {
      const Vec2 fd = d[k];
      CHECK((jet.derivative(k) - fd).norm() < 1e-6 * std::max(1.0, fd.norm()));
    }
  }
}

TEST_CASE("psi examples and derivatives") {
  fp::FlatJet unit;
  unit.d1 = Vec2(0.6, 0.8);
  auto p = fp::psi_jet(unit);
  CHECK(p.psi == doctest::Approx(1.0));
  CHECK(p.d1 == 0.0);
  CHECK(p.d2 == 0.0);
  fp::FlatJet two;
  two.d1 = Vec2(2, 0);
  CHECK(fp::psi_jet(two).psi == 0.5);
  p = fp::psi_jet(circle(4.0, 0.3));
  CHECK(std::abs(p.psi - 0.25) < 1e-15);
  CHECK(std::abs(p.d1) < 1e-15);
  CHECK(std::abs(p.d2) < 1e-15);

  for (double t : {0.2, 0.5, 0.8}) {
    const auto pj = fp::psi_jet(poly_path(t));
    const auto d = oracle::fd_derivatives(
        [](double x) -> Eigen::VectorXd {
          return Eigen::VectorXd::Constant(1, 1.0 / poly_path(x).d1.norm());
        },
        t, 0.01);
    CHECK(std::abs(pj.d1 - d[1][0]) < 1e-6 * std::max(1.0, std::abs(d[1][0])));
    CHECK(std::abs(pj.d2 - d[2][0]) < 1e-6 * std::max(1.0, std::abs(d[2][0])));
    CHECK(std::abs(pj.d3 - d[3][0]) < 1e-6 * std::max(1.0, std::abs(d[3][0])));
  }
  CHECK_THROWS_AS(fp::psi_jet(fp::FlatJet{}), fp::SingularJetError);
}

TEST_CASE("curvature law") {
  fp::FlatJet line;
  line.d1 = Vec2(3, 0);
  CHECK(fp::curvature_law(line, fp::psi_jet(line), 0.5) == doctest::Approx(1.0 / 3 / 0.5));
  const double R = 2.0, k0 = 0.5;
  const auto c = circle(R, 1.1);
  CHECK(std::abs(fp::curvature_law(c, fp::psi_jet(c), k0) - (1 / R) / (k0 + 1 / R)) < 1e-14);
  CHECK(fp::curvature_law(c, fp::psi_jet(c), 1e12) < 1e-12);
  CHECK_THROWS_AS(fp::curvature_law(c, fp::psi_jet(c), 0.0), fp::DomainError);
}

TEST_CASE("z substitution") {
  auto j = fp::tau_jet_from_z({0.49, 0, 0, 0});
  CHECK(j.d1 == doctest::Approx(0.7));
  CHECK(j.d2 == 0.0);
  CHECK(j.d3 == 0.0);
  CHECK(j.d4 == 0.0);
  j = fp::tau_jet_from_z({0.25, 1, 0, 0});  // z(tau) = tau at tau = 1/4
  CHECK(j.d1 == 0.5);
  CHECK(j.d2 == 0.5);
  CHECK(j.d3 == 0.0);
  j = fp::tau_jet_from_z({0, 0.3, 0.2, 1});
  CHECK(j.d1 == 0.0);
  CHECK(j.d3 == 0.0);
  CHECK_THROWS_AS(fp::tau_jet_from_z({-1e-3, 0, 0, 0}), fp::DomainError);
}

TEST_CASE("z substitution obeys d/dt = tau_dot d/dtau") {
  // z(tau) = 0.5 + 0.3 tau + 0.2 tau^2 - 0.1 tau^3
  auto state = [](double t) {
    return fp::ZState{0.5 + 0.3 * t + 0.2 * t * t - 0.1 * t * t * t,
                      0.3 + 0.4 * t - 0.3 * t * t, 0.4 - 0.6 * t, -0.6};
  };
  auto tj = [&](double t) -> Eigen::VectorXd {
    const auto j = fp::tau_jet_from_z(state(t));
    Eigen::VectorXd v(4);
    v << j.d1, j.d2, j.d3, j.d4;
    return v;
  };
  for (double t : {0.1, 0.4, 0.9}) {
    const auto here = tj(t);
    const auto d = oracle::fd_derivatives(tj, t, 0.01);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(d[1][k] * here[0] - here[k + 1]) < 1e-6);
    }
  }
}

TEST_CASE("autonomous law derivatives") {
  auto rate = [](double t) { return 1.0 + t * t; };
  const double t = 0.4, r = rate(t);
  const auto j = fp::autonomous_tau_jet(rate, t);
  // r' = 2t, r'' = 2, r''' = 0
  const double d2 = 2 * t * r;
  const double d3 = (2 * r + 2 * t * 2 * t) * r;
  const double d4 = (2 * 2 * t + 8 * t) * r * r + (2 * r + 4 * t * t) * 2 * t * r;
  CHECK(std::abs(j.d1 - r) < 1e-14);
  CHECK(std::abs(j.d2 - d2) < 1e-9);
  CHECK(std::abs(j.d3 - d3) < 1e-6);
  CHECK(std::abs(j.d4 - d4) < 1e-4);
}

TEST_CASE("velocity imposition") {
  auto law = fp::tau_from_velocity(line_field(1.0), fp::VelocityProfile::constant(1.0), 1.0);
  CHECK(law.completed);
  for (const auto& s : law.samples) CHECK(std::abs(s.tau.tau - s.t) < 1e-14);

  law = fp::tau_from_velocity(line_field(5.0), fp::VelocityProfile::constant(2.0), 2.0);
  for (const auto& s : law.samples) CHECK(std::abs(s.tau.tau - 2.0 * s.t / 5.0) < 1e-13);
  CHECK(!law.completed);

  CHECK_THROWS_AS(
      fp::tau_from_velocity(line_field(1.0), fp::VelocityProfile::constant(2.0), 1.0),
      fp::OvershootError);
}

TEST_CASE("trapezoid second row matches finite differences of the rate") {
  const auto path = fp::two_lobe_path();
  const double T = 10.0;
  const auto prim = fp::VelocityProfile::trapezoidal(1.0, T / 3);
  const double eta = fp::eta_scale(prim, path, T);
  const auto law = fp::tau_from_velocity(path, prim.scaled(eta), T, {4000, 1e-6});
  CHECK(law.completed);
  bool accel = false, decel = false;
  for (size_t i = 1; i + 1 < law.samples.size(); ++i) {
    const auto& a = law.samples[i - 1];
    const auto& b = law.samples[i + 1];
    const double t = law.samples[i].t;
    if (std::abs(t - T / 3) < 0.01 || std::abs(t - 2 * T / 3) < 0.01) continue;
    if (std::abs(law.samples[i].tau.tau - 0.5) < 0.002) continue;  // lobe joint
    const double fd = (b.tau.d1 - a.tau.d1) / (b.t - a.t);
    CHECK(std::abs(fd - law.samples[i].tau.d2) < 1e-4);
    if (t < T / 3) accel = accel || law.samples[i].tau.d2 > 0;
    if (t > 2 * T / 3) decel = decel || law.samples[i].tau.d2 < 0;
  }
  CHECK(accel);
  CHECK(decel);
  for (size_t i = 1; i < law.samples.size(); ++i) {
    CHECK(std::abs(law.samples[i].tau.d1 - law.samples[i - 1].tau.d1) < 1e-2);
  }
}

TEST_CASE("eta scaling") {
  const auto one = fp::VelocityProfile::constant(1.0);
  CHECK(std::abs(fp::eta_scale(one, line_field(2.0), 4.0) - 0.5) < 1e-14);
  const auto path = fp::two_lobe_path();
  const double e10 = fp::eta_scale(one, path, 10.0);
  CHECK(std::abs(fp::eta_scale(one, path, 20.0) - e10 / 2) < 1e-14);

  double poly = 0.0;
  Vec2 prev = path.jet(0.0).zeta;
  for (int i = 1; i <= 200000; ++i) {
    const Vec2 q = path.jet(i / 200000.0).zeta;
    poly += (q - prev).norm();
    prev = q;
  }
  CHECK(std::abs(fp::eta_scale(one, path, 20.0) - poly / 20.0) < 1e-6 * poly);

  const auto law = fp::tau_from_velocity(path, one.scaled(fp::eta_scale(one, path, 20.0)), 20.0);
  CHECK(std::abs(law.final_tau - 1.0) < 1e-6);
  CHECK_THROWS_AS(fp::eta_scale(fp::VelocityProfile::constant(0.0), path, 1.0), fp::InfeasibleError);
}

TEST_CASE("state is invariant to the time law, a crane angle is not") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  double worst_state = 0.0, worst_crane = 0.0;
  for (double t : {0.15, 0.4, 0.65, 0.9}) {
    const auto g = poly_path(t);
    const fp::TauJet A{t, 1.0, 0.0, 0.0, 0.0};
    const fp::TauJet B{t, 0.7, -0.4, 1.3, 2.0};
    const auto sa = fp::inflate_state(fp::geometric_to_time(g, A), p);
    const auto sb = fp::inflate_state(fp::geometric_to_time(g, B), p);
    worst_state = std::max({worst_state, std::abs(sa.slider.theta - sb.slider.theta),
                            std::abs(sa.slider.c - sb.slider.c),
                            std::abs(sa.pusher.x - sb.pusher.x),
                            std::abs(sa.pusher.y - sb.pusher.y),
                            std::abs(sa.pusher.theta - sb.pusher.theta)});
    worst_crane = std::max(worst_crane,
                           std::abs(oracle::gantry_angle(fp::geometric_to_time(g, A).d2) -
                                    oracle::gantry_angle(fp::geometric_to_time(g, B).d2)));
  }
  CHECK(worst_state < 1e-12);
  CHECK(worst_crane > 1e-3);
}
