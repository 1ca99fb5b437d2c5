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
#include <random>

#include <doctest.h>

#include "flatpush/errors.hpp"
#include "flatpush/generalized.hpp"
#include "flatpush/model.hpp"

namespace fp = flatpush;

TEST_CASE("disc factor") {
  for (double R : {0.5, 1.0, 3.0}) {
    const auto g = fp::RadialGeometry::disc(R);
    CHECK(std::abs(g.beta_r() * g.beta_r() - R * R / 2) < 1e-10 * R * R);
  }
}

TEST_CASE("rectangle factor matches beta1") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {0.4, 1.3}}) {
    const auto g = fp::RadialGeometry::rectangle(a, b);
    CHECK(std::abs(g.beta_r() - fp::beta1(a, b)) < 1e-10);
    CHECK(fp::centroid_offset(g).norm() < 1e-12);
  }
}

TEST_CASE("scaling is homogeneous") {
  const double lam = 2.5;
  auto r = [](double phi) { return 1.0 + 0.2 * std::cos(2 * phi); };
  auto rp = [](double phi) { return -0.4 * std::sin(2 * phi); };
  const fp::RadialGeometry g(r, rp);
  const fp::RadialGeometry gs([&](double phi) { return lam * r(phi); },
                              [&](double phi) { return lam * rp(phi); });
  CHECK(std::abs(gs.beta_r() - lam * g.beta_r()) < 1e-10);
}

TEST_CASE("invalid outlines") {
  CHECK_THROWS_AS(fp::RadialGeometry::disc(0.0), fp::GeometryError);
  // shifted circle: centroid off the origin
  CHECK_THROWS_AS(fp::RadialGeometry([](double phi) { return 1.0 + 0.3 * std::cos(phi); },
                                     [](double phi) { return -0.3 * std::sin(phi); }),
                  fp::GeometryError);
}

TEST_CASE("circular slider never rotates and translates at unit speed") {
  const auto g = fp::RadialGeometry::disc(0.7);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const fp::GeneralizedState s{u(rng), u(rng), u(rng), u(rng)};
    const auto d = fp::generalized_rhs(s, {u(rng), u(rng)}, g);
    CHECK(d.theta == 0.0);
  }
  const auto d = fp::generalized_rhs({0, 0, 0, 0}, {0, 1}, g);
  CHECK(std::abs(d.x) < 1e-15);
  CHECK(std::abs(d.y - 1) < 1e-15);
}

TEST_CASE("rectangular outline reduces to the slider model") {
  const double a = 1.0, b = 1.4;
  const auto g = fp::RadialGeometry::rectangle(a, b);
  // point pusher: the generalized model has no pusher radius
  const auto p = fp::SliderParams::with_beta(a, b, 0.0, g.beta_r());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  const double phi_max = std::atan2(a, b);
  for (int i = 0; i < 100; ++i) {
    const double phi = 0.95 * phi_max * u(rng);
    const fp::GeneralizedState gs{u(rng), u(rng), 3 * u(rng), phi};
    const fp::ContactInput in{u(rng), u(rng)};
    const auto gd = fp::generalized_rhs(gs, {in.v_t, in.v_n}, g);
    const double c = b / 2 * std::tan(phi);
    const auto sd = fp::slider_rhs({gs.x, gs.y, gs.theta, c}, in, p);
    const double arc = std::hypot(g.r(phi), g.r_prime(phi));
    CHECK(std::abs(gd.x - sd.x) < 1e-10);
    CHECK(std::abs(gd.y - sd.y) < 1e-10);
    CHECK(std::abs(gd.theta - sd.theta) < 1e-10);
    CHECK(std::abs(arc * gd.phi - sd.c) < 1e-10);
  }
}
