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
#include <limits>
#include <numbers>
#include <random>

#include <doctest.h>

#include "flatpush/errors.hpp"
#include "flatpush/model.hpp"
#include "oracles.hpp"

namespace fp = flatpush;

TEST_CASE("beta1 closed form against quadrature") {
  CHECK(std::abs(fp::beta1(1, 1) - 0.408248) < 1e-6);
  CHECK(std::abs(fp::beta1(1, 10) - 2.901149) < 1e-6);
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 10.0}, {0.3, 2.0}}) {
    CHECK(std::abs(fp::beta1(a, b) * fp::beta1(a, b) -
                   oracle::rect_mean_sq_distance(a, b)) < 1e-13);
  }
  CHECK(fp::beta1(1, 2) == fp::beta1(2, 1));
}

TEST_CASE("beta2 closed form against quadrature") {
  CHECK(std::abs(fp::beta2(1, 1) - 0.382598) < 1e-6);
  CHECK(std::abs(fp::beta2(1, 10) - 2.531915) < 1e-6);
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 10.0}, {10.0, 1.0}, {0.2, 3.0}}) {
    CHECK(std::abs(fp::beta2(a, b) - oracle::rect_mean_distance(a, b)) < 1e-12);
  }
  CHECK(std::abs(fp::beta2(1, 2) - fp::beta2(2, 1)) < 1e-14);
}

TEST_CASE("beta domain errors") {
  CHECK_THROWS_AS(fp::beta1(0, 1), fp::DomainError);
  CHECK_THROWS_AS(fp::beta2(1, -1), fp::DomainError);
  CHECK_THROWS_AS(fp::beta2(std::nan(""), 1), fp::DomainError);
}

TEST_CASE("jensen and ratio band on a log grid") {
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double a = std::pow(10.0, -1.0 + 2.0 * i / 19.0);
      const double b = std::pow(10.0, -1.0 + 2.0 * j / 19.0);
      const double ratio = fp::beta1(a, b) / fp::beta2(a, b);
      CHECK(ratio >= 1.0);
      CHECK(ratio >= 1.03);
      CHECK(ratio <= 1.25);
    }
  }
}

TEST_CASE("slider params") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  CHECK(p.alpha() == 0.5 + 0.2);
  CHECK(p.beta() == fp::beta2(1, 1));
  CHECK(p.beta_kind() == fp::BetaKind::kLimitSurface);
  CHECK(fp::SliderParams::rectangle(1, 1, 0.2, fp::BetaKind::kLeastWork).beta() ==
        fp::beta1(1, 1));
  CHECK_THROWS_AS(fp::SliderParams::rectangle(1, 1, -0.1), fp::DomainError);
  CHECK_THROWS_AS(fp::SliderParams::with_beta(1, 1, 0.1, 0.0), fp::DomainError);
}

TEST_CASE("slider_rhs examples") {
  const auto any = fp::SliderParams::with_beta(1, 1, 0.2, 0.37);
  auto d = fp::slider_rhs({0, 0, 0, 0}, {1, 1}, any);
  CHECK(d.x == doctest::Approx(0).epsilon(1e-15));
  CHECK(d.y == 1.0);
  CHECK(d.theta == 0.0);
  CHECK(d.c == 1.0);

  const auto p = fp::SliderParams::with_beta(1, 1, 0.2, 1.0);
  d = fp::slider_rhs({0, 0, 0, 1}, {0, 1}, p);
  CHECK(std::abs(d.x) < 1e-15);
  CHECK(std::abs(d.y - 0.5) < 1e-15);
  CHECK(std::abs(d.theta - 0.5) < 1e-15);
  CHECK(std::abs(d.c + 0.35) < 1e-15);

  d = fp::slider_rhs({0, 0, std::numbers::pi / 2, 0}, {0, 1}, p);
  CHECK(std::abs(d.x + 1) < 1e-15);
  CHECK(std::abs(d.y) < 1e-15);
}

TEST_CASE("speed identity and degenerate push") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto p = fp::SliderParams::rectangle(1, 1.5, 0.1);
  for (int i = 0; i < 200; ++i) {
    const fp::SliderState s{u(rng), u(rng), 3 * u(rng), 0.5 * u(rng)};
    const fp::ContactInput in{u(rng), 2 * u(rng)};
    const auto d = fp::slider_rhs(s, in, p);
    const double expect = p.beta_sq() / (p.beta_sq() + s.c * s.c) * std::abs(in.v_n);
    CHECK(std::abs(std::hypot(d.x, d.y) - expect) < 1e-14);
    const auto d0 = fp::slider_rhs({s.x, s.y, s.theta, 0.0}, in, p);
    CHECK(d0.theta == 0.0);
    CHECK(std::abs(std::hypot(d0.x, d0.y) - std::abs(in.v_n)) < 1e-14);
  }
}

TEST_CASE("straight push") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  auto res = fp::simulate(p, {}, [](double) { return fp::ContactInput{0, 1}; }, 1.0, 1e-3);
  CHECK(res.reason == fp::Termination::kCompleted);
  CHECK(res.final_time() == 1.0);
  CHECK(std::abs(res.final_state().x) < 1e-14);
  CHECK(std::abs(res.final_state().y - 1) < 1e-12);
  CHECK(res.final_state().theta == 0.0);
  CHECK(res.final_state().c == 0.0);
}

TEST_CASE("offset vertical push loses contact") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const fp::SliderState x0{0, 0, 0, 0.4};
  fp::FeedbackSignal push = [](double, const fp::SliderState& s) {
    return fp::contact_input_for_pusher_velocity(s, fp::Vec2(0, 1));
  };
  auto res = fp::simulate(p, x0, push, 20.0, 1e-3);
  CHECK(res.reason == fp::Termination::kContactLost);
  CHECK(res.final_time() < 20.0);
  CHECK(std::abs(std::abs(res.final_state().c) - 0.5) < 1e-6);
}

TEST_CASE("zero input keeps the state") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const fp::SliderState x0{0.3, -1, 0.2, 0.1};
  auto res = fp::simulate(p, x0, [](double) { return fp::ContactInput{}; }, 2.0, 0.01);
  for (const auto& s : res.samples) CHECK(s.state.as_vector() == x0.as_vector());
}

TEST_CASE("rk4 global error is fourth order") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const fp::SliderState x0{0, 0, 0.1, 0.05};
  fp::InputSignal in = [](double t) {
    return fp::ContactInput{0.1 * std::sin(t), 1.0 + 0.2 * std::cos(2 * t)};
  };
  fp::SimulationOptions opt;
  opt.stop_on_contact_loss = false;
  auto ref = fp::simulate(p, x0, in, 2.0, 1e-4, opt).final_state().as_vector();
  const double e1 = (fp::simulate(p, x0, in, 2.0, 0.1, opt).final_state().as_vector() - ref).norm();
  const double e2 = (fp::simulate(p, x0, in, 2.0, 0.05, opt).final_state().as_vector() - ref).norm();
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.7);
  CHECK(order < 4.3);
}

TEST_CASE("non-finite state reports the step") {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  fp::InputSignal in = [](double t) {
    return fp::ContactInput{0, t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0};
  };
  try {
    fp::simulate(p, {}, in, 1.0, 0.1);
    FAIL("expected NumericError");
  } catch (const fp::NumericError& e) {
    CHECK(e.step() >= 4);
    CHECK(e.step() <= 6);
  }
  CHECK_THROWS_AS(fp::simulate(p, {}, in, 1.0, 0.0), fp::DomainError);
}
