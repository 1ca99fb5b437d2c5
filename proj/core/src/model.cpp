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

#include "flatpush/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flatpush/errors.hpp"

namespace flatpush {

namespace {

void require_positive_dims(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    std::ostringstream msg;
    msg << "slider dimensions must be positive, got a=" << a << " b=" << b;
    throw DomainError(msg.str());
  }
}

bool finite(const SliderState& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.theta) &&
         std::isfinite(s.c);
}

SliderState axpy(const SliderState& x, double h, const SliderState& dx) {
  return {x.x + h * dx.x, x.y + h * dx.y, x.theta + h * dx.theta,
          x.c + h * dx.c};
}

SliderState rk4_step(const SliderParams& params, const FeedbackSignal& input,
                     double t, const SliderState& x, double h) {
  const SliderState k1 = slider_rhs(x, input(t, x), params);
  const SliderState x2 = axpy(x, h / 2, k1);
  const SliderState k2 = slider_rhs(x2, input(t + h / 2, x2), params);
  const SliderState x3 = axpy(x, h / 2, k2);
  const SliderState k3 = slider_rhs(x3, input(t + h / 2, x3), params);
  const SliderState x4 = axpy(x, h, k3);
  const SliderState k4 = slider_rhs(x4, input(t + h, x4), params);
  return {x.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
          x.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
          x.theta + h / 6 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta),
          x.c + h / 6 * (k1.c + 2 * k2.c + 2 * k3.c + k4.c)};
}

}  // namespace

std::string to_string(BetaKind kind) {
  switch (kind) {
    case BetaKind::kLeastWork:
      return "beta1";
    case BetaKind::kLimitSurface:
      return "beta2";
    case BetaKind::kCustom:
      return "custom";
  }
  return "custom";
}

BetaKind beta_kind_from_string(const std::string& name) {
  if (name == "beta1") return BetaKind::kLeastWork;
  if (name == "beta2") return BetaKind::kLimitSurface;
  if (name == "custom") return BetaKind::kCustom;
  throw DomainError("unknown beta kind '" + name + "'");
}

double beta1(double a, double b) {
  require_positive_dims(a, b);
  return std::sqrt((a * a + b * b) / 12.0);
}

double beta2(double a, double b) {
  require_positive_dims(a, b);
  const double d = std::hypot(a, b);
  // D - a loses digits when b << a; D - a = b^2 / (D + a).
  const double d_minus_a = b * b / (d + a);
  const double num = a * a * a * std::log((d + b) / a) -
                     b * b * b * std::log(d_minus_a / b) + 2.0 * d * a * b;
  return num / (12.0 * a * b);
}

SliderParams::SliderParams(double a, double b, double r, double beta,
                           BetaKind kind)
    : a_(a), b_(b), r_(r), beta_(beta), kind_(kind) {}

SliderParams SliderParams::rectangle(double a, double b, double r,
                                     BetaKind kind) {
  require_positive_dims(a, b);
  if (!(r >= 0.0)) throw DomainError("pusher radius must be non-negative");
  switch (kind) {
    case BetaKind::kLeastWork:
      return SliderParams(a, b, r, beta1(a, b), kind);
    case BetaKind::kLimitSurface:
      return SliderParams(a, b, r, beta2(a, b), kind);
    case BetaKind::kCustom:
      break;
  }
  throw DomainError("custom beta requires an explicit value");
}

SliderParams SliderParams::with_beta(double a, double b, double r,
                                     double beta) {
  require_positive_dims(a, b);
  if (!(r >= 0.0)) throw DomainError("pusher radius must be non-negative");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("geometric factor beta must be positive");
  }
  return SliderParams(a, b, r, beta, BetaKind::kCustom);
}

SliderState slider_rhs(const SliderState& state, const ContactInput& input,
                       const SliderParams& params) {
  const double b2 = params.beta_sq();
  const double denom = b2 + state.c * state.c;
  const double translate = b2 / denom * input.v_n;
  const double rotate = state.c / denom * input.v_n;
  return {-translate * std::sin(state.theta),
          translate * std::cos(state.theta), rotate,
          input.v_t - params.alpha() * rotate};
}

std::string to_string(Termination reason) {
  return reason == Termination::kContactLost ? "contact_lost" : "completed";
}

ContactInput contact_input_for_pusher_velocity(const SliderState& state,
                                               const Vec2& velocity) {
  // body frame: v_t along (cos, sin), v_n along (-sin, cos)
  const double s = std::sin(state.theta), c = std::cos(state.theta);
  return {c * velocity.x() + s * velocity.y(),
          -s * velocity.x() + c * velocity.y()};
}

SimulationResult simulate(const SliderParams& params, const SliderState& x0,
                          const InputSignal& input, double horizon, double dt,
                          const SimulationOptions& options) {
  return simulate(
      params, x0,
      FeedbackSignal([&input](double t, const SliderState&) { return input(t); }),
      horizon, dt, options);
}

SimulationResult simulate(const SliderParams& params, const SliderState& x0,
                          const FeedbackSignal& input, double horizon,
                          double dt, const SimulationOptions& options) {
  if (!(dt > 0.0) || !(horizon > 0.0)) {
    throw DomainError("simulate requires dt > 0 and T > 0");
  }
  const double half_width = params.a() / 2.0;
  const auto lost = [&](const SliderState& s) {
    return options.stop_on_contact_loss && std::abs(s.c) > half_width;
  };

  SimulationResult result;
  const long steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
  result.samples.reserve(static_cast<size_t>(steps) + 1);
  result.samples.push_back({0.0, x0});
  if (lost(x0)) {
    result.reason = Termination::kContactLost;
    return result;
  }

  SliderState x = x0;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double h = std::min(dt, horizon - t);
    const SliderState next = rk4_step(params, input, t, x, h);
    if (!finite(next)) {
      throw NumericError("non-finite slider state during integration", k);
    }
    if (lost(next)) {
      // Bisect on the sub-step length for the first |c| = a/2 crossing.
      double lo = 0.0;
      double hi = h;
      SliderState at_lo = x;
      while (hi - lo > options.crossing_tolerance) {
        const double mid = 0.5 * (lo + hi);
        const SliderState probe = rk4_step(params, input, t, x, mid);
        if (lost(probe)) {
          hi = mid;
        } else {
          lo = mid;
          at_lo = probe;
        }
      }
      result.samples.push_back({t + lo, at_lo});
      result.reason = Termination::kContactLost;
      return result;
    }
    x = next;
    result.samples.push_back({t + h, x});
  }
  result.reason = Termination::kCompleted;
  return result;
}

}  // namespace flatpush
