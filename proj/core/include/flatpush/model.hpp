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
#include <string>
#include <vector>

#include <Eigen/Core>

namespace flatpush {

using Vec2 = Eigen::Vector2d;

// Which geometric factor a SliderParams instance carries.
enum class BetaKind { kLeastWork, kLimitSurface, kCustom };

std::string to_string(BetaKind kind);
BetaKind beta_kind_from_string(const std::string& name);

// RMS distance of a uniformly loaded a x b rectangle to its centroid.
double beta1(double a, double b);

// Mean distance of a uniformly loaded a x b rectangle to its centroid.
double beta2(double a, double b);

// Rectangular slider with a spherical pusher of radius r. The contact
// offset c runs along the width axis; the pusher touches the face at
// distance b/2 from the centroid.
class SliderParams {
 public:
  // Uses beta2 (limit surface) unless a different kind is requested.
  static SliderParams rectangle(double a, double b, double r,
                                BetaKind kind = BetaKind::kLimitSurface);
  static SliderParams with_beta(double a, double b, double r, double beta);

  double a() const { return a_; }
  double b() const { return b_; }
  double r() const { return r_; }
  double beta() const { return beta_; }
  double beta_sq() const { return beta_ * beta_; }
  BetaKind beta_kind() const { return kind_; }
  // Lever arm from the slider centroid to the pusher centre.
  double alpha() const { return b_ / 2.0 + r_; }

 private:
  SliderParams(double a, double b, double r, double beta, BetaKind kind);

  double a_;
  double b_;
  double r_;
  double beta_;
  BetaKind kind_;
};

struct SliderState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double c = 0.0;

  Eigen::Vector4d as_vector() const { return {x, y, theta, c}; }
  static SliderState from_vector(const Eigen::Vector4d& v) {
    return {v[0], v[1], v[2], v[3]};
  }
};

// Pusher velocity expressed in the slider frame.
struct ContactInput {
  double v_t = 0.0;
  double v_n = 0.0;
};

struct PusherState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

// Kinematic-car inputs of the pusher.
struct CarInput {
  double v = 0.0;
  double omega = 0.0;
};

// Time derivative of the slider state under frictionless quasi-static
// pushing. Returned as a SliderState holding (x', y', theta', c').
SliderState slider_rhs(const SliderState& state, const ContactInput& input,
                       const SliderParams& params);

enum class Termination { kCompleted, kContactLost };

std::string to_string(Termination reason);

struct SimulationOptions {
  // Stop once |c| exceeds a/2 and refine the crossing time by bisection.
  bool stop_on_contact_loss = true;
  double crossing_tolerance = 1e-8;
};

struct TrajectorySample {
  double t;
  SliderState state;
};

struct SimulationResult {
  std::vector<TrajectorySample> samples;
  Termination reason = Termination::kCompleted;
  const SliderState& final_state() const { return samples.back().state; }
  double final_time() const { return samples.back().t; }
};

using InputSignal = std::function<ContactInput(double t)>;
using FeedbackSignal =
    std::function<ContactInput(double t, const SliderState& state)>;

// Contact inputs that move the pusher with the given world-frame velocity
// while in contact.
ContactInput contact_input_for_pusher_velocity(const SliderState& state,
                                               const Vec2& velocity);

// Fixed-step classical RK4 integration of slider_rhs over [0, T]. The last
// step is shortened so the horizon is hit exactly.
SimulationResult simulate(const SliderParams& params, const SliderState& x0,
                          const InputSignal& input, double horizon, double dt,
                          const SimulationOptions& options = {});
SimulationResult simulate(const SliderParams& params, const SliderState& x0,
                          const FeedbackSignal& input, double horizon,
                          double dt, const SimulationOptions& options = {});

}  // namespace flatpush
