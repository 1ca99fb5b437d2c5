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

#include <optional>

#include "flatpush/model.hpp"

namespace flatpush {

// Value and derivatives of the flat output zeta = (x_s, y_s) with respect
// to a single evaluation variable (time, or a path coordinate).
struct FlatJet {
  Vec2 zeta = Vec2::Zero();
  Vec2 d1 = Vec2::Zero();
  Vec2 d2 = Vec2::Zero();
  Vec2 d3 = Vec2::Zero();
  Vec2 d4 = Vec2::Zero();
  // Highest derivative order that carries data.
  int order = 4;

  const Vec2& derivative(int k) const;
  Vec2& derivative(int k);
};

struct FullState {
  SliderState slider;
  PusherState pusher;
  // The pusher heading needs third-order data; false when the jet stopped
  // at order 2 and pusher.theta is meaningless.
  bool pusher_heading_known = false;
};

struct InflatedInput {
  ContactInput contact;
  CarInput car;
  double pusher_heading = 0.0;
};

// Speeds below this raise SingularJetError.
inline constexpr double kSingularSpeed = 1e-9;

Vec2 project(const FullState& state);

// Slider pose, contact offset and pusher pose from a jet of order >= 2.
// The slider heading is atan2(-x', y'); when `heading_reference` is given
// the result is shifted by a multiple of 2pi to lie within pi of it, as
// is the pusher heading.
FullState inflate_state(const FlatJet& jet, const SliderParams& params,
                        std::optional<double> heading_reference = {});

// Contact and car inputs from a jet of order 4. Pusher jets come from the
// closed-form derivatives of the rigid contact offset.
InflatedInput inflate_input(const FlatJet& jet, const SliderParams& params);

// Pusher position derivatives (first, second) implied by a slider jet.
struct PusherJet {
  Vec2 position;
  Vec2 d1;
  Vec2 d2;
};
PusherJet pusher_jet(const FlatJet& jet, const SliderParams& params);

// Returns `angle` + 2 pi k closest to `reference`.
double unwrap_near(double angle, double reference);

}  // namespace flatpush
