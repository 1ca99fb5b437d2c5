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

#include <array>
#include <functional>
#include <vector>

#include "flatpush/flatness.hpp"
#include "flatpush/splines.hpp"

namespace flatpush {

// Path coordinate and its time derivatives.
struct TauJet {
  double tau = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double d4 = 0.0;
};

// psi = 1 / |zeta'| and its derivatives along the path coordinate.
struct PsiJet {
  double psi = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

// z = tau_dot^2 over the path coordinate: value, z', z'' and the control
// v = z'''.
struct ZState {
  double z = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double v = 0.0;
};

// A geometric path zeta(tau), tau in [0, 1], queried through order-4 jets.
// Breakpoints mark where derivatives may jump (always include 0 and 1).
struct PathField {
  std::function<FlatJet(double tau)> jet;
  std::vector<double> breakpoints{0.0, 1.0};

  static PathField from_spline(const BSplinePath& path);
};

// Time-domain jet from a path-coordinate jet by the chain rule (Faa di
// Bruno up to order 4).
FlatJet geometric_to_time(const FlatJet& geometric, const TauJet& tau);

PsiJet psi_jet(const FlatJet& geometric);

// Path-coordinate rate psi / (kappa0 + kappa) that slows down in bends.
double curvature_law(const FlatJet& geometric, const PsiJet& psi,
                     double kappa0);

TauJet tau_jet_from_z(const ZState& state);

// Slider speed profile v_s(t) and its first three time derivatives.
class VelocityProfile {
 public:
  enum class Kind { kConstant, kTrapezoidal, kCurvature, kCustom };
  using Derivatives = std::array<double, 4>;
  using Custom = std::function<Derivatives(double t)>;

  static VelocityProfile constant(double v0);
  // Ramp up with slope a0 on [0, delta), cruise on [delta, 2 delta), ramp
  // down on [2 delta, 3 delta], zero afterwards.
  static VelocityProfile trapezoidal(double a0, double delta);
  // Curvature-paced law tau_dot = psi / (kappa0 + kappa); not a function of
  // time, handled by tau_from_velocity directly.
  static VelocityProfile curvature(double kappa0);
  static VelocityProfile custom(Custom fn, std::vector<double> breakpoints);

  Kind kind() const { return kind_; }
  double kappa0() const { return kappa0_; }
  double v0() const { return v0_; }
  double a0() const { return a0_; }
  double delta() const { return delta_; }

  // v_s and derivatives at t, multiplied by `scale`.
  Derivatives at(double t) const;
  // Times in (0, T) where the profile is not smooth.
  std::vector<double> breakpoints(double horizon) const;
  // int_0^T v_s dt.
  double integral(double horizon) const;
  VelocityProfile scaled(double factor) const;
  double scale() const { return scale_; }

 private:
  Kind kind_ = Kind::kConstant;
  double v0_ = 0.0;
  double a0_ = 0.0;
  double delta_ = 0.0;
  double kappa0_ = 0.0;
  double scale_ = 1.0;
  Custom custom_;
  std::vector<double> custom_breakpoints_;
};

// Path length int_0^1 1/psi dtau.
double path_length(const PathField& path);

// Factor eta with eta * int_0^T v_hat dt equal to the path length. For a
// curvature profile, eta scales the curvature rate so that tau(T) = 1.
double eta_scale(const VelocityProfile& primitive, const PathField& path,
                 double horizon);

struct TimeLawSample {
  double t = 0.0;
  TauJet tau;
};

struct TimeLaw {
  std::vector<TimeLawSample> samples;
  double final_tau = 0.0;
  // tau reached 1 at the horizon (within 1e-6).
  bool completed = false;
};

struct TimeLawOptions {
  int steps = 2000;
  double end_tolerance = 1e-6;
};

// Integrates tau_dot = psi(tau) v_s(t) (or tau_dot = chi(tau) for the
// curvature law, with the profile's scale as factor) from tau(0) = 0 and
// evaluates the higher derivatives at every node. Breakpoints of the
// profile are placed on grid nodes. Throws OvershootError when tau passes
// 1 before T.
TimeLaw tau_from_velocity(const PathField& path, const VelocityProfile& profile,
                          double horizon, const TimeLawOptions& options = {});

// Time derivatives of tau for an autonomous law tau_dot = rate(tau). The
// rate's derivatives are taken by a 7-point polynomial fit.
TauJet autonomous_tau_jet(const std::function<double(double)>& rate,
                          double tau);

}  // namespace flatpush
