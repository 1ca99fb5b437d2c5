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

#include <vector>

#include "flatpush/flatness.hpp"
#include "flatpush/geometry.hpp"
#include "flatpush/nlp.hpp"
#include "flatpush/splines.hpp"
#include "flatpush/timelaw.hpp"

namespace flatpush {

struct GeometricOptions {
  int grid = 100;  // trapezoid intervals, constraints at grid + 1 nodes
  double gamma = 0.1;
  NlpOptions nlp;
};

// Per-node state constraint values; feasible when every entry is >= 0.
struct StateResiduals {
  std::vector<double> tau;
  // clearance[k][j]: distance to obstacle j minus the required clearance.
  std::vector<std::vector<double>> clearance;
  // a/2 - |c| at each node.
  std::vector<double> contact;

  double max_violation() const;
  double min_clearance() const;
};

StateResiduals state_residuals(const Scene& scene, const BSplinePath& path,
                               int grid);

struct SolverReport {
  NlpStatus status = NlpStatus::kIterationLimit;
  int iterations = 0;
  double kkt_residual = 0.0;
  double max_violation = 0.0;
};

struct GeometricPlan {
  BSplinePath path;
  double objective = 0.0;
  double length = 0.0;
  StateResiduals residuals;
  SolverReport solver;
};

// Initial path: an interpolating spline through start, scene.init_via and
// goal, or the uniformly parametrized chord when there are no via points.
BSplinePath default_init_path(const Scene& scene, int degree = 5,
                              int knot_count = 5);

GeometricPlan plan_geometric(const Scene& scene, const BSplinePath& init,
                             const GeometricOptions& options = {});

struct TimeOptions {
  int K = 100;
  double z_floor = 1e-10;
  double margin = 0.5;  // initial guess uses this fraction of the bounds
  NlpOptions nlp;
};

struct TimePlan {
  BSplinePath path;
  std::vector<double> tau;  // K + 1 nodes
  std::vector<double> z, z1, z2;  // K + 1 nodes, path-coordinate derivatives
  std::vector<double> v;          // K intervals
  std::vector<double> t;          // node times from the piecewise-linear z law
  double T = 0.0;
  SolverReport solver;

  ZState node(int k) const;
};

// Integral of 1/sqrt(z) over an interval of width h with z affine between
// the endpoint values.
double linear_z_interval_time(double h, double z0, double z1);

// Inputs at path coordinate tau moving with tau_dot = sqrt(z.z). Zero
// inputs where z vanishes.
InflatedInput node_inputs(const BSplinePath& path, const SliderParams& params,
                          double tau, const ZState& z);

TimePlan plan_time(const BSplinePath& path, const SliderParams& params,
                   const InputBounds& bounds, const TimeOptions& options = {});

struct TrajectoryRow {
  double t = 0.0;
  double tau = 0.0;
  SliderState slider;
  PusherState pusher;
  ContactInput contact;
  CarInput car;
};

// Path coordinate at time t under the piecewise-linear z law, plus its rate.
struct TauAt {
  double tau = 0.0;
  double tau_dot = 0.0;
};
TauAt tau_at_time(const TimePlan& plan, double t);

// States and inputs sampled on `samples` + 1 uniform instants of [0, T].
std::vector<TrajectoryRow> sample_trajectory(const TimePlan& plan,
                                             const SliderParams& params,
                                             int samples);

struct Plan {
  GeometricPlan geometric;
  TimePlan time;
  std::vector<TrajectoryRow> trajectory;
};

Plan plan(const Scene& scene, const BSplinePath& init,
          const GeometricOptions& geometric = {}, const TimeOptions& time = {},
          int samples = 500);

}  // namespace flatpush
