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
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "flatpush/flatness.hpp"
#include "flatpush/geometry.hpp"
#include "flatpush/io.hpp"
#include "flatpush/planner.hpp"
#include "flatpush/reference_paths.hpp"
#include "flatpush/splines.hpp"

namespace fp = flatpush;
using fp::Vec2;

namespace {

fp::BSplinePath wavy(int knots) {
  std::vector<Vec2> cps;
  const int n = fp::BSplinePath::control_point_count(5, knots);
  for (int i = 0; i < n; ++i) {
    const double s = double(i) / (n - 1);
    cps.emplace_back(4 * s, std::sin(5 * s));
  }
  return fp::BSplinePath::clamped_uniform(5, knots, cps);
}

void BM_EvalJet(benchmark::State& state) {
  const auto path = wavy(int(state.range(0)));
  double tau = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fp::eval_jet(path, tau));
    tau += 0.001;
    if (tau > 1.0) tau = 0.0;
  }
}
BENCHMARK(BM_EvalJet)->Arg(5)->Arg(20);

void BM_PolyDistance(benchmark::State& state) {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const auto slider = fp::slider_polygon({0, 0, 0.3, 0}, p);
  std::vector<Vec2> ring;
  for (int i = 0; i < state.range(0); ++i) {
    const double a = 2 * M_PI * i / state.range(0);
    ring.emplace_back(3 + std::cos(a), 0.5 + std::sin(a));
  }
  const fp::Polygon obstacle(ring);
  for (auto _ : state) benchmark::DoNotOptimize(fp::poly_distance(slider, obstacle));
}
BENCHMARK(BM_PolyDistance)->Arg(4)->Arg(32);

void BM_InflateInput(benchmark::State& state) {
  const auto p = fp::SliderParams::rectangle(1, 1, 0.2);
  const auto path = fp::lemniscate_path(20.0);
  const auto jet = path(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(fp::inflate_input(jet, p));
}
BENCHMARK(BM_InflateInput);

void BM_PlanTime(benchmark::State& state) {
  const auto scene = fp::load_scene(std::string(FLATPUSH_SCENES) + "/corridor.json");
  const auto geometric = fp::plan_geometric(scene, fp::default_init_path(scene));
  fp::TimeOptions opt;
  opt.K = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fp::plan_time(geometric.path, scene.params, scene.bounds, opt));
  }
}
BENCHMARK(BM_PlanTime)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
