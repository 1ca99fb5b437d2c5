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
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flatpush/errors.hpp"
#include "flatpush/flatness.hpp"
#include "flatpush/io.hpp"
#include "flatpush/log.hpp"
#include "flatpush/model.hpp"
#include "flatpush/planner.hpp"
#include "flatpush/reference_paths.hpp"
#include "flatpush/svg.hpp"
#include "flatpush/timelaw.hpp"

namespace fp = flatpush;

namespace {

enum ExitCode { kOk = 0, kDomain = 2, kSolver = 3, kNumeric = 4 };

struct SliderOpts {
  double a = 1.0;
  double b = 1.0;
  double r = 0.2;
  std::string beta = "beta2";

  fp::SliderParams params() const {
    return fp::SliderParams::rectangle(a, b, r, fp::beta_kind_from_string(beta));
  }
};

void add_slider_opts(CLI::App* app, SliderOpts& s) {
  app->add_option("--a", s.a, "slider width");
  app->add_option("--b", s.b, "slider length");
  app->add_option("--r", s.r, "pusher radius");
  app->add_option("--beta", s.beta, "geometric factor: beta1 | beta2")
      ->check(CLI::IsMember({"beta1", "beta2"}));
}

// Writes to the named file, or stdout for "" / "-".
class Output {
 public:
  explicit Output(const std::string& name) {
    if (!name.empty() && name != "-") {
      file_.open(name, std::ios::binary);
      if (!file_) throw fp::DomainError("cannot write " + name);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// ---- beta ------------------------------------------------------------

struct BetaCmd {
  double a = 1.0;
  double b = 1.0;
  bool grid = false;
  int points = 41;
  std::string out;
};

int run_beta(const BetaCmd& c) {
  Output out(c.out);
  auto& os = out.stream();
  if (c.grid) {
    // aspect a/b over [0.1, 10] on a log grid, b = 1
    os << "aspect,beta1,beta2,ratio\n";
    for (int i = 0; i < c.points; ++i) {
      const double s = c.points > 1 ? static_cast<double>(i) / (c.points - 1) : 0.0;
      const double aspect = std::pow(10.0, -1.0 + 2.0 * s);
      const double b1 = fp::beta1(aspect, 1.0), b2 = fp::beta2(aspect, 1.0);
      os << fp::format_number(aspect) << ',' << fp::format_number(b1) << ','
         << fp::format_number(b2) << ',' << fp::format_number(b1 / b2) << '\n';
    }
    return kOk;
  }
  const double b1 = fp::beta1(c.a, c.b), b2 = fp::beta2(c.a, c.b);
  os.setf(std::ios::fixed);
  os.precision(6);
  os << "beta1 " << b1 << "\nbeta2 " << b2 << "\n";
  os.precision(5);
  os << "ratio " << b1 / b2 << "\n";
  return kOk;
}

// ---- simulate --------------------------------------------------------

struct SimulateCmd {
  SliderOpts slider;
  std::string scenario = "push";
  double c0 = std::nan("");
  double horizon = 20.0;
  double dt = 0.0;
  double noise = 0.0;
  int intervals = 250;
  unsigned long long seed = 0;
  bool keep_going = false;
  std::string out;
  std::string svg;
};

std::vector<fp::Polygon> footprints(const std::vector<fp::SliderState>& states,
                                    const fp::SliderParams& params, int count) {
  std::vector<fp::Polygon> out;
  if (states.empty() || count <= 0) return out;
  const size_t stride = std::max<size_t>(1, states.size() / count);
  for (size_t i = 0; i < states.size(); i += stride) {
    out.push_back(fp::slider_polygon(states[i], params));
  }
  out.push_back(fp::slider_polygon(states.back(), params));
  return out;
}

int run_simulate(const SimulateCmd& c) {
  const fp::SliderParams params = c.slider.params();
  if (!(c.horizon > 0.0)) throw fp::DomainError("--T must be positive");
  const double dt = c.dt > 0.0 ? c.dt : c.horizon / 1e4;

  fp::SliderState x0{0.0, 0.0, 0.0, 0.0};
  fp::FeedbackSignal nominal;
  std::optional<fp::TimePath> path;
  if (c.scenario == "push") {
    // pusher translates straight up at unit speed
    x0.c = std::isnan(c.c0) ? 0.4 * params.a() : c.c0;
    nominal = [](double, const fp::SliderState& s) {
      return fp::contact_input_for_pusher_velocity(s, fp::Vec2(0.0, 1.0));
    };
  } else if (c.scenario == "zero") {
    if (!std::isnan(c.c0)) x0.c = c.c0;
    nominal = [](double, const fp::SliderState&) {
      return fp::ContactInput{0.0, 0.0};
    };
  } else {
    path = fp::reference_path(c.scenario, c.horizon);
    const fp::FullState s0 = fp::inflate_state((*path)(0.0), params);
    x0 = s0.slider;
    nominal = [path, params](double t, const fp::SliderState&) {
      return fp::inflate_input((*path)(t), params).contact;
    };
  }

  // Piecewise-constant Gaussian noise on a fixed time grid.
  std::vector<std::array<double, 2>> noise;
  if (c.noise > 0.0) {
    if (c.intervals < 1) throw fp::DomainError("--intervals must be >= 1");
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> n01(0.0, c.noise);
    noise.resize(c.intervals);
    for (auto& e : noise) e = {n01(rng), n01(rng)};
  }
  const fp::FeedbackSignal input = [&](double t, const fp::SliderState& x) {
    fp::ContactInput u = nominal(t, x);
    if (!noise.empty()) {
      const int i = std::clamp(static_cast<int>(t / c.horizon * c.intervals),
                               0, c.intervals - 1);
      u.v_t += noise[i][0];
      u.v_n += noise[i][1];
    }
    return u;
  };

  fp::SimulationOptions opts;
  opts.stop_on_contact_loss = !c.keep_going;
  const fp::SimulationResult sim =
      fp::simulate(params, x0, input, c.horizon, dt, opts);

  Output out(c.out);
  auto& os = out.stream();
  os << "t,x_s,y_s,theta_s,c,v_t,v_n\n";
  for (const auto& s : sim.samples) {
    const fp::ContactInput u = input(s.t, s.state);
    const double v[] = {s.t, s.state.x, s.state.y, s.state.theta, s.state.c,
                        u.v_t, u.v_n};
    for (size_t i = 0; i < std::size(v); ++i) {
      os << (i ? "," : "") << fp::format_number(v[i]);
    }
    os << '\n';
  }
  if (path) {
    const fp::Vec2 target = (*path)(sim.final_time()).zeta;
    const fp::Vec2 got(sim.final_state().x, sim.final_state().y);
    os << "# endpoint_error=" << fp::format_number((got - target).norm())
       << '\n';
  }
  os << "# termination_reason=" << fp::to_string(sim.reason) << '\n';

  if (!c.svg.empty()) {
    std::vector<fp::SliderState> states;
    fp::SvgLayer layer;
    for (const auto& s : sim.samples) {
      states.push_back(s.state);
      layer.polyline.emplace_back(s.state.x, s.state.y);
    }
    layer.footprints = footprints(states, params, 12);
    layer.label = "simulated slider";
    std::vector<fp::SvgLayer> layers{layer};
    if (path) {
      fp::SvgLayer ref;
      ref.color = "#d62728";
      ref.label = "reference";
      for (int i = 0; i <= 400; ++i) {
        ref.polyline.push_back((*path)(c.horizon * i / 400.0).zeta);
      }
      layers.push_back(ref);
    }
    fp::write_file(c.svg, fp::render_svg({}, layers));
  }
  return kOk;
}

// ---- inflate ---------------------------------------------------------

struct InflateCmd {
  SliderOpts slider;
  std::string path = "ellipse";
  double horizon = 20.0;
  int samples = 400;
  std::string out;
};

int run_inflate(const InflateCmd& c) {
  const fp::SliderParams params = c.slider.params();
  const fp::TimePath path = fp::reference_path(c.path, c.horizon);
  if (c.samples < 1) throw fp::DomainError("--samples must be >= 1");
  Output out(c.out);
  auto& os = out.stream();
  os << fp::kTrajectoryHeader << '\n';
  std::optional<double> ref;
  for (int i = 0; i <= c.samples; ++i) {
    fp::TrajectoryRow row;
    row.t = c.horizon * i / c.samples;
    const fp::FlatJet jet = path(row.t);
    const fp::FullState st = fp::inflate_state(jet, params, ref);
    const fp::InflatedInput in = fp::inflate_input(jet, params);
    ref = st.slider.theta;
    row.slider = st.slider;
    row.pusher = st.pusher;
    row.contact = in.contact;
    row.car = in.car;
    fp::write_trajectory_row(os, row);
  }
  return kOk;
}

// ---- reprofile -------------------------------------------------------

struct ReprofileCmd {
  SliderOpts slider;
  std::string spline;
  std::string profile = "constant";
  double horizon = 10.0;
  double dt = 0.0;
  std::string out;
};

int run_reprofile(const ReprofileCmd& c) {
  const fp::SliderParams params = c.slider.params();
  const fp::PathField path = c.spline.empty()
                                 ? fp::two_lobe_path()
                                 : fp::PathField::from_spline(fp::load_spline(c.spline));
  const fp::VelocityProfile primitive = fp::parse_profile(c.profile);
  const double eta = fp::eta_scale(primitive, path, c.horizon);
  fp::TimeLawOptions opts;
  if (c.dt > 0.0) {
    opts.steps = std::max(1, static_cast<int>(std::lround(c.horizon / c.dt)));
  }
  const fp::TimeLaw law =
      fp::tau_from_velocity(path, primitive.scaled(eta), c.horizon, opts);

  Output out(c.out);
  auto& os = out.stream();
  os << "t,tau,x_s,y_s,theta_s,c,x_p,y_p,theta_p,v_t,v_n,v_p,omega_p\n";
  std::optional<double> ref;
  for (const auto& s : law.samples) {
    const fp::FlatJet g = path.jet(s.tau.tau);
    // time jet is singular at rest
    const bool moving = s.tau.d1 > 0.0;
    const fp::FlatJet timed = moving ? fp::geometric_to_time(g, s.tau) : g;
    const fp::FullState st = fp::inflate_state(timed, params, ref);
    ref = st.slider.theta;
    fp::InflatedInput in;
    if (moving) in = fp::inflate_input(timed, params);
    const double v[] = {s.t, s.tau.tau, st.slider.x, st.slider.y,
                        st.slider.theta, st.slider.c, st.pusher.x,
                        st.pusher.y, st.pusher.theta, in.contact.v_t,
                        in.contact.v_n, in.car.v, in.car.omega};
    for (size_t i = 0; i < std::size(v); ++i) {
      os << (i ? "," : "") << fp::format_number(v[i]);
    }
    os << '\n';
  }
  os << "# eta=" << fp::format_number(eta)
     << " final_tau=" << fp::format_number(law.final_tau) << '\n';
  return kOk;
}

// ---- plan ------------------------------------------------------------

struct PlanCmd {
  std::string scene;
  std::string out = ".";
  int grid = 100;
  int grid_k = 100;
  int samples = 500;
  bool skip_time = false;
  bool svg = false;
};

std::vector<fp::Vec2> sample_path(const fp::BSplinePath& path, int n) {
  std::vector<fp::Vec2> pts;
  for (int i = 0; i <= n; ++i) {
    pts.push_back(fp::eval_jet(path, static_cast<double>(i) / n, 0).zeta);
  }
  return pts;
}

std::vector<fp::Polygon> path_footprints(const fp::BSplinePath& path,
                                         const fp::SliderParams& params,
                                         int n) {
  std::vector<fp::Polygon> out;
  for (int i = 0; i <= n; ++i) {
    const fp::FlatJet j = fp::eval_jet(path, static_cast<double>(i) / n, 2);
    out.push_back(fp::slider_polygon(fp::inflate_state(j, params).slider, params));
  }
  return out;
}

int run_plan(const PlanCmd& c) {
  const fp::Scene scene = fp::load_scene(c.scene);
  std::filesystem::create_directories(c.out);
  const std::filesystem::path dir(c.out);

  const fp::BSplinePath init = fp::default_init_path(scene);
  fp::GeometricOptions gopt;
  gopt.grid = c.grid;
  const fp::GeometricPlan geo = fp::plan_geometric(scene, init, gopt);
  std::cout << "geometric: length=" << fp::format_number(geo.length)
            << " iterations=" << geo.solver.iterations
            << " max_violation=" << fp::format_number(geo.residuals.max_violation())
            << '\n';

  if (c.svg) {
    fp::SvgLayer li{sample_path(init, 200), {}, "#7f7f7f", "initial path"};
    fp::SvgLayer ls{sample_path(geo.path, 200),
                    path_footprints(geo.path, scene.params, 20), "#1f77b4",
                    "shortest path"};
    fp::write_file((dir / "init.svg").string(),
                   fp::render_svg(scene.obstacles, {li}));
    fp::write_file((dir / "shortest.svg").string(),
                   fp::render_svg(scene.obstacles, {ls}));
  }

  if (c.skip_time) {
    fp::write_file((dir / "plan.json").string(),
                   fp::geometric_plan_to_json(geo));
    return kOk;
  }

  fp::TimeOptions topt;
  topt.K = c.grid_k;
  const fp::TimePlan time =
      fp::plan_time(geo.path, scene.params, scene.bounds, topt);
  const auto rows = fp::sample_trajectory(time, scene.params, c.samples);
  std::cout << "time: T=" << fp::format_number(time.T)
            << " iterations=" << time.solver.iterations
            << " kkt=" << fp::format_number(time.solver.kkt_residual) << '\n';
  fp::write_file((dir / "plan.json").string(), fp::plan_to_json(geo, time));
  std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
  if (!csv) throw fp::DomainError("cannot write trajectory.csv");
  fp::write_trajectory_csv(csv, rows);

  if (c.svg) {
    // footprints at uniform time instants: spacing shows the speed
    fp::SvgLayer lf;
    lf.color = "#2ca02c";
    lf.label = "fastest path";
    std::vector<fp::SliderState> states;
    for (const auto& r : rows) {
      states.push_back(r.slider);
      lf.polyline.emplace_back(r.slider.x, r.slider.y);
    }
    lf.footprints = footprints(states, scene.params, 25);
    fp::write_file((dir / "fastest.svg").string(),
                   fp::render_svg(scene.obstacles, {lf}));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flatpush: planar pusher-slider planning toolkit"};
  app.require_subcommand(1);

  BetaCmd beta;
  auto* cb = app.add_subcommand("beta", "geometric factors beta1 / beta2");
  cb->add_option("--a", beta.a, "slider width");
  cb->add_option("--b", beta.b, "slider length");
  cb->add_flag("--grid", beta.grid, "CSV scan over aspect ratios a/b");
  cb->add_option("--points", beta.points, "grid points");
  cb->add_option("--out", beta.out, "output file (default stdout)");

  SimulateCmd sim;
  auto* cs = app.add_subcommand("simulate", "open-loop RK4 simulation");
  add_slider_opts(cs, sim.slider);
  cs->add_option("--scenario", sim.scenario,
                 "push | zero | ellipse | lemniscate | waypoints");
  cs->add_option("--c0", sim.c0, "initial contact offset (push, zero)");
  cs->add_option("--T", sim.horizon, "horizon [s]");
  cs->add_option("--dt", sim.dt, "RK4 step (default T/1e4)");
  cs->add_option("--noise", sim.noise, "input noise standard deviation");
  cs->add_option("--intervals", sim.intervals, "noise grid intervals");
  cs->add_option("--seed", sim.seed, "noise generator seed");
  cs->add_flag("--keep-going", sim.keep_going, "do not stop on contact loss");
  cs->add_option("--out", sim.out, "CSV output (default stdout)");
  cs->add_option("--svg", sim.svg, "SVG snapshot file");

  InflateCmd inf;
  auto* ci = app.add_subcommand("inflate", "states and inputs of a flat path");
  add_slider_opts(ci, inf.slider);
  ci->add_option("--path", inf.path, "ellipse | lemniscate | waypoints");
  ci->add_option("--T", inf.horizon, "horizon [s]");
  ci->add_option("--samples", inf.samples, "number of intervals");
  ci->add_option("--out", inf.out, "CSV output (default stdout)");

  ReprofileCmd rep;
  auto* cr = app.add_subcommand("reprofile", "impose a velocity profile");
  add_slider_opts(cr, rep.slider);
  cr->add_option("--spline", rep.spline,
                 "spline JSON (default: built-in two-lobe path)");
  cr->add_option("--profile", rep.profile,
                 "constant[:v0] | trapezoidal:a0,delta | curvature:kappa0");
  cr->add_option("--T", rep.horizon, "horizon [s]");
  cr->add_option("--dt", rep.dt, "integration step (default T/2000)");
  cr->add_option("--out", rep.out, "CSV output (default stdout)");

  PlanCmd plan;
  auto* cp = app.add_subcommand("plan", "two-step time-optimal planning");
  cp->add_option("--scene", plan.scene, "scene JSON")->required();
  cp->add_option("--out", plan.out, "output directory");
  cp->add_option("--grid", plan.grid, "geometric trapezoid intervals");
  cp->add_option("--grid-k", plan.grid_k, "time grid intervals K");
  cp->add_option("--samples", plan.samples, "trajectory samples");
  cp->add_flag("--skip-time", plan.skip_time, "geometric step only");
  cp->add_flag("--svg", plan.svg, "write init/shortest/fastest SVG panels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kDomain;
  }

  try {
    if (*cb) return run_beta(beta);
    if (*cs) return run_simulate(sim);
    if (*ci) return run_inflate(inf);
    if (*cr) return run_reprofile(rep);
    if (*cp) return run_plan(plan);
  } catch (const fp::SolverError& e) {
    std::cerr << "solver: " << e.what() << '\n';
    return kSolver;
  } catch (const fp::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kSolver;
  } catch (const fp::NumericError& e) {
    std::cerr << "numeric: " << e.what() << '\n';
    return kNumeric;
  } catch (const fp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kDomain;
}
