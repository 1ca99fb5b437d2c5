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

#include "flatpush/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "flatpush/errors.hpp"
#include "flatpush/log.hpp"

namespace flatpush {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> uniform_grid(int intervals) {
  std::vector<double> tau(intervals + 1);
  for (int k = 0; k <= intervals; ++k) {
    tau[k] = static_cast<double>(k) / intervals;
  }
  tau.back() = 1.0;
  return tau;
}

Eigen::VectorXd flatten(const std::vector<Vec2>& pts) {
  Eigen::VectorXd x(2 * pts.size());
  for (size_t i = 0; i < pts.size(); ++i) x.segment<2>(2 * i) = pts[i];
  return x;
}

std::vector<Vec2> unflatten(const Eigen::VectorXd& x) {
  std::vector<Vec2> pts(x.size() / 2);
  for (size_t i = 0; i < pts.size(); ++i) pts[i] = x.segment<2>(2 * i);
  return pts;
}

SolverReport report(const NlpResult& r) {
  return {r.status, r.iterations, r.kkt_residual, r.max_violation};
}

std::string describe(const NlpResult& r) {
  std::ostringstream os;
  os << "status=" << to_string(r.status) << " iterations=" << r.iterations
     << " kkt=" << r.kkt_residual << " max_violation=" << r.max_violation;
  return os.str();
}

}  // namespace

double StateResiduals::max_violation() const {
  double v = 0.0;
  for (const auto& row : clearance) {
    for (double d : row) v = std::max(v, -d);
  }
  for (double c : contact) v = std::max(v, -c);
  return v;
}

double StateResiduals::min_clearance() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : clearance) {
    for (double d : row) m = std::min(m, d);
  }
  return m;
}

StateResiduals state_residuals(const Scene& scene, const BSplinePath& path,
                               int grid) {
  StateResiduals out;
  out.tau = uniform_grid(grid);
  out.clearance.resize(out.tau.size());
  out.contact.resize(out.tau.size());
  const double half_a = scene.params.a() / 2.0;
  for (size_t k = 0; k < out.tau.size(); ++k) {
    const FlatJet jet = eval_jet(path, out.tau[k], 2);
    const FullState st = inflate_state(jet, scene.params);
    out.contact[k] = half_a - std::abs(st.slider.c);
    const Polygon body = slider_polygon(st.slider, scene.params);
    out.clearance[k].reserve(scene.obstacles.size());
    for (const Obstacle& obs : scene.obstacles) {
      out.clearance[k].push_back(obstacle_distance(body, obs) -
                                 scene.clearance);
    }
  }
  return out;
}

BSplinePath default_init_path(const Scene& scene, int degree,
                              int knot_count) {
  std::vector<Vec2> way;
  way.push_back(scene.start);
  way.insert(way.end(), scene.init_via.begin(), scene.init_via.end());
  way.push_back(scene.goal);
  if (way.size() > 2) return fit_interpolating(way, degree, knot_count);

  // Chord with control points at the Greville abscissae, which makes the
  // parametrization uniform.
  const int n = BSplinePath::control_point_count(degree, knot_count);
  const auto knots = BSplinePath::clamped_uniform_knots(degree, knot_count);
  std::vector<Vec2> cps(n);
  for (int i = 0; i < n; ++i) {
    double g = 0.0;
    for (int j = 1; j <= degree; ++j) g += knots[i + j];
    g /= degree;
    cps[i] = scene.start + g * (scene.goal - scene.start);
  }
  return BSplinePath(degree, knots, cps);
}

GeometricPlan plan_geometric(const Scene& scene, const BSplinePath& init,
                             const GeometricOptions& options) {
  scene.validate();
  if (options.grid < 2) throw DomainError("geometric grid must be >= 2");
  // the footprint contains its centroid, whatever the heading
  for (const auto& [name, point] : {std::pair{"start", scene.start}, {"goal", scene.goal}}) {
    const double e = 1e-6;
    const Polygon dot({point + Vec2(-e, -e), point + Vec2(e, -e), point + Vec2(e, e),
                       point + Vec2(-e, e)});
    for (const Obstacle& obs : scene.obstacles) {
      if (obstacle_distance(dot, obs) + std::sqrt(2.0) * e < scene.clearance) {
        throw SolverError(std::string("geometric planning failed: ") + name +
                          " centroid lies within the clearance of an obstacle");
      }
    }
  }
  const int grid = options.grid;
  const std::vector<double> tau = uniform_grid(grid);
  const double h = 1.0 / grid;
  const auto make_path = [&](const Eigen::VectorXd& x) {
    return init.with_control_points(unflatten(x));
  };

  const int ncp = static_cast<int>(init.control_points().size());
  NlpProblem p;
  p.dimension = 2 * ncp;
  p.initial_guess = flatten(init.control_points());
  p.objective = [&](const Eigen::VectorXd& x) {
    const BSplinePath path = make_path(x);
    double f = 0.0;
    for (int k = 0; k <= grid; ++k) {
      const double w = (k == 0 || k == grid) ? 0.5 * h : h;
      const double s = eval_jet(path, tau[k], 1).d1.norm();
      f += w * (s + options.gamma * s * s);
    }
    return f;
  };
  p.equalities = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd c(4);
    c << x.head<2>() - scene.start, x.tail<2>() - scene.goal;
    return c;
  };
  p.equality_jacobian = [&](const Eigen::VectorXd&) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4, p.dimension);
    J(0, 0) = J(1, 1) = 1.0;
    J(2, p.dimension - 2) = J(3, p.dimension - 1) = 1.0;
    return J;
  };
  const size_t per_node = scene.obstacles.size() + 2;
  p.inequalities = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(per_node * (grid + 1)));
    try {
      const BSplinePath path = make_path(x);
      const double half_a = scene.params.a() / 2.0;
      Eigen::Index i = 0;
      for (int k = 0; k <= grid; ++k) {
        const FlatJet jet = eval_jet(path, tau[k], 2);
        const FullState st = inflate_state(jet, scene.params);
        const Polygon body = slider_polygon(st.slider, scene.params);
        for (const Obstacle& obs : scene.obstacles) {
          c[i++] = obstacle_distance(body, obs) - scene.clearance;
        }
        c[i++] = half_a - st.slider.c;
        c[i++] = half_a + st.slider.c;
      }
    } catch (const Error&) {
      c.setConstant(kNaN);
    }
    return c;
  };

  const NlpResult r = nlp_solve(p, options.nlp);
  log_info("geometric step: " + describe(r));
  GeometricPlan out{make_path(r.x), r.objective, 0.0, {}, report(r)};
  if (!r.ok()) {
    std::ostringstream os;
    os << "geometric planning failed: " << describe(r);
    try {
      const StateResiduals res = state_residuals(scene, out.path, grid);
      int worst = 0;
      double worst_v = -std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < res.tau.size(); ++k) {
        double v = -res.contact[k];
        for (double d : res.clearance[k]) v = std::max(v, -d);
        if (v > worst_v) {
          worst_v = v;
          worst = static_cast<int>(k);
        }
      }
      os << "; worst node tau=" << res.tau[worst] << " violation=" << worst_v
         << " (contact margin " << res.contact[worst] << ", clearance";
      for (double d : res.clearance[worst]) os << ' ' << d;
      os << ')';
    } catch (const Error&) {
      os << "; final path is singular";
    }
    throw SolverError(os.str());
  }
  out.length = arc_length(out.path);
  out.residuals = state_residuals(scene, out.path, grid);
  return out;
}

ZState TimePlan::node(int k) const {
  const int K = static_cast<int>(z.size()) - 1;
  return {z[k], z1[k], z2[k], k < K ? v[k] : (K > 0 ? v[K - 1] : 0.0)};
}

double linear_z_interval_time(double h, double z0, double z1) {
  return 2.0 * h / (std::sqrt(z0) + std::sqrt(z1));
}

InflatedInput node_inputs(const BSplinePath& path, const SliderParams& params,
                          double tau, const ZState& z) {
  const FlatJet g = eval_jet(path, tau, 4);
  if (!(z.z > 0.0)) {
    InflatedInput in;
    in.pusher_heading = inflate_input(g, params).pusher_heading;
    return in;
  }
  return inflate_input(geometric_to_time(g, tau_jet_from_z(z)), params);
}

TimePlan plan_time(const BSplinePath& path, const SliderParams& params,
                   const InputBounds& bounds, const TimeOptions& options) {
  const int K = options.K;
  if (K < 2) throw DomainError("time grid must have at least 2 intervals");
  if (!(bounds.v_p > 0.0) || !(bounds.omega_p > 0.0)) {
    throw DomainError("input bounds must be positive");
  }
  const double h = 1.0 / K;
  const std::vector<double> tau = uniform_grid(K);

  // Geometric quantities per node; inputs scale linearly with tau_dot, so
  // these also give the rates at unit tau_dot.
  std::vector<FlatJet> jets(K + 1);
  std::vector<InflatedInput> unit(K + 1);
  for (int k = 0; k <= K; ++k) {
    jets[k] = eval_jet(path, tau[k], 4);
    if (jets[k].d1.norm() <= kSingularSpeed) {
      throw SingularJetError(SingularJetError::Which::kPath,
                             "path is singular at tau=" +
                                 std::to_string(tau[k]));
    }
    unit[k] = inflate_input(geometric_to_time(jets[k], {tau[k], 1, 0, 0, 0}),
                            params);
  }

  const bool has_vp = std::isfinite(bounds.v_p);
  const bool has_w = std::isfinite(bounds.omega_p);
  const double vn_scale = has_vp ? bounds.v_p : 1.0;
  const int per_node = (has_vp ? 1 : 0) + (has_w ? 2 : 0) + 1;

  // Layout: z_1..z_{K-1}, zp_0..zp_K, zpp_0..zpp_K, v_0..v_{K-1}; the
  // derivatives are scaled by h, h^2 and h^3.
  const Eigen::Index nz = K - 1;
  const auto iz = [&](int k) -> Eigen::Index { return k - 1; };
  const auto iz1 = [&](int k) -> Eigen::Index { return nz + k; };
  const auto iz2 = [&](int k) -> Eigen::Index { return nz + (K + 1) + k; };
  const auto iv = [&](int k) -> Eigen::Index { return nz + 2 * (K + 1) + k; };
  const Eigen::Index n = nz + 2 * (K + 1) + K;
  const auto zval = [&](const Eigen::VectorXd& x, int k) {
    return (k == 0 || k == K) ? 0.0 : x[iz(k)];
  };
  const auto zstate = [&](const Eigen::VectorXd& x, int k) {
    return ZState{zval(x, k), x[iz1(k)] / h, x[iz2(k)] / (h * h),
                  (k < K ? x[iv(k)] : x[iv(K - 1)]) / (h * h * h)};
  };

  const auto node_constraints = [&](const ZState& zs, int k,
                                    Eigen::Ref<Eigen::VectorXd> out) {
    const InflatedInput in = node_inputs(path, params, tau[k], zs);
    Eigen::Index i = 0;
    if (has_vp) out[i++] = 1.0 - in.car.v / bounds.v_p;
    if (has_w) {
      out[i++] = 1.0 - in.car.omega / bounds.omega_p;
      out[i++] = 1.0 + in.car.omega / bounds.omega_p;
    }
    out[i++] = (in.contact.v_n - bounds.v_n_min) / vn_scale;
  };

  NlpProblem p;
  p.dimension = n;
  p.objective = [&](const Eigen::VectorXd& x) {
    double f = 0.0;
    for (int k = 0; k < K; ++k) {
      const double a = zval(x, k), b = zval(x, k + 1);
      if (a < 0.0 || b < 0.0) return kNaN;
      f += linear_z_interval_time(h, a, b);
    }
    return f;
  };
  p.gradient = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < K; ++k) {
      const double a = zval(x, k), b = zval(x, k + 1);
      const double s = std::sqrt(a) + std::sqrt(b);
      const double c = -h / (s * s);
      if (k > 0) g[iz(k)] += c / std::sqrt(a);
      if (k + 1 < K) g[iz(k + 1)] += c / std::sqrt(b);
    }
    return g;
  };
  p.objective_hessian = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < K; ++k) {
      const double a = zval(x, k), b = zval(x, k + 1);
      const double ra = std::sqrt(a), rb = std::sqrt(b), s = ra + rb;
      if (k > 0) {
        H(iz(k), iz(k)) += h / (s * s * s * a) + h / (2.0 * s * s * a * ra);
      }
      if (k + 1 < K) {
        H(iz(k + 1), iz(k + 1)) +=
            h / (s * s * s * b) + h / (2.0 * s * s * b * rb);
      }
      if (k > 0 && k + 1 < K) {
        const double c = h / (s * s * s * ra * rb);
        H(iz(k), iz(k + 1)) += c;
        H(iz(k + 1), iz(k)) += c;
      }
    }
    return H;
  };
  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(3 * K, n);
  for (int k = 0; k < K; ++k) {
    const Eigen::Index r = 3 * k;
    if (k + 1 < K) Aeq(r, iz(k + 1)) = 1.0;
    if (k > 0) Aeq(r, iz(k)) = -1.0;
    Aeq(r, iz1(k)) = -1.0;
    Aeq(r, iz2(k)) = -0.5;
    Aeq(r, iv(k)) = -1.0 / 6.0;
    Aeq(r + 1, iz1(k + 1)) = 1.0;
    Aeq(r + 1, iz1(k)) = -1.0;
    Aeq(r + 1, iz2(k)) = -1.0;
    Aeq(r + 1, iv(k)) = -0.5;
    Aeq(r + 2, iz2(k + 1)) = 1.0;
    Aeq(r + 2, iz2(k)) = -1.0;
    Aeq(r + 2, iv(k)) = -1.0;
  }
  p.equalities = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return Aeq * x;
  };
  p.equality_jacobian = [&](const Eigen::VectorXd&) { return Aeq; };

  const Eigen::Index mi = nz * (1 + per_node);
  p.inequalities = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd c(mi);
    try {
      for (int k = 1; k < K; ++k) {
        c[iz(k)] = x[iz(k)] - options.z_floor;
        node_constraints(zstate(x, k), k,
                         c.segment(nz + (k - 1) * per_node, per_node));
      }
    } catch (const Error&) {
      c.setConstant(kNaN);
    }
    return c;
  };
  p.inequality_jacobian = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(mi, n);
    Eigen::VectorXd c0(per_node), c1(per_node);
    for (int k = 1; k < K; ++k) {
      J(iz(k), iz(k)) = 1.0;
      const ZState zs = zstate(x, k);
      node_constraints(zs, k, c0);
      const Eigen::Index row = nz + (k - 1) * per_node;
      const Eigen::Index cols[4] = {iz(k), iz1(k), iz2(k), iv(k)};
      const double scales[4] = {1.0, 1.0 / h, 1.0 / (h * h),
                                1.0 / (h * h * h)};
      for (int j = 0; j < 4; ++j) {
        const double xj = x[cols[j]];
        const double step = options.nlp.fd_step * std::max(1.0, std::abs(xj));
        ZState zp = zs;
        double* field[4] = {&zp.z, &zp.z1, &zp.z2, &zp.v};
        *field[j] += step * scales[j];
        node_constraints(zp, k, c1);
        J.block(row, cols[j], per_node, 1) = (c1 - c0) / step;
      }
    }
    return J;
  };

  // Constant slider speed at the given fraction of the tightest bound.
  double speed = std::numeric_limits<double>::infinity();
  for (int k = 1; k < K; ++k) {
    const double psi = 1.0 / jets[k].d1.norm();
    if (has_vp && unit[k].car.v > 0.0) {
      speed = std::min(speed, bounds.v_p / (unit[k].car.v * psi));
    }
    if (has_w && std::abs(unit[k].car.omega) > 0.0) {
      speed = std::min(speed,
                       bounds.omega_p / (std::abs(unit[k].car.omega) * psi));
    }
  }
  if (!std::isfinite(speed)) {
    throw DomainError("time planning needs at least one finite input bound");
  }
  speed *= options.margin;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  for (int k = 1; k < K; ++k) {
    const double rate = speed / jets[k].d1.norm();
    x0[iz(k)] = std::max(rate * rate, 10.0 * options.z_floor);
  }
  p.initial_guess = x0;

  const NlpResult r = nlp_solve(p, options.nlp);
  log_info("time step: " + describe(r));
  if (!r.ok()) throw SolverError("time planning failed: " + describe(r));

  TimePlan out{path, tau, {}, {}, {}, {}, {}, 0.0, report(r)};
  out.z.resize(K + 1);
  out.z1.resize(K + 1);
  out.z2.resize(K + 1);
  out.v.resize(K);
  for (int k = 0; k <= K; ++k) {
    const ZState zs = zstate(r.x, k);
    out.z[k] = zs.z;
    out.z1[k] = zs.z1;
    out.z2[k] = zs.z2;
    if (k < K) out.v[k] = zs.v;
  }
  out.t.assign(K + 1, 0.0);
  for (int k = 0; k < K; ++k) {
    out.t[k + 1] = out.t[k] + linear_z_interval_time(h, out.z[k], out.z[k + 1]);
  }
  out.T = out.t.back();
  return out;
}

TauAt tau_at_time(const TimePlan& plan, double t) {
  const auto& ts = plan.t;
  const int K = static_cast<int>(ts.size()) - 1;
  if (t <= 0.0) return {0.0, std::sqrt(plan.z.front())};
  if (t >= ts.back()) return {1.0, std::sqrt(plan.z.back())};
  int k = static_cast<int>(std::upper_bound(ts.begin(), ts.end(), t) -
                           ts.begin()) - 1;
  k = std::clamp(k, 0, K - 1);
  const double h = plan.tau[k + 1] - plan.tau[k];
  const double r0 = std::sqrt(plan.z[k]);
  const double slope = (plan.z[k + 1] - plan.z[k]) / h;
  const double dt = t - ts[k];
  const double s = r0 + 0.5 * slope * dt;
  const double tau = std::min(plan.tau[k] + 0.5 * dt * (s + r0),
                              plan.tau[k + 1]);
  return {tau, s};
}

std::vector<TrajectoryRow> sample_trajectory(const TimePlan& plan,
                                             const SliderParams& params,
                                             int samples) {
  if (samples < 1) throw DomainError("trajectory needs at least one sample");
  std::vector<TrajectoryRow> rows;
  rows.reserve(samples + 1);
  std::optional<double> ref;
  for (int i = 0; i <= samples; ++i) {
    TrajectoryRow row;
    row.t = plan.T * i / samples;
    const TauAt at = tau_at_time(plan, row.t);
    row.tau = at.tau;
    const FlatJet g = eval_jet(plan.path, at.tau, 4);
    const FullState st = inflate_state(g, params, ref);
    row.slider = st.slider;
    row.pusher = st.pusher;
    ref = st.slider.theta;
    if (at.tau_dot > 0.0) {
      // cubic z law between nodes, as seen by the node constraints
      const int K = static_cast<int>(plan.tau.size()) - 1;
      const int k = std::clamp(static_cast<int>(at.tau * K), 0, K - 1);
      const double s = at.tau - plan.tau[k];
      const double v = plan.v[k];
      const ZState zs{plan.z[k] + s * plan.z1[k] + s * s / 2.0 * plan.z2[k] +
                          s * s * s / 6.0 * v,
                      plan.z1[k] + s * plan.z2[k] + s * s / 2.0 * v,
                      plan.z2[k] + s * v, v};
      const InflatedInput in = node_inputs(plan.path, params, at.tau, zs);
      row.contact = in.contact;
      row.car = in.car;
    }
    rows.push_back(row);
  }
  return rows;
}

Plan plan(const Scene& scene, const BSplinePath& init,
          const GeometricOptions& geometric, const TimeOptions& time,
          int samples) {
  GeometricPlan g = plan_geometric(scene, init, geometric);
  TimePlan t = plan_time(g.path, scene.params, scene.bounds, time);
  std::vector<TrajectoryRow> rows = sample_trajectory(t, scene.params, samples);
  return {std::move(g), std::move(t), std::move(rows)};
}

}  // namespace flatpush
