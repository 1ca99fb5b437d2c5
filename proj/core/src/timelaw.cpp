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

#include "flatpush/timelaw.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "flatpush/errors.hpp"

namespace flatpush {

namespace {

template <class F>
double integrate_segments(const std::vector<double>& breakpoints, F f) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] <= breakpoints[i]) continue;
    total += Quad::integrate(f, breakpoints[i], breakpoints[i + 1], 12, 1e-12);
  }
  return total;
}

TauJet eq20_tau_jet(double tau, const PsiJet& p,
                    const VelocityProfile::Derivatives& v) {
  TauJet j;
  j.tau = tau;
  j.d1 = p.psi * v[0];
  j.d2 = p.d1 * j.d1 * v[0] + p.psi * v[1];
  j.d3 = (p.d2 * j.d1 * j.d1 + p.d1 * j.d2) * v[0] + 2.0 * p.d1 * j.d1 * v[1] +
         p.psi * v[2];
  j.d4 = (p.d3 * j.d1 * j.d1 * j.d1 + 3.0 * p.d2 * j.d1 * j.d2 + p.d1 * j.d3) *
             v[0] +
         (3.0 * p.d2 * j.d1 * j.d1 + 3.0 * p.d1 * j.d2) * v[1] +
         3.0 * p.d1 * j.d1 * v[2] + p.psi * v[3];
  return j;
}

double curvature_rate(const PathField& path, double kappa0, double tau) {
  const FlatJet jet = path.jet(std::clamp(tau, 0.0, 1.0));
  return curvature_law(jet, psi_jet(jet), kappa0);
}

}  // namespace

PathField PathField::from_spline(const BSplinePath& path) {
  PathField field;
  field.jet = [path](double tau) { return eval_jet(path, tau, 4); };
  field.breakpoints = path.breakpoints();
  return field;
}

FlatJet geometric_to_time(const FlatJet& g, const TauJet& t) {
  FlatJet out;
  out.order = g.order;
  out.zeta = g.zeta;
  out.d1 = t.d1 * g.d1;
  out.d2 = t.d2 * g.d1 + t.d1 * t.d1 * g.d2;
  out.d3 = t.d3 * g.d1 + 3.0 * t.d1 * t.d2 * g.d2 + t.d1 * t.d1 * t.d1 * g.d3;
  out.d4 = t.d4 * g.d1 + (4.0 * t.d1 * t.d3 + 3.0 * t.d2 * t.d2) * g.d2 +
           6.0 * t.d1 * t.d1 * t.d2 * g.d3 +
           t.d1 * t.d1 * t.d1 * t.d1 * g.d4;
  return out;
}

PsiJet psi_jet(const FlatJet& g) {
  const double S = g.d1.squaredNorm();
  const double s = std::sqrt(S);
  if (!(s >= kSingularSpeed)) {
    std::ostringstream msg;
    msg << "path speed vanishes: |zeta'| = " << s;
    throw SingularJetError(SingularJetError::Which::kPath, msg.str());
  }
  const double S32 = S * s;
  const double S52 = S32 * S;
  const double S72 = S52 * S;
  const double g1 = g.d1.dot(g.d2);                         // S' / 2
  const double h = g.d2.squaredNorm() + g.d1.dot(g.d3);     // g1'
  const double h1 = 3.0 * g.d2.dot(g.d3) + g.d1.dot(g.d4);  // h'

  PsiJet p;
  p.psi = 1.0 / s;
  p.d1 = -g1 / S32;
  if (g.order >= 3) p.d2 = -h / S32 + 3.0 * g1 * g1 / S52;
  if (g.order >= 4) {
    p.d3 = -h1 / S32 + 9.0 * g1 * h / S52 - 15.0 * g1 * g1 * g1 / S72;
  }
  return p;
}

double curvature_law(const FlatJet& g, const PsiJet& p, double kappa0) {
  if (!(kappa0 > 0.0)) throw DomainError("kappa0 must be positive");
  // Second derivative with respect to arc length.
  const Vec2 dds = p.psi * p.psi * g.d2 + p.d1 * p.psi * g.d1;
  return p.psi / (kappa0 + dds.norm());
}

TauJet tau_jet_from_z(const ZState& s) {
  if (!(s.z >= 0.0)) throw DomainError("z must be non-negative");
  const double root = std::sqrt(s.z);
  TauJet j;
  j.d1 = root;
  j.d2 = 0.5 * s.z1;
  j.d3 = 0.5 * root * s.z2;
  j.d4 = 0.5 * s.z * s.v + 0.25 * s.z1 * s.z2;
  return j;
}

TauJet autonomous_tau_jet(const std::function<double(double)>& rate,
                          double tau) {
  constexpr int kPoints = 7;
  constexpr double kStep = 1e-3;
  // Stencil centred on tau, slid inward to stay on [0, 1].
  double first = tau - 3.0 * kStep;
  first = std::clamp(first, 0.0, 1.0 - (kPoints - 1) * kStep);
  Eigen::Matrix<double, kPoints, kPoints> vander;
  Eigen::Matrix<double, kPoints, 1> values;
  for (int i = 0; i < kPoints; ++i) {
    const double s = (first + i * kStep - tau) / kStep;
    double power = 1.0;
    for (int k = 0; k < kPoints; ++k) {
      vander(i, k) = power;
      power *= s;
    }
    values[i] = rate(first + i * kStep);
  }
  const Eigen::Matrix<double, kPoints, 1> c = vander.partialPivLu().solve(values);
  const double chi = rate(tau);
  const double c1 = c[1] / kStep;
  const double c2 = 2.0 * c[2] / (kStep * kStep);
  const double c3 = 6.0 * c[3] / (kStep * kStep * kStep);

  TauJet j;
  j.tau = tau;
  j.d1 = chi;
  j.d2 = c1 * chi;
  j.d3 = c2 * chi * chi + c1 * c1 * chi;
  j.d4 = c3 * chi * chi * chi + 4.0 * c2 * c1 * chi * chi + c1 * c1 * c1 * chi;
  return j;
}

VelocityProfile VelocityProfile::constant(double v0) {
  if (!(v0 >= 0.0)) throw DomainError("velocity must be non-negative");
  VelocityProfile p;
  p.kind_ = Kind::kConstant;
  p.v0_ = v0;
  return p;
}

VelocityProfile VelocityProfile::trapezoidal(double a0, double delta) {
  if (!(a0 > 0.0) || !(delta > 0.0)) {
    throw DomainError("trapezoidal profile needs a0 > 0 and delta > 0");
  }
  VelocityProfile p;
  p.kind_ = Kind::kTrapezoidal;
  p.a0_ = a0;
  p.delta_ = delta;
  return p;
}

VelocityProfile VelocityProfile::curvature(double kappa0) {
  if (!(kappa0 > 0.0)) throw DomainError("kappa0 must be positive");
  VelocityProfile p;
  p.kind_ = Kind::kCurvature;
  p.kappa0_ = kappa0;
  return p;
}

VelocityProfile VelocityProfile::custom(Custom fn,
                                        std::vector<double> breakpoints) {
  VelocityProfile p;
  p.kind_ = Kind::kCustom;
  p.custom_ = std::move(fn);
  p.custom_breakpoints_ = std::move(breakpoints);
  return p;
}

VelocityProfile::Derivatives VelocityProfile::at(double t) const {
  Derivatives d{0.0, 0.0, 0.0, 0.0};
  switch (kind_) {
    case Kind::kConstant:
      d[0] = v0_;
      break;
    case Kind::kTrapezoidal:
      if (t < delta_) {
        d = {a0_ * t, a0_, 0.0, 0.0};
      } else if (t < 2.0 * delta_) {
        d = {a0_ * delta_, 0.0, 0.0, 0.0};
      } else if (t <= 3.0 * delta_) {
        d = {a0_ * (3.0 * delta_ - t), -a0_, 0.0, 0.0};
      }
      break;
    case Kind::kCustom:
      d = custom_(t);
      break;
    case Kind::kCurvature:
      throw DomainError("curvature profile has no time parametrization");
  }
  for (double& x : d) x *= scale_;
  return d;
}

std::vector<double> VelocityProfile::breakpoints(double horizon) const {
  std::vector<double> raw;
  if (kind_ == Kind::kTrapezoidal) {
    raw = {delta_, 2.0 * delta_, 3.0 * delta_};
  } else if (kind_ == Kind::kCustom) {
    raw = custom_breakpoints_;
  }
  std::vector<double> out;
  for (double b : raw) {
    if (b > 0.0 && b < horizon) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double VelocityProfile::integral(double horizon) const {
  if (kind_ == Kind::kConstant) return scale_ * v0_ * horizon;
  std::vector<double> segments{0.0};
  for (double b : breakpoints(horizon)) segments.push_back(b);
  segments.push_back(horizon);
  return integrate_segments(segments, [&](double t) { return at(t)[0]; });
}

VelocityProfile VelocityProfile::scaled(double factor) const {
  VelocityProfile p = *this;
  p.scale_ *= factor;
  return p;
}

double path_length(const PathField& path) {
  return integrate_segments(path.breakpoints, [&](double tau) {
    return path.jet(tau).d1.norm();
  });
}

double eta_scale(const VelocityProfile& primitive, const PathField& path,
                 double horizon) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (primitive.kind() == VelocityProfile::Kind::kCurvature) {
    const double natural = integrate_segments(path.breakpoints, [&](double tau) {
      return 1.0 / curvature_rate(path, primitive.kappa0(), tau);
    });
    return natural / horizon / primitive.scale();
  }
  const double area = primitive.integral(horizon);
  if (!(area > 0.0)) {
    throw InfeasibleError("velocity primitive has zero integral over [0, T]");
  }
  return path_length(path) / area;
}

TimeLaw tau_from_velocity(const PathField& path, const VelocityProfile& profile,
                          double horizon, const TimeLawOptions& options) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (options.steps < 1) throw DomainError("need at least one step");
  const bool autonomous = profile.kind() == VelocityProfile::Kind::kCurvature;

  // Time grid with profile breakpoints on nodes.
  std::vector<double> edges{0.0};
  if (!autonomous) {
    for (double b : profile.breakpoints(horizon)) edges.push_back(b);
  }
  edges.push_back(horizon);
  std::vector<double> grid{0.0};
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double len = edges[i + 1] - edges[i];
    const int n = std::max(
        1, static_cast<int>(std::ceil(options.steps * len / horizon - 1e-9)));
    for (int k = 1; k <= n; ++k) {
      grid.push_back(k == n ? edges[i + 1] : edges[i] + len * k / n);
    }
  }

  const double chi_scale = profile.scale();
  const auto rate = [&](double t, double tau) {
    const double clamped = std::clamp(tau, 0.0, 1.0);
    if (autonomous) {
      return chi_scale * curvature_rate(path, profile.kappa0(), clamped);
    }
    return psi_jet(path.jet(clamped)).psi * profile.at(t)[0];
  };
  const auto jet_at = [&](double t, double tau) {
    const double clamped = std::clamp(tau, 0.0, 1.0);
    if (autonomous) {
      return autonomous_tau_jet(
          [&](double x) {
            return chi_scale * curvature_rate(path, profile.kappa0(), x);
          },
          clamped);
    }
    const FlatJet g = path.jet(clamped);
    return eq20_tau_jet(clamped, psi_jet(g), profile.at(t));
  };

  TimeLaw law;
  law.samples.reserve(grid.size());
  double tau = 0.0;
  law.samples.push_back({0.0, jet_at(0.0, tau)});
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t = grid[i];
    const double h = grid[i + 1] - t;
    const double mid = t + 0.5 * h;
    const double k1 = rate(t, tau);
    const double k2 = rate(mid, tau + 0.5 * h * k1);
    const double k3 = rate(mid, tau + 0.5 * h * k2);
    const double k4 = rate(t + h, tau + h * k3);
    tau += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(tau)) {
      throw NumericError("time law integration diverged",
                         static_cast<long>(i));
    }
    const bool last = i + 2 == grid.size();
    if (tau > 1.0 + options.end_tolerance && !last) {
      std::ostringstream msg;
      msg << "path coordinate reached " << tau << " at t=" << t + h
          << " before the horizon " << horizon << "; rescale the profile";
      throw OvershootError(msg.str(), t + h);
    }
    law.samples.push_back({t + h, jet_at(t + h, tau)});
    law.samples.back().tau.tau = tau;
  }
  law.final_tau = tau;
  if (tau > 1.0 + options.end_tolerance) {
    std::ostringstream msg;
    msg << "path coordinate overshoots to " << tau << " at the horizon";
    throw OvershootError(msg.str(), horizon);
  }
  law.completed = std::abs(tau - 1.0) <= options.end_tolerance;
  return law;
}

}  // namespace flatpush
