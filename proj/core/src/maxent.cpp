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

#include "flatpush/maxent.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "flatpush/errors.hpp"

namespace flatpush {

namespace {

struct Integrals {
  double mass;   // int exp(-lambda (f - shift)) dA
  double first;  // int f exp(-lambda (f - shift)) dA
};

double feature(MomentKind kind, double rho) {
  return kind == MomentKind::kSquaredDistance ? rho * rho : rho;
}

// Quadrant [0, a/2] x [0, b/2] split along the diagonal into two polar
// sectors so the integrand is smooth in (radius, angle). Each sector is a
// tensor-product Gauss rule with `Nodes` points per direction.
template <int Nodes>
Integrals quadrant_integrals(double a, double b, MomentKind kind,
                             double lambda, double shift) {
  using Rule = boost::math::quadrature::gauss<double, Nodes>;
  const double half_a = a / 2.0;
  const double half_b = b / 2.0;
  const double split = std::atan2(half_b, half_a);

  auto sector = [&](double lo, double hi, bool bounded_by_x, bool first) {
    return Rule::integrate(
        [&](double angle) {
          const double reach = bounded_by_x ? half_a / std::cos(angle)
                                            : half_b / std::sin(angle);
          return Rule::integrate(
              [&](double rho) {
                const double f = feature(kind, rho);
                const double w = std::exp(-lambda * (f - shift)) * rho;
                return first ? f * w : w;
              },
              0.0, reach);
        },
        lo, hi);
  };
  const double half_pi = 0.5 * M_PI;
  return {sector(0.0, split, true, false) + sector(split, half_pi, false, false),
          sector(0.0, split, true, true) + sector(split, half_pi, false, true)};
}

double shift_for(double a, double b, MomentKind kind, double lambda) {
  return lambda < 0.0 ? maxent_moment_limit(a, b, kind) : 0.0;
}

void require_dims(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("rectangle dimensions must be positive");
  }
}

}  // namespace

double maxent_moment_limit(double a, double b, MomentKind kind) {
  require_dims(a, b);
  const double corner = 0.5 * std::hypot(a, b);
  return feature(kind, corner);
}

double maxent_moment(double a, double b, MomentKind kind, double lambda) {
  require_dims(a, b);
  const double shift = shift_for(a, b, kind, lambda);
  const Integrals fine = quadrant_integrals<64>(a, b, kind, lambda, shift);
  const double moment = fine.first / fine.mass;
  const Integrals coarse = quadrant_integrals<32>(a, b, kind, lambda, shift);
  const double check = coarse.first / coarse.mass;
  if (!std::isfinite(moment) ||
      std::abs(moment - check) > 1e-9 * std::max(1.0, std::abs(moment))) {
    std::ostringstream msg;
    msg << "moment quadrature unresolved at lambda=" << lambda
        << " (64-node " << moment << " vs 32-node " << check << ")";
    throw NumericError(msg.str());
  }
  return moment;
}

MaxEntFit maxent_fit(double a, double b, MomentKind kind, double target) {
  require_dims(a, b);
  const double upper = maxent_moment_limit(a, b, kind);
  if (!(target > 0.0) || !(target < upper)) {
    std::ostringstream msg;
    msg << "moment target " << target << " outside attainable range (0, "
        << upper << ")";
    throw InfeasibleError(msg.str());
  }

  // The moment is strictly decreasing in lambda (its derivative is minus
  // the variance of f), so expand a bracket and solve.
  const auto residual = [&](double lambda) {
    return maxent_moment(a, b, kind, lambda) - target;
  };
  const double scale = 1.0 / upper;
  double lo = -scale;
  double hi = scale;
  int expansions = 0;
  while (residual(lo) < 0.0) {
    lo *= 2.0;
    if (++expansions > 60) throw NumericError("cannot bracket lambda below");
  }
  expansions = 0;
  while (residual(hi) > 0.0) {
    hi *= 2.0;
    if (++expansions > 60) throw NumericError("cannot bracket lambda above");
  }

  double lambda = 0.0;
  if (residual(0.0) == 0.0) {
    lambda = 0.0;
  } else {
    std::uintmax_t iterations = 200;
    const auto [left, right] = boost::math::tools::toms748_solve(
        residual, lo, hi, boost::math::tools::eps_tolerance<double>(52),
        iterations);
    if (iterations >= 200) {
      throw NumericError("maxent root finder did not converge");
    }
    lambda = 0.5 * (left + right);
  }

  MaxEntFit fit;
  fit.lambda = lambda;
  const Integrals plain = quadrant_integrals<64>(a, b, kind, lambda, 0.0);
  fit.mu = 1.0 / (4.0 * plain.mass);
  fit.moment = maxent_moment(a, b, kind, lambda);
  fit.residual = std::abs(fit.moment - target);
  return fit;
}

}  // namespace flatpush
