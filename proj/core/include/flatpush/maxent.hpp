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

namespace flatpush {

enum class MomentKind { kSquaredDistance, kDistance };

// rho(q) = mu * exp(-lambda * f(q)) on the centred a x b rectangle with
// f = |q|^2 or |q| and unit total force.
struct MaxEntFit {
  double mu = 0.0;
  double lambda = 0.0;
  double moment = 0.0;    // quadratured moment at lambda
  double residual = 0.0;  // |moment - target|
};

// Normalized moment E_rho[f] of the exponential-family density with
// parameter lambda, by 64x64 Gauss-Legendre per quadrant.
double maxent_moment(double a, double b, MomentKind kind, double lambda);

// Supremum of attainable moments (the corner value); the infimum is 0.
double maxent_moment_limit(double a, double b, MomentKind kind);

// Solves the moment constraint for lambda. Throws InfeasibleError when the
// target lies outside (0, corner value).
MaxEntFit maxent_fit(double a, double b, MomentKind kind, double target);

}  // namespace flatpush
