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

#include <Eigen/Core>

namespace flatpush {

// min f(x)  s.t.  h(x) = 0,  g(x) >= 0.
// Derivative callbacks are optional; missing ones are replaced by forward
// differences with relative step NlpOptions::fd_step.
struct NlpProblem {
  using Scalar = std::function<double(const Eigen::VectorXd&)>;
  using Vector = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using Matrix = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  Eigen::Index dimension = 0;
  Scalar objective;
  Vector gradient;
  Vector equalities;
  Matrix equality_jacobian;
  Vector inequalities;
  Matrix inequality_jacobian;
  // Optional objective Hessian. When given it replaces the BFGS matrix at
  // every iterate (constraint curvature is then neglected).
  Matrix objective_hessian;
  Eigen::VectorXd initial_guess;
};

enum class NlpStatus {
  kConverged,
  kIterationLimit,
  kLineSearchFailure,
  kInfeasibleSubproblem,
  kNonFiniteEvaluation,
};

std::string to_string(NlpStatus status);

struct NlpOptions {
  int max_iterations = 300;
  double kkt_tolerance = 1e-6;
  double feasibility_tolerance = 1e-6;
  double fd_step = 1e-7;
};

struct NlpResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  NlpStatus status = NlpStatus::kIterationLimit;
  int iterations = 0;
  double kkt_residual = 0.0;   // relative to max(1, |grad f|)
  double max_violation = 0.0;
  Eigen::VectorXd eq_multipliers;
  Eigen::VectorXd ineq_multipliers;

  bool ok() const { return status == NlpStatus::kConverged; }
};

// SQP: damped BFGS Hessian (or the supplied objective Hessian), interior-point QP subproblems with an elastic
// fallback, l1 merit with Armijo backtracking and second-order correction.
NlpResult nlp_solve(const NlpProblem& problem, const NlpOptions& options = {});

// Forward-difference helpers, also used by the planner for its sparse blocks.
Eigen::VectorXd fd_gradient(const NlpProblem::Scalar& f,
                            const Eigen::VectorXd& x, double step);
Eigen::MatrixXd fd_jacobian(const NlpProblem::Vector& c,
                            const Eigen::VectorXd& x, double step);

}  // namespace flatpush
