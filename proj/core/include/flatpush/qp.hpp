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

#include <string>

#include <Eigen/Core>

namespace flatpush {

// min 1/2 x'Hx + g'x  s.t.  A x = b,  C x >= d.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd C;
  Eigen::VectorXd d;
};

enum class QpStatus { kOptimal, kIterationLimit, kInconsistentEqualities,
                      kNumericalFailure };

std::string to_string(QpStatus status);

struct QpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd y;       // equality multipliers
  Eigen::VectorXd lambda;  // inequality multipliers, >= 0
  QpStatus status = QpStatus::kNumericalFailure;
  int iterations = 0;
};

struct QpOptions {
  int max_iterations = 120;
  double tolerance = 1e-10;
};

// Eliminates the equalities with a column-pivoted QR null-space basis and
// runs a Mehrotra predictor-corrector interior point method on the reduced
// problem. H must be positive definite on the null space of A.
QpResult solve_qp(const QpProblem& problem, const QpOptions& options = {});

}  // namespace flatpush
