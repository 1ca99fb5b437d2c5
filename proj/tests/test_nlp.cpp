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
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <doctest.h>

#include "flatpush/nlp.hpp"
#include "flatpush/qp.hpp"

namespace fp = flatpush;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Enumerates every active set of a small inequality QP and keeps the best
// KKT point.
VectorXd qp_by_enumeration(const fp::QpProblem& qp) {
  const long n = qp.H.rows(), me = qp.A.rows(), mi = qp.C.rows();
  double best = std::numeric_limits<double>::infinity();
  VectorXd arg;
  for (long mask = 0; mask < (1L << mi); ++mask) {
    std::vector<long> act;
    for (long i = 0; i < mi; ++i) if (mask & (1L << i)) act.push_back(i);
    const long m = me + long(act.size());
    MatrixXd K = MatrixXd::Zero(n + m, n + m);
    VectorXd r(n + m);
    K.topLeftCorner(n, n) = qp.H;
    r.head(n) = -qp.g;
    for (long i = 0; i < me; ++i) {
      K.block(n + i, 0, 1, n) = qp.A.row(i);
      K.block(0, n + i, n, 1) = -qp.A.row(i).transpose();
      r[n + i] = qp.b[i];
    }
    for (size_t k = 0; k < act.size(); ++k) {
      K.block(n + me + k, 0, 1, n) = qp.C.row(act[k]);
      K.block(0, n + me + k, n, 1) = -qp.C.row(act[k]).transpose();
      r[n + me + k] = qp.d[act[k]];
    }
    Eigen::FullPivLU<MatrixXd> lu(K);
    if (lu.rank() < n + m) continue;
    const VectorXd sol = lu.solve(r);
    const VectorXd x = sol.head(n);
    if ((qp.C * x - qp.d).minCoeff() < -1e-9) continue;
    if (m > me && sol.tail(m - me).minCoeff() < -1e-9) continue;
    const double f = 0.5 * x.dot(qp.H * x) + qp.g.dot(x);
    if (f < best) {
      best = f;
      arg = x;
    }
  }
  return arg;
}

fp::NlpProblem rosenbrock() {
  fp::NlpProblem p;
  p.dimension = 2;
  p.objective = [](const VectorXd& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  p.gradient = [](const VectorXd& x) {
    VectorXd g(2);
    g << -400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]), 200 * (x[1] - x[0] * x[0]);
    return g;
  };
  p.initial_guess = VectorXd::Constant(2, -1.2);
  p.initial_guess[1] = 1.0;
  return p;
}

}  // namespace

TEST_CASE("random strictly convex QPs against active-set enumeration") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> u(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4, me = trial % 2, mi = 6;
    MatrixXd M(n, n);
    for (int i = 0; i < n; ++i) for (int j = 0; j < n; ++j) M(i, j) = u(rng);
    fp::QpProblem qp;
    qp.H = M * M.transpose() + 0.5 * MatrixXd::Identity(n, n);
    qp.g = VectorXd::NullaryExpr(n, [&] { return u(rng); });
    qp.A = MatrixXd::NullaryExpr(me, n, [&] { return u(rng); });
    qp.b = VectorXd::NullaryExpr(me, [&] { return 0.3 * u(rng); });
    qp.C = MatrixXd::NullaryExpr(mi, n, [&] { return u(rng); });
    qp.d = VectorXd::NullaryExpr(mi, [&] { return -std::abs(u(rng)); });
    // keep a strictly feasible point available
    if (me > 0) qp.b = qp.A * VectorXd::Zero(n);
    const auto res = fp::solve_qp(qp);
    REQUIRE(res.status == fp::QpStatus::kOptimal);
    const VectorXd ref = qp_by_enumeration(qp);
    CHECK((res.x - ref).norm() < 1e-7);
  }
}

TEST_CASE("inconsistent equalities are reported") {
  fp::QpProblem qp;
  qp.H = MatrixXd::Identity(2, 2);
  qp.g = VectorXd::Zero(2);
  qp.A = MatrixXd(2, 2);
  qp.A << 1, 1, 2, 2;
  qp.b = VectorXd(2);
  qp.b << 1, 3;
  qp.C = MatrixXd(0, 2);
  qp.d = VectorXd(0);
  CHECK(fp::solve_qp(qp).status == fp::QpStatus::kInconsistentEqualities);
}

TEST_CASE("active bound") {
  fp::NlpProblem p;
  p.dimension = 1;
  p.objective = [](const VectorXd& x) { return (x[0] - 1) * (x[0] - 1); };
  p.inequalities = [](const VectorXd& x) { return VectorXd::Constant(1, x[0] - 2); };
  p.initial_guess = VectorXd::Constant(1, 5.0);
  const auto r = fp::nlp_solve(p);
  REQUIRE(r.ok());
  CHECK(std::abs(r.x[0] - 2) < 1e-6);
  CHECK(std::abs(r.ineq_multipliers[0] - 2) < 1e-4);
}

TEST_CASE("rosenbrock") {
  fp::NlpOptions o;
  o.kkt_tolerance = 1e-10;
  const auto r = fp::nlp_solve(rosenbrock(), o);
  REQUIRE(r.ok());
  CHECK(std::abs(r.x[0] - 1) < 1e-6);
  CHECK(std::abs(r.x[1] - 1) < 1e-6);
}

TEST_CASE("disc constraint") {
  fp::NlpProblem p;
  p.dimension = 2;
  p.objective = [](const VectorXd& x) { return x[0] + x[1]; };
  p.inequalities = [](const VectorXd& x) { return VectorXd::Constant(1, 1 - x.squaredNorm()); };
  p.initial_guess = VectorXd::Zero(2);
  const auto r = fp::nlp_solve(p);
  REQUIRE(r.ok());
  CHECK(std::abs(r.x[0] + std::sqrt(0.5)) < 1e-6);
  CHECK(std::abs(r.x[1] + std::sqrt(0.5)) < 1e-6);
  CHECK(r.max_violation < 1e-6);
}

TEST_CASE("equality constrained") {
  fp::NlpProblem p;
  p.dimension = 3;
  p.objective = [](const VectorXd& x) { return x.squaredNorm(); };
  p.equalities = [](const VectorXd& x) {
    VectorXd h(2);
    h << x[0] + x[1] + x[2] - 3, x[0] * x[1] - 1;
    return h;
  };
  p.initial_guess = VectorXd::Constant(3, 2.0);
  const auto r = fp::nlp_solve(p);
  REQUIRE(r.ok());
  CHECK(std::abs(r.x[0] - 1) < 1e-5);
  CHECK(std::abs(r.x[1] - 1) < 1e-5);
  CHECK(std::abs(r.x[2] - 1) < 1e-5);
}

TEST_CASE("failure statuses") {
  fp::NlpOptions once;
  once.max_iterations = 1;
  CHECK(fp::nlp_solve(rosenbrock(), once).status == fp::NlpStatus::kIterationLimit);

  fp::NlpProblem bad;
  bad.dimension = 1;
  bad.objective = [](const VectorXd& x) { return std::log(x[0]); };
  bad.initial_guess = VectorXd::Constant(1, -1.0);
  CHECK(fp::nlp_solve(bad).status == fp::NlpStatus::kNonFiniteEvaluation);

  fp::NlpProblem empty_set;
  empty_set.dimension = 1;
  empty_set.objective = [](const VectorXd& x) { return x[0] * x[0]; };
  empty_set.inequalities = [](const VectorXd& x) {
    VectorXd g(2);
    g << x[0] - 1, -x[0];
    return g;
  };
  empty_set.initial_guess = VectorXd::Constant(1, 0.5);
  const auto r = fp::nlp_solve(empty_set);
  CHECK(!r.ok());
  CHECK(r.max_violation > 0.1);
}

TEST_CASE("determinism") {
  const auto a = fp::nlp_solve(rosenbrock());
  const auto b = fp::nlp_solve(rosenbrock());
  CHECK(a.iterations == b.iterations);
  CHECK(a.x == b.x);
}

TEST_CASE("forward differences") {
  auto f = [](const VectorXd& x) { return std::sin(x[0]) * x[1] * x[1]; };
  VectorXd x(2);
  x << 0.3, -1.2;
  const VectorXd g = fp::fd_gradient(f, x, 1e-7);
  CHECK(std::abs(g[0] - std::cos(0.3) * 1.44) < 1e-6);
  CHECK(std::abs(g[1] - std::sin(0.3) * -2.4) < 1e-6);
  auto c = [](const VectorXd& x) {
    VectorXd v(2);
    v << x[0] * x[1], x[0] + 3 * x[1];
    return v;
  };
  const MatrixXd J = fp::fd_jacobian(c, x, 1e-7);
  CHECK(std::abs(J(0, 0) - x[1]) < 1e-6);
  CHECK(std::abs(J(0, 1) - x[0]) < 1e-6);
  CHECK(std::abs(J(1, 1) - 3) < 1e-6);
}
