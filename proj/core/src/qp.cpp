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

#include "flatpush/qp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace flatpush {

namespace {

double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

// Cholesky with growing diagonal shift for matrices that are PD only up to
// rounding.
Eigen::LLT<Eigen::MatrixXd> robust_llt(Eigen::MatrixXd m) {
  const double scale = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  double shift = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) return llt;
    const double next = shift == 0.0 ? 1e-12 * scale : shift * 10.0;
    m.diagonal().array() += next - shift;
    shift = next;
  }
  return Eigen::LLT<Eigen::MatrixXd>(m);
}

}  // namespace

std::string to_string(QpStatus status) {
  switch (status) {
    case QpStatus::kOptimal:
      return "optimal";
    case QpStatus::kIterationLimit:
      return "iteration_limit";
    case QpStatus::kInconsistentEqualities:
      return "inconsistent_equalities";
    case QpStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

QpResult solve_qp(const QpProblem& p, const QpOptions& options) {
  const Eigen::Index n = p.g.size();
  const Eigen::Index me = p.A.rows();
  const Eigen::Index mi = p.C.rows();
  QpResult result;

  // Null-space split x = x_p + Z u of the equality constraints.
  Eigen::VectorXd xp = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(n, n);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
  Eigen::Index rank = 0;
  if (me > 0) {
    qr.compute(p.A.transpose());
    qr.setThreshold(1e-12);
    rank = qr.rank();
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd R =
        qr.matrixR().topLeftCorner(rank, rank).triangularView<Eigen::Upper>();
    // A = P R^T Q^T, so with x = Q1 w the leading rows give R1^T w = (P^T b).
    const Eigen::VectorXd pb = qr.colsPermutation().transpose() * p.b;
    const Eigen::VectorXd w =
        R.transpose().triangularView<Eigen::Lower>().solve(pb.head(rank));
    xp = Q.leftCols(rank) * w;
    Z = Q.rightCols(n - rank);
    const double eq_res = (p.A * xp - p.b).cwiseAbs().maxCoeff();
    if (eq_res > 1e-8 * std::max(1.0, p.b.cwiseAbs().maxCoeff())) {
      result.status = QpStatus::kInconsistentEqualities;
      return result;
    }
  }

  const Eigen::Index nr = Z.cols();
  const Eigen::MatrixXd HZ = p.H * Z;
  Eigen::MatrixXd G = Z.transpose() * HZ;
  G = 0.5 * (G + G.transpose());
  const Eigen::VectorXd h = Z.transpose() * (p.H * xp + p.g);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(nr);
  Eigen::VectorXd lam;
  if (mi == 0 || nr == 0) {
    if (nr > 0) u = robust_llt(G).solve(-h);
    lam = Eigen::VectorXd::Zero(mi);
    result.iterations = 1;
    result.status = QpStatus::kOptimal;
    if (mi > 0 && ((p.C * xp - p.d).array() < -1e-9).any()) {
      result.status = QpStatus::kNumericalFailure;
    }
  } else {
    const Eigen::MatrixXd D = p.C * Z;
    const Eigen::VectorXd e = p.d - p.C * xp;
    const double scale_h = 1.0 + h.cwiseAbs().maxCoeff();
    const double scale_e = 1.0 + e.cwiseAbs().maxCoeff();

    Eigen::VectorXd s = (D * u - e).cwiseMax(1.0);
    lam = Eigen::VectorXd::Ones(mi);
    result.status = QpStatus::kIterationLimit;
    for (int it = 0; it < options.max_iterations; ++it) {
      result.iterations = it + 1;
      const Eigen::VectorXd r_d = G * u + h - D.transpose() * lam;
      const Eigen::VectorXd r_i = D * u - s - e;
      const double mu = s.dot(lam) / static_cast<double>(mi);
      if (r_d.cwiseAbs().maxCoeff() <= options.tolerance * scale_h &&
          r_i.cwiseAbs().maxCoeff() <= options.tolerance * scale_e &&
          mu <= options.tolerance) {
        result.status = QpStatus::kOptimal;
        break;
      }
      if (!std::isfinite(mu)) {
        result.status = QpStatus::kNumericalFailure;
        break;
      }

      const Eigen::VectorXd w = lam.cwiseQuotient(s);
      Eigen::MatrixXd M = G;
      M.noalias() += D.transpose() * w.asDiagonal() * D;
      const auto llt = robust_llt(M);
      if (llt.info() != Eigen::Success) {
        result.status = QpStatus::kNumericalFailure;
        break;
      }

      const auto solve_dir = [&](const Eigen::VectorXd& rhs_c,
                                 Eigen::VectorXd& du, Eigen::VectorXd& ds,
                                 Eigen::VectorXd& dl) {
        const Eigen::VectorXd t =
            (rhs_c - lam.cwiseProduct(r_i)).cwiseQuotient(s);
        du = llt.solve(-r_d + D.transpose() * t);
        ds = D * du + r_i;
        dl = (rhs_c - lam.cwiseProduct(ds)).cwiseQuotient(s);
      };

      Eigen::VectorXd du, ds, dl;
      const Eigen::VectorXd sl = s.cwiseProduct(lam);
      solve_dir(-sl, du, ds, dl);
      const double a_aff = std::min(max_step(s, ds), max_step(lam, dl));
      const double mu_aff = (s + a_aff * ds).dot(lam + a_aff * dl) /
                            static_cast<double>(mi);
      const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

      const Eigen::VectorXd rhs_c =
          -sl - ds.cwiseProduct(dl) +
          Eigen::VectorXd::Constant(mi, sigma * mu);
      solve_dir(rhs_c, du, ds, dl);
      const double alpha =
          std::min(1.0, 0.995 * std::min(max_step(s, ds), max_step(lam, dl)));
      u += alpha * du;
      s += alpha * ds;
      lam += alpha * dl;
      if (!u.allFinite() || !lam.allFinite()) {
        result.status = QpStatus::kNumericalFailure;
        break;
      }
    }
  }

  result.x = xp + Z * u;
  result.lambda = lam;
  result.y = Eigen::VectorXd::Zero(me);
  if (me > 0 && rank > 0) {
    // A^T y = H x + g - C^T lambda, solved through the same factorization.
    Eigen::VectorXd rhs = p.H * result.x + p.g;
    if (mi > 0) rhs -= p.C.transpose() * lam;
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::VectorXd qtr = Q.leftCols(rank).transpose() * rhs;
    const Eigen::MatrixXd R =
        qr.matrixR().topLeftCorner(rank, rank).triangularView<Eigen::Upper>();
    Eigen::VectorXd py = Eigen::VectorXd::Zero(me);
    py.head(rank) = R.triangularView<Eigen::Upper>().solve(qtr);
    result.y = qr.colsPermutation() * py;
  }
  return result;
}

}  // namespace flatpush
