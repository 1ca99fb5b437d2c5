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

#include "flatpush/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "flatpush/log.hpp"
#include "flatpush/qp.hpp"

namespace flatpush {

namespace {

struct Eval {
  double f = 0.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd ce, ci;
  Eigen::MatrixXd je, ji;
};

struct Wrapped {
  const NlpProblem& p;
  double step;
  Eigen::Index n;

  Eigen::VectorXd ce(const Eigen::VectorXd& x) const {
    return p.equalities ? p.equalities(x) : Eigen::VectorXd();
  }
  Eigen::VectorXd ci(const Eigen::VectorXd& x) const {
    return p.inequalities ? p.inequalities(x) : Eigen::VectorXd();
  }

  bool full(const Eigen::VectorXd& x, Eval& e) const {
    e.f = p.objective(x);
    e.ce = ce(x);
    e.ci = ci(x);
    if (!std::isfinite(e.f) || !e.ce.allFinite() || !e.ci.allFinite()) {
      return false;
    }
    e.grad = p.gradient ? p.gradient(x) : fd_gradient(p.objective, x, step);
    if (e.ce.size() > 0) {
      e.je = p.equality_jacobian ? p.equality_jacobian(x)
                                 : fd_jacobian(p.equalities, x, step);
    } else {
      e.je.resize(0, n);
    }
    if (e.ci.size() > 0) {
      e.ji = p.inequality_jacobian ? p.inequality_jacobian(x)
                                   : fd_jacobian(p.inequalities, x, step);
    } else {
      e.ji.resize(0, n);
    }
    return e.grad.allFinite() && e.je.allFinite() && e.ji.allFinite();
  }
};

double l1_violation(const Eigen::VectorXd& ce, const Eigen::VectorXd& ci) {
  double v = ce.cwiseAbs().sum();
  if (ci.size() > 0) v += (-ci).cwiseMax(0.0).sum();
  return v;
}

double max_violation(const Eigen::VectorXd& ce, const Eigen::VectorXd& ci) {
  double v = 0.0;
  if (ce.size() > 0) v = ce.cwiseAbs().maxCoeff();
  if (ci.size() > 0) v = std::max(v, (-ci).maxCoeff());
  return v;
}

struct Step {
  Eigen::VectorXd d, y, lambda;
  bool elastic = false;
  bool ok = false;
};

Step solve_subproblem(const Eigen::MatrixXd& B, const Eval& e,
                      const Eigen::VectorXd& ce, const Eigen::VectorXd& ci,
                      double elastic_weight, bool elastic_first = false) {
  const Eigen::Index n = e.grad.size();
  Step out;
  QpResult r;
  if (!elastic_first || ci.size() == 0) {
    QpProblem qp{B, e.grad, e.je, -ce, e.ji, -ci};
    r = solve_qp(qp);
    if (r.status == QpStatus::kOptimal) {
      out.d = r.x;
      out.y = r.y;
      out.lambda = r.lambda;
      out.ok = true;
      return out;
    }
  }

  // Elastic mode: one shared slack t >= 0 softens every inequality.
  const Eigen::Index mi = ci.size();
  if (mi == 0) return out;
  QpProblem el;
  el.H = Eigen::MatrixXd::Zero(n + 1, n + 1);
  el.H.topLeftCorner(n, n) = B;
  el.H(n, n) = 1e-8 * elastic_weight;
  el.g.resize(n + 1);
  el.g << e.grad, elastic_weight;
  el.A = Eigen::MatrixXd::Zero(e.je.rows(), n + 1);
  el.A.leftCols(n) = e.je;
  el.b = -ce;
  el.C = Eigen::MatrixXd::Zero(mi + 1, n + 1);
  el.C.topLeftCorner(mi, n) = e.ji;
  el.C.col(n).setOnes();
  el.d = Eigen::VectorXd::Zero(mi + 1);
  el.d.head(mi) = -ci;
  r = solve_qp(el);
  if (r.status != QpStatus::kOptimal) return out;
  out.d = r.x.head(n);
  out.y = r.y;
  out.lambda = r.lambda.head(mi);
  // zero slack: the plain subproblem was feasible after all
  out.elastic = r.x[n] > 1e-9;
  out.ok = true;
  return out;
}

Eigen::VectorXd lag_grad(const Eval& ev, const Step& st) {
  Eigen::VectorXd g = ev.grad;
  if (st.y.size() > 0) g -= ev.je.transpose() * st.y;
  if (st.lambda.size() > 0) g -= ev.ji.transpose() * st.lambda;
  return g;
}

// Powell-damped BFGS; the first update after a reset rescales the identity.
void bfgs_update(Eigen::MatrixXd& B, const Eigen::VectorXd& s,
                 Eigen::VectorXd y, bool& fresh) {
  if (fresh) {
    const double sy0 = s.dot(y);
    if (sy0 > 0.0) {
      B *= std::clamp(y.squaredNorm() / sy0, 1e-8, 1e8);
      fresh = false;
    }
  }
  const Eigen::VectorXd Bs = B * s;
  const double sBs = s.dot(Bs);
  if (!(sBs > 0.0) || !std::isfinite(sBs)) return;
  const double sy = s.dot(y);
  if (sy < 0.2 * sBs) {
    const double theta = 0.8 * sBs / (sBs - sy);
    y = theta * y + (1.0 - theta) * Bs;
  }
  const double syd = s.dot(y);
  if (syd > 0.0) {
    B += y * y.transpose() / syd - Bs * Bs.transpose() / sBs;
    B = 0.5 * (B + B.transpose());
  }
}

double kkt_residual(const Eval& e, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& lambda) {
  Eigen::VectorXd r = e.grad;
  if (y.size() > 0) r -= e.je.transpose() * y;
  if (lambda.size() > 0) r -= e.ji.transpose() * lambda;
  const double scale = std::max(1.0, e.grad.cwiseAbs().maxCoeff());
  double res = r.size() > 0 ? r.cwiseAbs().maxCoeff() / scale : 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    res = std::max(res, std::abs(lambda[i] * e.ci[i]) / scale);
  }
  return res;
}

}  // namespace

std::string to_string(NlpStatus status) {
  switch (status) {
    case NlpStatus::kConverged:
      return "converged";
    case NlpStatus::kIterationLimit:
      return "iteration_limit";
    case NlpStatus::kLineSearchFailure:
      return "line_search_failure";
    case NlpStatus::kInfeasibleSubproblem:
      return "infeasible_subproblem";
    case NlpStatus::kNonFiniteEvaluation:
      return "non_finite_evaluation";
  }
  return "unknown";
}

Eigen::VectorXd fd_gradient(const NlpProblem::Scalar& f,
                            const Eigen::VectorXd& x, double step) {
  const double f0 = f(x);
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    g[i] = (f(xp) - f0) / h;
    xp[i] = x[i];
  }
  return g;
}

Eigen::MatrixXd fd_jacobian(const NlpProblem::Vector& c,
                            const Eigen::VectorXd& x, double step) {
  const Eigen::VectorXd c0 = c(x);
  Eigen::MatrixXd J(c0.size(), x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    J.col(i) = (c(xp) - c0) / h;
    xp[i] = x[i];
  }
  return J;
}

NlpResult nlp_solve(const NlpProblem& problem, const NlpOptions& options) {
  const Eigen::Index n = problem.dimension;
  Wrapped w{problem, options.fd_step, n};
  NlpResult result;
  result.x = problem.initial_guess;
  if (result.x.size() != n) {
    result.status = NlpStatus::kNonFiniteEvaluation;
    return result;
  }

  Eval e;
  if (!w.full(result.x, e)) {
    result.status = NlpStatus::kNonFiniteEvaluation;
    return result;
  }
  bool fresh_hessian = true;
  const auto seed = [&](const Eigen::VectorXd& x) {
    if (!problem.objective_hessian) return Eigen::MatrixXd::Identity(n, n).eval();
    Eigen::MatrixXd H = problem.objective_hessian(x);
    H = 0.5 * (H + H.transpose());
    const double scale = std::max(H.diagonal().cwiseAbs().maxCoeff(), 1e-8);
    for (Eigen::Index i = 0; i < n; ++i) {
      H(i, i) += std::max(1e-6 * std::abs(H(i, i)), 1e-8 * scale);
    }
    fresh_hessian = false;
    return H;
  };
  Eigen::MatrixXd B = seed(result.x);
  bool seeded = true;
  double rho = 1.0;
  int stalled = 0;
  // elastic streak and the violation at its start
  int elastic_run = 0;
  double elastic_ref = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    const double elastic_weight =
        1e3 * std::max(1.0, e.grad.cwiseAbs().maxCoeff()) + rho;
    Step st = solve_subproblem(B, e, e.ce, e.ci, elastic_weight, elastic_run > 0);
    if (!st.ok && !seeded) {
      fresh_hessian = true;
      B = seed(result.x);
      seeded = true;
      st = solve_subproblem(B, e, e.ce, e.ci, elastic_weight);
    }
    if (!st.ok) {
      result.status = NlpStatus::kInfeasibleSubproblem;
      break;
    }

    const double viol = max_violation(e.ce, e.ci);
    result.kkt_residual = kkt_residual(e, st.y, st.lambda);
    result.max_violation = viol;
    result.eq_multipliers = st.y;
    result.ineq_multipliers = st.lambda;
    log_debug([&] {
      std::ostringstream os;
      os << "sqp it " << it << " f=" << e.f << " viol=" << viol
         << " kkt=" << result.kkt_residual << " |d|="
         << st.d.cwiseAbs().maxCoeff() << (st.elastic ? " elastic" : "")
         << " active=" << (e.ci.array() < 1e-8).count()
         << " lam>0=" << (st.lambda.array() > 1e-10).count();
      return os.str();
    });
    if (!st.elastic && result.kkt_residual <= options.kkt_tolerance &&
        viol <= options.feasibility_tolerance) {
      result.status = NlpStatus::kConverged;
      break;
    }
    if (st.elastic) {
      if (elastic_run == 0 || viol < 0.99 * elastic_ref) {
        elastic_run = 0;
        elastic_ref = viol;
      }
      // stuck at a stationary point of the violation
      if (++elastic_run >= 15) {
        result.status = NlpStatus::kInfeasibleSubproblem;
        break;
      }
    } else {
      elastic_run = 0;
    }
    const double dnorm = st.d.cwiseAbs().maxCoeff();
    if (dnorm <= 1e3 * eps * (1.0 + result.x.cwiseAbs().maxCoeff())) {
      if (st.elastic || viol > options.feasibility_tolerance) {
        result.status = NlpStatus::kInfeasibleSubproblem;
        break;
      }
      if (++stalled >= 3) {
        result.status = result.kkt_residual <= 10 * options.kkt_tolerance
                            ? NlpStatus::kConverged
                            : NlpStatus::kLineSearchFailure;
        break;
      }
    }

    // Penalty update.
    double mult = 0.0;
    if (st.y.size() > 0) mult = st.y.cwiseAbs().maxCoeff();
    if (st.lambda.size() > 0) {
      mult = std::max(mult, st.lambda.cwiseAbs().maxCoeff());
    }
    const double v1 = l1_violation(e.ce, e.ci);
    const Eigen::VectorXd lin_e = e.ce + e.je * st.d;
    const Eigen::VectorXd lin_i = e.ci + e.ji * st.d;
    const double v1_lin = l1_violation(lin_e, lin_i);
    const double gd = e.grad.dot(st.d);
    const double dBd = st.d.dot(B * st.d);
    if (v1 - v1_lin > 1e-14) {
      mult = std::max(mult, (gd + 0.5 * std::max(dBd, 0.0)) /
                                (0.9 * (v1 - v1_lin)));
    }
    if (rho < 1.1 * mult) rho = std::max(1.5 * rho, 1.1 * mult + 1e-3);

    const auto merit = [&](double f, const Eigen::VectorXd& ce,
                           const Eigen::VectorXd& ci) {
      return f + rho * l1_violation(ce, ci);
    };
    const double phi0 = merit(e.f, e.ce, e.ci);
    double D = gd - rho * (v1 - v1_lin);
    if (D > -0.5 * eps * std::abs(phi0)) D = -std::max(0.5 * dBd, 0.0);

    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    Eval e_trial;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = result.x + alpha * st.d;
      const double f_t = problem.objective(x_new);
      const Eigen::VectorXd ce_t = w.ce(x_new);
      const Eigen::VectorXd ci_t = w.ci(x_new);
      if (std::isfinite(f_t) && ce_t.allFinite() && ci_t.allFinite()) {
        const double phi = merit(f_t, ce_t, ci_t);
        if (phi <= phi0 + 1e-4 * alpha * D + 10 * eps * std::abs(phi0)) {
          accepted = true;
          break;
        }
        if (ls == 0 && (ci_t.size() > 0 || ce_t.size() > 0)) {
          // Second-order correction against the Maratos effect.
          const Eigen::VectorXd ce_c = ce_t - e.je * st.d;
          const Eigen::VectorXd ci_c = ci_t - e.ji * st.d;
          Step soc = solve_subproblem(B, e, ce_c, ci_c, elastic_weight, st.elastic);
          if (soc.ok && !soc.elastic) {
            const Eigen::VectorXd xs = result.x + soc.d;
            const double f_s = problem.objective(xs);
            const Eigen::VectorXd ce_s = w.ce(xs);
            const Eigen::VectorXd ci_s = w.ci(xs);
            if (std::isfinite(f_s) && ce_s.allFinite() && ci_s.allFinite() &&
                merit(f_s, ce_s, ci_s) <= phi0 + 1e-4 * D) {
              x_new = xs;
              st.d = soc.d;
              accepted = true;
              break;
            }
          }
        }
      }
      alpha *= 0.5;
    }
    if (!accepted || !w.full(x_new, e_trial)) {
      if (!seeded) {
        fresh_hessian = true;
        B = seed(result.x);
        seeded = true;
        continue;
      }
      result.status = accepted ? NlpStatus::kNonFiniteEvaluation
                               : NlpStatus::kLineSearchFailure;
      break;
    }

    log_debug([&] {
      std::ostringstream os;
      os << "  step alpha=" << alpha << " rho=" << rho << " D=" << D;
      return os.str();
    });
    if (problem.objective_hessian) {
      result.x = x_new;
      e = std::move(e_trial);
      B = seed(result.x);
      seeded = true;
    } else {
      bfgs_update(B, x_new - result.x, lag_grad(e_trial, st) - lag_grad(e, st),
                  fresh_hessian);
      seeded = false;
      result.x = x_new;
      e = std::move(e_trial);
    }
    stalled = 0;
  }

  result.objective = e.f;
  if (result.status != NlpStatus::kConverged) {
    result.max_violation = max_violation(e.ce, e.ci);
  }
  return result;
}

}  // namespace flatpush
