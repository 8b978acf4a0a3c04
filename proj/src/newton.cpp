#include "ahpd/newton.h"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ahpd {

namespace {

bool try_eval(const ResidualFn& fn, const Eigen::VectorXd& v, Eigen::VectorXd& r) {
  try {
    r = fn(v);
  } catch (const std::exception&) {
    return false;
  }
  return r.allFinite();
}

}  // namespace

void SolverOptions::validate() const {
  if (!(residual_tol > 0.0) || !(step_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("backtracking factor must lie in (0, 1)");
  }
  if (!(min_step > 0.0 && min_step <= 1.0)) {
    throw std::invalid_argument("minimum step fraction must lie in (0, 1]");
  }
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (!(fd_rel > 0.0) || !(fd_abs > 0.0)) {
    throw std::invalid_argument("finite-difference steps must be positive");
  }
  if (!(scale_factor > 0.0)) throw std::invalid_argument("scale_factor must be positive");
}

Eigen::MatrixXd fd_jacobian(const ResidualFn& fn, const Eigen::VectorXd& v,
                            const Eigen::VectorXd& r0, const SolverOptions& opt) {
  Eigen::MatrixXd J(r0.size(), v.size());
  Eigen::VectorXd vp = v;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double h = std::max(opt.fd_rel * std::abs(v[j]), opt.fd_abs);
    Eigen::VectorXd rp;
    vp[j] = v[j] + h;
    if (!try_eval(fn, vp, rp)) {
      // near a domain boundary: fall back to a backward difference
      vp[j] = v[j] - h;
      if (!try_eval(fn, vp, rp)) {
        throw std::domain_error("residual not evaluable around variable " + std::to_string(j));
      }
    }
    J.col(j) = (rp - r0) / (vp[j] - v[j]);
    vp[j] = v[j];
  }
  return J;
}

SolveReport newton_solve(const ResidualFn& fn, Eigen::VectorXd& v, const SolverOptions& opt) {
  opt.validate();
  SolveReport rep;
  Eigen::VectorXd r;
  if (!try_eval(fn, v, r)) {
    rep.message = "residual not evaluable at the initial guess";
    rep.residual_norm = INFINITY;
    return rep;
  }
  rep.residual_norm = r.lpNorm<Eigen::Infinity>();

  for (int it = 0; it < opt.max_iterations; ++it) {
    if (rep.residual_norm <= opt.residual_tol) {
      rep.converged = true;
      return rep;
    }
    const Eigen::MatrixXd J = fd_jacobian(fn, v, r, opt);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    rep.rcond = lu.rcond();
    if (!(rep.rcond > 1e-300) || !std::isfinite(rep.rcond)) {
      throw ConditioningError("Newton matrix is singular", rep.rcond);
    }
    if (rep.rcond < opt.rcond_warn) rep.ill_conditioned = true;
    const Eigen::VectorXd dv = lu.solve(-r);
    if (!dv.allFinite()) throw ConditioningError("Newton step is not finite", rep.rcond);

    // backtracking on the residual norm
    double lambda = 1.0;
    Eigen::VectorXd trial, r_trial;
    bool accepted = false;
    const double norm0 = r.norm();
    while (lambda >= opt.min_step) {
      trial = v + lambda * dv;
      if (try_eval(fn, trial, r_trial) && r_trial.norm() < (1.0 - 1e-4 * lambda) * norm0) {
        accepted = true;
        break;
      }
      lambda *= opt.backtrack;
    }
    if (!accepted) {
      // take the smallest step if it is at least evaluable; Newton may still recover
      trial = v + opt.min_step * dv;
      if (!try_eval(fn, trial, r_trial)) {
        rep.iterations = it + 1;
        rep.message = "line search failed";
        return rep;
      }
    }
    v = trial;
    r = r_trial;
    rep.iterations = it + 1;
    rep.residual_norm = r.lpNorm<Eigen::Infinity>();
    if (lambda * dv.lpNorm<Eigen::Infinity>() < opt.step_tol &&
        rep.residual_norm > opt.residual_tol) {
      rep.message = "step below tolerance before the residual converged";
      return rep;
    }
  }
  rep.converged = rep.residual_norm <= opt.residual_tol;
  if (!rep.converged) {
    std::ostringstream os;
    os << "no convergence in " << opt.max_iterations << " iterations (residual "
       << rep.residual_norm << ")";
    rep.message = os.str();
  }
  return rep;
}

}  // namespace ahpd
