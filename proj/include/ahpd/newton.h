#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ahpd {

struct SolverOptions {
  double residual_tol = 1e-8;   // infinity norm of the scaled residual
  double step_tol = 1e-13;      // infinity norm of the scaled step
  int max_iterations = 60;
  double backtrack = 0.5;       // step reduction factor of the line search
  double min_step = 1.0 / 1024; // smallest accepted line-search fraction
  double fd_rel = 1e-6;         // forward-difference step, relative
  double fd_abs = 1e-8;         // forward-difference step, absolute (scaled units)
  double rcond_warn = 1e-13;    // reciprocal condition below which a warning is raised
  double scale_factor = 1.0;    // multiplies every variable scale

  /// Throws std::invalid_argument if a field is out of range.
  void validate() const;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  double rcond = 0.0;              // estimate at the last factorization
  bool ill_conditioned = false;
  int range_events = 0;            // property-window events at the solution
  std::vector<std::string> warnings;
  std::string message;
};

/// Thrown when the Newton matrix is numerically singular.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Forward-difference Jacobian of fn at v, where r0 = fn(v).
Eigen::MatrixXd fd_jacobian(const ResidualFn& fn, const Eigen::VectorXd& v,
                            const Eigen::VectorXd& r0, const SolverOptions& opt);

/// Damped Newton iteration on fn(v) = 0 in scaled variables. On return `v`
/// holds the last accepted iterate whether or not the iteration converged.
/// A residual evaluation that throws or returns non-finite values counts as a
/// failed trial point and triggers backtracking.
SolveReport newton_solve(const ResidualFn& fn, Eigen::VectorXd& v, const SolverOptions& opt);

}  // namespace ahpd
