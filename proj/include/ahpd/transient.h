#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ahpd/model.h"
#include "ahpd/newton.h"
#include "ahpd/solver.h"

namespace ahpd {

/// Piecewise-constant inputs. A breakpoint at time t takes effect just after
/// t, so the sample at t still reflects the previous input.
class InputSchedule {
 public:
  InputSchedule() = default;
  /// Throws std::invalid_argument unless times strictly increase from 0.
  explicit InputSchedule(std::vector<std::pair<double, Vec>> breakpoints);
  static InputSchedule constant(const Vec& u);

  /// Input acting on the interval (t, t + dt] for any small dt > 0.
  const Vec& after(double t) const;
  const std::vector<std::pair<double, Vec>>& breakpoints() const { return points_; }

 private:
  std::vector<std::pair<double, Vec>> points_;
};

struct StepDiagnostics {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> x;
  std::vector<Vec> z;   // empty for linear simulations
  std::vector<Vec> u;
  std::vector<Vec> y;
  std::vector<StepDiagnostics> diagnostics;   // one per sample after the first
  bool complete = true;
  std::string message;
};

struct TransientOptions {
  double dt = 1.0;
  SolverOptions newton{};
};

/// Backward-Euler integration with a coupled Newton solve on (x, z) per step.
/// (x0, z0) must satisfy the algebraic equations for the input at t = 0.
/// Breakpoints are inserted into the time grid. A failing step truncates the
/// trajectory (complete == false) instead of throwing.
Trajectory integrate(const Model& model, const Vec& x0, const Vec& z0,
                     const InputSchedule& schedule, double t_end,
                     const TransientOptions& opt = {});

struct SettleOptions {
  double dt0 = 1.0;           // first step, s
  double growth = 1.5;        // step growth per accepted step
  double dt_max = 600.0;      // largest step, s
  double tol = 1e-9;          // on the scaled derivative norm
  double t_max = 1e6;         // give-up time, s
  SolverOptions newton{};
};

/// Integrates with constant input until the scaled derivatives fall below
/// tol, then returns the reached point.
SteadyState settle(const Model& model, const Vec& x0, const Vec& z0, const Vec& u,
                   const SettleOptions& opt = {});

}  // namespace ahpd
