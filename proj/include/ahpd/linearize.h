#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ahpd/model.h"
#include "ahpd/transient.h"

namespace ahpd {

struct Jacobians {
  Mat f_x, f_z, f_u;
  Mat g_x, g_z, g_u;
  Mat y_x, y_z, y_u;
  double g_z_rcond = 0.0;
};

/// Central-difference Jacobians at (x0, z0, u0); the output Jacobians are
/// exact since the output map selects algebraic unknowns.
/// Throws ConditioningError if g_z is singular.
Jacobians jacobians(const Model& model, const Vec& x0, const Vec& z0, const Vec& u0);

struct StateSpace {
  Mat A, B, C, D;
  Vec x0, z0, u0, y0;
  std::string variant;          // model the anchor and matrices come from
  double g_z_rcond = 0.0;
  bool ill_conditioned = false;

  /// States that interact with the rest of the model; frozen storage states
  /// leave all-zero rows and columns and are excluded.
  std::vector<int> active_states() const;
  Vec steady_gain_column(int input) const;
  Mat steady_gain() const;      // -C A^-1 B + D
};

/// Eliminates the algebraic block with a single factorization of g_z.
StateSpace reduce(const Jacobians& j, double rcond_warn = 1e-12);

/// Linearizes `model` at the steady state s.
StateSpace linearize(const Model& model, const SteadyState& s);

/// Exact zero-order-hold propagation of the deviation model; the trajectory
/// holds absolute states, inputs and outputs (z is left empty).
Trajectory simulate_linear(const StateSpace& ss, const InputSchedule& schedule, double t_end,
                           double dt);

/// Text export: channel header lines, matrices row by row, anchor vectors.
void write_state_space(std::ostream& os, const StateSpace& ss);
StateSpace read_state_space(std::istream& is);

}  // namespace ahpd
