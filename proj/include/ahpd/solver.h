#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "ahpd/model.h"
#include "ahpd/newton.h"

namespace ahpd {

/// A converged point lies outside the solution-composition validity window.
class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlgebraicSolution {
  Vec z;
  SolveReport report;
};

struct SteadyState {
  Vec x;
  Vec z;
  Vec u;
  Vec y;
  SolveReport report;
};

/// Solves g(x, z, u) = 0 for z with x and u fixed.
AlgebraicSolution solve_algebraic(const Model& model, const Vec& x, const Vec& u,
                                  const Vec& z_guess, const SolverOptions& opt = {});

/// Physically seeded starting point (x, z) for the steady-state solve.
std::pair<Vec, Vec> initial_guess(const Model& model, const Vec& u);

/// Solves (f, g) = (0, 0) for (x, z). Without a guess, starts from
/// initial_guess() and falls back to pseudo-transient continuation if plain
/// Newton fails. Throws EnvelopeError if the converged compositions leave
/// the correlation window; a non-converged result is returned with
/// report.converged == false.
SteadyState solve_steady_state(const Model& model, const Vec& u,
                               const std::optional<std::pair<Vec, Vec>>& guess = std::nullopt,
                               const SolverOptions& opt = {});

/// Steady states along the straight input path from u_from to u_to, each
/// seeded by its predecessor. The path holds states for u at step 1..steps;
/// on failure it stops at the first failing step (included, unconverged).
std::vector<SteadyState> homotopy_continuation(const Model& model, const Vec& u_from,
                                               const Vec& u_to, int steps,
                                               const SolverOptions& opt = {});

/// Combined unknown scale for (x, z).
Vec steady_scale(const Model& model, const SolverOptions& opt);

}  // namespace ahpd
