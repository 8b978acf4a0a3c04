#include "ahpd/solver.h"

#include <cmath>

namespace ahpd {

namespace {

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

// Marks the rows of x that carry true dynamics (the v2 SHX storage is frozen).
std::vector<bool> dynamic_rows(const Model& m) {
  std::vector<bool> dyn(m.nx(), true);
  if (m.variant() == Variant::V2) dyn[7] = dyn[8] = false;
  return dyn;
}

void finalize(const Model& m, SteadyState& s) {
  s.y = m.output_map(s.z);
  const Model::Envelope env = m.envelope(s.x, s.z, s.u);
  s.report.range_events = static_cast<int>(env.warnings.size());
  for (const auto& w : env.warnings) s.report.warnings.push_back("property window: " + w);
  if (s.report.ill_conditioned) s.report.warnings.push_back("ill-conditioned Newton matrix");
  if (!env.xi_ok) {
    throw EnvelopeError("converged steady state has a LiBr mass fraction outside the "
                        "correlation window");
  }
}

SolveReport steady_newton(const Model& m, const Vec& u, Vec& x, Vec& z,
                          const SolverOptions& opt) {
  const Vec scale = steady_scale(m, opt);
  const Vec rscale = concat(m.f_scale(), m.g_scale());
  const int nx = m.nx();
  const int nz = m.nz();
  ResidualFn fn = [&](const Vec& v) -> Vec {
    const Vec w = v.cwiseProduct(scale);
    return m.steady_residuals(w.head(nx), w.tail(nz), u).cwiseQuotient(rscale);
  };
  Vec v = concat(x, z).cwiseQuotient(scale);
  SolveReport rep = newton_solve(fn, v, opt);
  const Vec w = v.cwiseProduct(scale);
  x = w.head(nx);
  z = w.tail(nz);
  return rep;
}

// Implicit Euler with growing steps until plain Newton on the steady system
// converges from the current point.
SolveReport pseudo_transient(const Model& m, const Vec& u, Vec& x, Vec& z,
                             const SolverOptions& opt) {
  const Vec scale = steady_scale(m, opt);
  const Vec rscale = concat(m.f_scale(), m.g_scale());
  const int nx = m.nx();
  const int nz = m.nz();
  const std::vector<bool> dyn = dynamic_rows(m);

  SolveReport last;
  const AlgebraicSolution a = solve_algebraic(m, x, u, z, opt);
  if (!a.report.converged) {
    last = a.report;
    last.message = "pseudo-transient start: " + a.report.message;
    return last;
  }
  z = a.z;

  SolverOptions step_opt = opt;
  step_opt.max_iterations = 25;
  SolverOptions polish_opt = opt;
  polish_opt.max_iterations = 12;

  double dt = 1.0;
  for (int n = 0; n < 400; ++n) {
    const Vec xn = x;
    ResidualFn fn = [&](const Vec& v) -> Vec {
      const Vec w = v.cwiseProduct(scale);
      Vec r = m.steady_residuals(w.head(nx), w.tail(nz), u);
      for (int i = 0; i < nx; ++i) {
        if (dyn[i]) r[i] = (w[i] - xn[i]) / dt - r[i];
      }
      return r.cwiseQuotient(rscale);
    };
    Vec v = concat(x, z).cwiseQuotient(scale);
    const SolveReport rep = newton_solve(fn, v, step_opt);
    if (!rep.converged) {
      dt *= 0.25;
      if (dt < 1e-3) {
        last = rep;
        last.message = "pseudo-transient step size collapsed";
        return last;
      }
      continue;
    }
    const Vec w = v.cwiseProduct(scale);
    x = w.head(nx);
    z = w.tail(nz);

    Vec xp = x, zp = z;
    last = steady_newton(m, u, xp, zp, polish_opt);
    if (last.converged) {
      x = xp;
      z = zp;
      return last;
    }
    dt = std::min(dt * 2.0, 2e4);
  }
  last.message = "pseudo-transient continuation did not reach a steady state";
  return last;
}

}  // namespace

Vec steady_scale(const Model& model, const SolverOptions& opt) {
  return concat(model.x_scale(), model.z_scale()) * opt.scale_factor;
}

AlgebraicSolution solve_algebraic(const Model& model, const Vec& x, const Vec& u,
                                  const Vec& z_guess, const SolverOptions& opt) {
  if (z_guess.size() != model.nz() || !z_guess.allFinite()) {
    throw std::invalid_argument("algebraic guess has wrong size or non-finite entries");
  }
  const Vec scale = model.z_scale() * opt.scale_factor;
  const Vec rscale = model.g_scale();
  ResidualFn fn = [&](const Vec& v) -> Vec {
    return model.residuals(x, v.cwiseProduct(scale), u).g.cwiseQuotient(rscale);
  };
  Vec v = z_guess.cwiseQuotient(scale);
  AlgebraicSolution out;
  out.report = newton_solve(fn, v, opt);
  out.z = v.cwiseProduct(scale);
  return out;
}

std::pair<Vec, Vec> initial_guess(const Model& model, const Vec& uv) {
  const ModelParams& p = model.params();
  const Properties& pr = model.props();
  const InputVector u = InputVector::from_vec(uv);
  const auto hi = PressureRange::HighSide;
  const auto lo = PressureRange::LowSide;
  const double cw = pr.cp_liquid_water();

  // saturation temperatures a few kelvin from the cooling and chilled water
  const double T_E = u.T_W_E_in - 5.0;
  const double T_C = u.T_W_AC_in + 9.0;
  const double p_low = pr.p_sat_water(T_E, lo);
  const double p_high = pr.p_sat_water(T_C, hi);

  // flows from a fixed-effectiveness evaporator estimate
  const double xi_A = 0.55;
  const double mdot_RSo = 1550.0 * u.Vdot_RSo;
  const double Q_E = 0.9 * u.mdot_W_E * cw * (u.T_W_E_in - T_E);
  const double mdot_GR = Q_E / 2.4e6;
  const double mdot_PSo = mdot_RSo - mdot_GR;
  const double xi_G = xi_A * mdot_RSo / mdot_PSo;

  const double m_PSo_G = mdot_PSo / p.K_SEV;
  const double m_LiBr_G = xi_G * m_PSo_G;
  const double m_LiBr_A = p.m_LiBr_sumps - m_LiBr_G;
  const double m_RSo_A = m_LiBr_A / xi_A;
  const double m_Ref_E = p.m_total_sumps - p.m_Ref_C - m_RSo_A - m_PSo_G;

  const double T_Go = pr.t_sat_solution(p_high, xi_G, hi);
  const double T_As = pr.t_sat_solution(p_low, xi_A, lo);
  const double Q_A = 1.82 * Q_E;
  const double T_Ao = T_As - p.phi_sub * Q_A / (mdot_RSo * pr.cp_solution(xi_A));
  const double Q_G = 1.4 * Q_E;
  const double Q_C = 1.05 * Q_E;
  const double T_W_Go = u.T_W_G_in - Q_G / (u.mdot_W_G * cw);
  const double T_W_Ao = u.T_W_AC_in + Q_A / (u.mdot_W_AC * cw);
  const double T_W_Co = T_W_Ao + Q_C / (u.mdot_W_AC * cw);
  const double T_W_Eo = u.T_W_E_in - Q_E / (u.mdot_W_E * cw);
  const double T_Rss = T_Go - 5.0;
  const double T_Pss = T_Ao + 4.0;

  StateVector x;
  x.m_PSo_G = m_PSo_G;
  x.m_LiBr_G = m_LiBr_G;
  x.H_PSo_G = m_PSo_G * pr.h_solution(T_Go, xi_G);
  x.H_Ref_C = p.m_Ref_C * pr.h_liquid_water(T_C);
  x.m_RSo_A = m_RSo_A;
  x.H_RSo_A = m_RSo_A * pr.h_solution(T_Ao, xi_A);
  x.H_Ref_E = m_Ref_E * pr.h_liquid_water(T_E);
  x.H_RSo_SHX = p.m_RSo_SHX * pr.h_solution(T_Rss, xi_A);
  x.H_PSo_SHX = p.m_PSo_SHX * pr.h_solution(T_Pss, xi_G);

  AlgebraicVector z;
  z.p_high = p_high;
  z.p_low = p_low;
  z.T_PSo_HX_G_out = T_Go;
  z.xi_PSo_HX_G_out = xi_G;
  z.mdot_PSo_HX_G_out = mdot_PSo;
  z.mdot_Ref_GRh = mdot_GR;
  z.Qdot_G = Q_G;
  z.T_W_G_out = T_W_Go;
  z.T_Ref_HX_C_out = T_C;
  z.Qdot_C = Q_C;
  z.T_W_C_out = T_W_Co;
  z.mdot_v_Ref_E_in = 0.05 * mdot_GR;
  z.mdot_l_Ref_E_in = 0.95 * mdot_GR;
  z.T_Ref_HX_E_out = T_E;
  z.mdot_v_Ref_HX_E_out = 0.95 * mdot_GR;
  z.mdot_l_Ref_HX_E_out = p.mdot_Ref_rec - 0.95 * mdot_GR;
  z.Qdot_E = Q_E;
  z.T_W_E_out = T_W_Eo;
  z.T_Ref_rec = T_E;
  z.T_RSo_HX_A_out_sat = T_As;
  z.T_RSo_HX_A_out = T_Ao;
  z.xi_RSo_HX_A_out = xi_A;
  z.mdot_RSo_HX_A_out = mdot_RSo;
  z.Qdot_A = Q_A;
  z.T_W_A_out = T_W_Ao;
  z.mdot_Ref_GRl = mdot_GR;
  z.h_Ref_GRl = pr.h_vapor_water(T_E);
  z.m_LiBr_A = m_LiBr_A;
  z.m_Ref_E = m_Ref_E;
  z.TTD_h = 0.15 * (T_Go - T_Ao);
  z.TTD_c = 0.12 * (T_Go - T_Ao);
  z.T_RSo_SHX_out_ss = T_Rss;
  z.T_PSo_SHX_out_ss = T_Pss;
  z.Qdot_SHX = 8000.0;
  z.T_RSo_SHX_out = T_Rss;
  z.T_PSo_SHX_out = T_Pss;
  return {x.to_vec(), z.pack(model.variant())};
}

SteadyState solve_steady_state(const Model& model, const Vec& u,
                               const std::optional<std::pair<Vec, Vec>>& guess,
                               const SolverOptions& opt) {
  if (u.size() != model.nu()) throw std::invalid_argument("input vector must have 7 entries");
  SteadyState s;
  s.u = u;
  std::tie(s.x, s.z) = guess ? *guess : initial_guess(model, u);

  Vec x = s.x, z = s.z;
  try {
    s.report = steady_newton(model, u, x, z, opt);
  } catch (const ConditioningError& e) {
    s.report = {};
    s.report.message = e.what();
  }
  if (!s.report.converged) {
    x = s.x;
    z = s.z;
    s.report = pseudo_transient(model, u, x, z, opt);
  }
  s.x = x;
  s.z = z;
  if (s.report.converged) finalize(model, s);
  return s;
}

std::vector<SteadyState> homotopy_continuation(const Model& model, const Vec& u_from,
                                               const Vec& u_to, int steps,
                                               const SolverOptions& opt) {
  if (steps < 1) throw std::invalid_argument("homotopy needs at least one step");
  std::vector<SteadyState> path;
  std::optional<std::pair<Vec, Vec>> seed;
  if (steps > 1) {
    const SteadyState start = solve_steady_state(model, u_from, std::nullopt, opt);
    if (!start.report.converged) {
      path.push_back(start);
      return path;
    }
    seed = std::make_pair(start.x, start.z);
  }
  for (int k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    const Vec u = (1.0 - t) * u_from + t * u_to;
    SteadyState s = solve_steady_state(model, u, seed, opt);
    path.push_back(s);
    if (!s.report.converged) break;
    seed = std::make_pair(s.x, s.z);
  }
  return path;
}

}  // namespace ahpd
