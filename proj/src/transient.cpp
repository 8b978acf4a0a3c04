#include "ahpd/transient.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ahpd {

namespace {

struct StepResult {
  Vec x;
  Vec z;
  SolveReport report;
};

// One backward-Euler step from xn over dt with input u.
StepResult euler_step(const Model& m, const Vec& xn, const Vec& zn, const Vec& u, double dt,
                      const SolverOptions& opt) {
  const int nx = m.nx();
  const int nz = m.nz();
  Vec scale(nx + nz), rscale(nx + nz);
  scale << m.x_scale(), m.z_scale();
  scale *= opt.scale_factor;
  rscale << m.f_scale(), m.g_scale();

  ResidualFn fn = [&](const Vec& v) -> Vec {
    const Vec w = v.cwiseProduct(scale);
    const Residuals r = m.residuals(w.head(nx), w.tail(nz), u);
    Vec out(nx + nz);
    out << (w.head(nx) - xn) / dt - r.f, r.g;
    return out.cwiseQuotient(rscale);
  };
  Vec v(nx + nz);
  v << xn, zn;
  v = v.cwiseQuotient(scale);
  StepResult s;
  try {
    s.report = newton_solve(fn, v, opt);
  } catch (const ConditioningError& e) {
    s.report.message = e.what();
  }
  const Vec w = v.cwiseProduct(scale);
  s.x = w.head(nx);
  s.z = w.tail(nz);
  return s;
}

}  // namespace

InputSchedule::InputSchedule(std::vector<std::pair<double, Vec>> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.empty() || points_.front().first != 0.0) {
    throw std::invalid_argument("input schedule must start at t = 0");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].first > points_[i - 1].first)) {
      throw std::invalid_argument("input schedule times must strictly increase");
    }
  }
  for (const auto& [t, u] : points_) {
    if (u.size() != InputVector::size) {
      throw std::invalid_argument("schedule input vector must have 7 entries");
    }
  }
}

InputSchedule InputSchedule::constant(const Vec& u) { return InputSchedule({{0.0, u}}); }

const Vec& InputSchedule::after(double t) const {
  if (points_.empty()) throw std::logic_error("empty input schedule");
  const Vec* u = &points_.front().second;
  for (const auto& [tb, ub] : points_) {
    if (tb <= t) u = &ub;
  }
  return *u;
}

Trajectory integrate(const Model& model, const Vec& x0, const Vec& z0,
                     const InputSchedule& schedule, double t_end, const TransientOptions& opt) {
  if (!(opt.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (x0.size() != model.nx() || z0.size() != model.nz()) {
    throw std::invalid_argument("initial point has wrong dimensions");
  }

  // time grid: uniform, with breakpoints inserted
  const double tiny = 1e-9 * opt.dt;
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor(t_end / opt.dt + 1e-9));
  for (long k = 1; k <= n; ++k) grid.push_back(static_cast<double>(k) * opt.dt);
  if (grid.empty() || grid.back() < t_end - tiny) grid.push_back(t_end);
  for (const auto& [tb, ub] : schedule.breakpoints()) {
    if (tb > tiny && tb < t_end - tiny) grid.push_back(tb);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double a, double b) { return std::abs(a - b) <= tiny; }),
             grid.end());

  Trajectory tr;
  tr.t.push_back(0.0);
  tr.x.push_back(x0);
  tr.z.push_back(z0);
  tr.u.push_back(schedule.after(0.0));
  tr.y.push_back(model.output_map(z0));

  Vec x = x0, z = z0;
  double t = 0.0;
  for (double t_next : grid) {
    const Vec& u = schedule.after(t);
    StepResult s = euler_step(model, x, z, u, t_next - t, opt.newton);
    StepDiagnostics d{s.report.iterations, s.report.residual_norm, s.report.converged};
    if (!s.report.converged) {
      tr.complete = false;
      tr.message = "step to t = " + std::to_string(t_next) + " s failed: " + s.report.message;
      tr.diagnostics.push_back(d);
      break;
    }
    x = s.x;
    z = s.z;
    t = t_next;
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.z.push_back(z);
    tr.u.push_back(u);
    tr.y.push_back(model.output_map(z));
    tr.diagnostics.push_back(d);
  }
  return tr;
}

SteadyState settle(const Model& model, const Vec& x0, const Vec& z0, const Vec& u,
                   const SettleOptions& opt) {
  SteadyState s;
  s.u = u;
  Vec x = x0, z = z0;
  double dt = opt.dt0;
  double t = 0.0;
  const Vec fs = model.f_scale();
  SolverOptions newton = opt.newton;
  newton.residual_tol = std::min(newton.residual_tol, 0.1 * opt.tol);
  int steps = 0;
  while (t < opt.t_max) {
    StepResult r = euler_step(model, x, z, u, dt, newton);
    if (!r.report.converged) {
      dt *= 0.25;
      if (dt < 1e-3) {
        s.report = r.report;
        s.report.message = "settle: step size collapsed";
        break;
      }
      continue;
    }
    x = r.x;
    z = r.z;
    t += dt;
    ++steps;
    Vec f = model.residuals(x, z, u).f.cwiseQuotient(fs);
    const double fn = f.lpNorm<Eigen::Infinity>();
    if (fn <= opt.tol) {
      s.report.converged = true;
      s.report.iterations = steps;
      s.report.residual_norm = fn;
      break;
    }
    dt = std::min(dt * opt.growth, opt.dt_max);
  }
  if (!s.report.converged && s.report.message.empty()) {
    s.report.message = "settle: no equilibrium within t_max";
  }
  if (model.variant() == Variant::V2) {
    // frozen storage states take the value they would hold at equilibrium
    const Vec r = model.steady_residuals(x, z, u);
    x[7] -= r[7];
    x[8] -= r[8];
  }
  s.x = x;
  s.z = z;
  s.y = model.output_map(z);
  return s;
}

}  // namespace ahpd
