#include "ahpd/harness.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <limits>
#include <sstream>

namespace ahpd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Interpolated {
  double value;
  bool inside;
};

Interpolated interpolate(const std::vector<double>& t, const std::vector<double>& y, double tq) {
  if (t.empty()) throw std::invalid_argument("cannot interpolate an empty series");
  const double tol = 1e-9 * std::max(1.0, std::abs(t.back() - t.front()));
  if (tq <= t.front()) return {y.front(), tq >= t.front() - tol};
  if (tq >= t.back()) return {y.back(), tq <= t.back() + tol};
  const auto it = std::upper_bound(t.begin(), t.end(), tq);
  const std::size_t k = static_cast<std::size_t>(it - t.begin());
  const double w = (tq - t[k - 1]) / (t[k] - t[k - 1]);
  return {y[k - 1] + w * (y[k] - y[k - 1]), true};
}

// Index of the last sample at or before t.
std::size_t index_at(const std::vector<double>& t, double tq) {
  const auto it = std::upper_bound(t.begin(), t.end(), tq + 1e-9);
  return it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
}

Variant variant_of(const std::string& name) {
  return parse_variant(name == "base-b" ? "base-a" : name);
}

Trajectory decimate(const Trajectory& tr, int every) {
  Trajectory out;
  out.complete = tr.complete;
  out.message = tr.message;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    if (k % static_cast<std::size_t>(every) != 0 && k + 1 != tr.t.size()) continue;
    out.t.push_back(tr.t[k]);
    out.x.push_back(tr.x[k]);
    if (!tr.z.empty()) out.z.push_back(tr.z[k]);
    out.u.push_back(tr.u[k]);
    out.y.push_back(tr.y[k]);
  }
  return out;
}

std::array<double, 3> heat_flows(const MeasurementSeries& s, std::size_t k) {
  return {s.at("Qdot_G")[k], s.at("Qdot_AC")[k], s.at("Qdot_E")[k]};
}

VariantRun run_variant(const std::string& name, const Scenario& sc, const ModelParams& params,
                       const RunOptions& opt) {
  VariantRun run;
  run.variant = name;
  try {
    const Model model = make_model(params, variant_of(name), opt.properties);
    const Vec u0 = sc.initial_inputs(model.props());
    const InputSchedule schedule = sc.schedule(model.props());
    const SteadyState s0 = solve_steady_state(model, u0, std::nullopt, opt.newton);
    run.violations = steady_violations(model, s0);
    if (!s0.report.converged) throw ModelError("initial steady state: " + s0.report.message);

    Trajectory tr;
    if (name == "base-b") {
      const StateSpace lin = linearize(model, s0);
      tr = simulate_linear(lin, schedule, sc.t_end, sc.dt);
      tr.y.front() = lin.y0;
      if (!tr.complete) run.violations.push_back("linear simulation incomplete: " + tr.message);
    } else {
      tr = integrate(model, s0.x, s0.z, schedule, sc.t_end, {sc.dt, opt.newton});
      for (auto& v : trajectory_violations(model, tr)) run.violations.push_back(std::move(v));
    }
    tr.u.front() = u0;
    run.trajectory = decimate(tr, sc.output_every);
    run.series = to_series(run.trajectory);
    run.ok = tr.complete;
    if (!tr.complete) run.error = tr.message;
  } catch (const std::exception& e) {
    run.ok = false;
    run.error = e.what();
  }
  return run;
}

void fill_errors(ChannelMetrics& m, const std::vector<double>& t, const std::vector<double>& y,
                 const std::vector<double>& t_ref, const std::vector<double>& y_ref) {
  double sum = 0.0;
  int n = 0;
  m.max_abs = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Interpolated r = interpolate(t_ref, y_ref, t[k]);
    if (!r.inside) continue;
    const double e = y[k] - r.value;
    m.max_abs = std::max(m.max_abs, std::abs(e));
    sum += e * e;
    ++n;
  }
  m.rms = n > 0 ? std::sqrt(sum / n) : kNaN;
  if (n == 0) m.max_abs = kNaN;
}

std::string axis_unit(const std::string& axis, Dimension dim) {
  if (dim == Dimension::Temperature) return "degC";
  if (dim == Dimension::MassFlow) return "kg_h";
  return axis == "Vdot_RSo" ? "L_h" : "m3_h";
}

}  // namespace

CircuitFlows CircuitFlows::constant(std::size_t n, double G, double AC, double E) {
  return {std::vector<double>(n, G), std::vector<double>(n, AC), std::vector<double>(n, E)};
}

CircuitFlows CircuitFlows::from_series(const MeasurementSeries& s, const Properties& props) {
  CircuitFlows f;
  const std::pair<std::vector<double>*, std::pair<const char*, const char*>> circuits[] = {
      {&f.G, {"mdot_W_G", "T_W_G_in"}},
      {&f.AC, {"mdot_W_AC", "T_W_AC_in"}},
      {&f.E, {"mdot_W_E", "T_W_E_in"}},
  };
  for (const auto& [out, names] : circuits) {
    const auto& m = s.at(names.first);
    const auto& T = s.at(names.second);
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      out->push_back(m[k] / props.rho_liquid_water(T[k]));
    }
  }
  return f;
}

ShiftResult dead_time_shift(const MeasurementSeries& s, const CircuitFlows& flows,
                            const CircuitGeometry& geometry, ShiftDirection direction) {
  const std::size_t n = s.t.size();
  if (flows.G.size() != n || flows.AC.size() != n || flows.E.size() != n) {
    throw std::invalid_argument("flow series length differs from the measurement series");
  }
  struct Circuit {
    const char* in;
    const char* out;
    const std::vector<double>* flow;
    DeadTimeGeometry geo;
  };
  const Circuit circuits[] = {
      {"T_W_G_in", "T_W_G_out", &flows.G, geometry.G},
      {"T_W_AC_in", "T_W_AC_out", &flows.AC, geometry.AC},
      {"T_W_E_in", "T_W_E_out", &flows.E, geometry.E},
  };
  const double sign = direction == ShiftDirection::Forward ? 1.0 : -1.0;

  ShiftResult r;
  r.series = s;
  for (const auto& c : circuits) {
    if (c.geo.V_in < 0.0 || c.geo.V_out < 0.0) {
      throw std::invalid_argument("dead-time volumes must be nonnegative");
    }
    const auto& T_in = s.at(c.in);
    const auto& T_out = s.at(c.out);
    auto& new_in = r.series.channels[c.in];
    auto& new_out = r.series.channels[c.out];
    for (std::size_t k = 0; k < n; ++k) {
      const double q = (*c.flow)[k];
      if (!(q > 0.0)) throw std::invalid_argument(std::string("nonpositive flow for ") + c.in);
      const Interpolated a = interpolate(s.t, T_in, s.t[k] - sign * c.geo.V_in / q);
      const Interpolated b = interpolate(s.t, T_out, s.t[k] + sign * c.geo.V_out / q);
      new_in[k] = a.value;
      new_out[k] = b.value;
      r.truncated += (a.inside ? 0 : 1) + (b.inside ? 0 : 1);
    }
  }
  return r;
}

double rae_q(const std::array<double, 3>& sim, const std::array<double, 3>& meas) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (meas[i] == 0.0) throw MetricError("relative heat-flow error undefined for zero measurement");
    sum += std::abs((sim[i] - meas[i]) / meas[i]);
  }
  return sum / 3.0;
}

double settling_time(const std::vector<double>& t, const std::vector<double>& y, double t_step,
                     double band) {
  if (t.size() < 2) return kNaN;
  const std::size_t k0 = index_at(t, t_step);
  const double y_end = y.back();
  const double change = std::abs(y_end - y[k0]);
  if (change <= 1e-12 * std::max(1.0, std::abs(y_end))) return kNaN;
  std::size_t last_out = k0;
  for (std::size_t k = t.size(); k-- > k0 + 1;) {
    if (std::abs(y[k] - y_end) > band * change) {
      last_out = k;
      break;
    }
  }
  const std::size_t k = std::min(last_out + 1, t.size() - 1);
  return t[k] - t_step;
}

double rise_time(const std::vector<double>& t, const std::vector<double>& y, double t_step,
                 double fraction) {
  if (t.size() < 2) return kNaN;
  const std::size_t k0 = index_at(t, t_step);
  const double change = y.back() - y[k0];
  if (std::abs(change) <= 1e-12 * std::max(1.0, std::abs(y.back()))) return kNaN;
  for (std::size_t k = k0 + 1; k < t.size(); ++k) {
    if ((y[k] - y[k0]) / change >= fraction) return t[k] - t_step;
  }
  return kNaN;
}

int initial_direction(const std::vector<double>& t, const std::vector<double>& y, double t_step,
                      double window) {
  if (t.size() < 2) return 0;
  const std::size_t k0 = index_at(t, t_step);
  const double y0 = y[k0];
  const double t_stop = t_step + window;
  double integral = 0.0;
  for (std::size_t k = k0 + 1; k < t.size() && t[k - 1] < t_stop; ++k) {
    const double ta = std::max(t[k - 1], t_step);
    const double tb = std::min(t[k], t_stop);
    const double ya = interpolate(t, y, ta).value - y0;
    const double yb = interpolate(t, y, tb).value - y0;
    integral += 0.5 * (ya + yb) * (tb - ta);
  }
  const double tiny = 1e-12 * window * std::max(1.0, std::abs(y0));
  if (integral > tiny) return 1;
  if (integral < -tiny) return -1;
  return 0;
}

const ChannelMetrics& ComparisonReport::find(const std::string& variant,
                                             const std::string& channel) const {
  for (const auto& m : channels) {
    if (m.variant == variant && m.channel == channel) return m;
  }
  throw std::out_of_range("no metrics for " + variant + "/" + channel);
}

bool ScenarioResult::ok() const {
  for (const auto& r : runs) {
    if (!r.ok || !r.violations.empty()) return false;
  }
  return true;
}

const VariantRun& ScenarioResult::run(const std::string& variant) const {
  for (const auto& r : runs) {
    if (r.variant == variant) return r;
  }
  throw std::out_of_range("scenario has no variant " + variant);
}

Model make_model(ModelParams params, Variant v, const PropertyParams& props) {
  params.variant = v;
  return Model(std::move(params), props);
}

std::vector<std::string> steady_violations(const Model& model, const SteadyState& s) {
  std::vector<std::string> out;
  if (!s.report.converged) out.push_back("steady state not converged: " + s.report.message);
  if (!model.envelope(s.x, s.z, s.u).xi_ok) out.push_back("composition outside the window");
  const StateVector x = StateVector::from_vec(s.x);
  const AlgebraicVector z = AlgebraicVector::unpack(model.variant(), s.z);
  if (!(z.p_high > z.p_low)) out.push_back("high pressure not above low pressure");
  const std::pair<const char*, double> flows[] = {
      {"Qdot_G", z.Qdot_G}, {"Qdot_C", z.Qdot_C}, {"Qdot_E", z.Qdot_E}, {"Qdot_A", z.Qdot_A}};
  for (const auto& [name, q] : flows) {
    if (!(q > 0.0)) out.push_back(std::string(name) + " not positive");
  }
  const Vec c = model.closure_relations(x, z);
  if (c.cwiseAbs().maxCoeff() > 1e-8) out.push_back("mass closure violated");
  return out;
}

std::pair<std::vector<double>, std::vector<double>> sump_masses(const Model& model,
                                                                const Trajectory& tr) {
  std::vector<double> total, libr;
  for (std::size_t k = 0; k < tr.x.size() && k < tr.z.size(); ++k) {
    const StateVector x = StateVector::from_vec(tr.x[k]);
    const AlgebraicVector z = AlgebraicVector::unpack(model.variant(), tr.z[k]);
    total.push_back(x.m_PSo_G + x.m_RSo_A + z.m_Ref_E + model.params().m_Ref_C);
    libr.push_back(x.m_LiBr_G + z.m_LiBr_A);
  }
  return {total, libr};
}

std::vector<std::string> trajectory_violations(const Model& model, const Trajectory& tr,
                                               double mass_tol) {
  std::vector<std::string> out;
  if (!tr.complete) out.push_back("trajectory incomplete: " + tr.message);
  const auto [total, libr] = sump_masses(model, tr);
  double drift_total = 0.0, drift_libr = 0.0;
  for (std::size_t k = 0; k < total.size(); ++k) {
    drift_total = std::max(drift_total, std::abs(total[k] - total.front()));
    drift_libr = std::max(drift_libr, std::abs(libr[k] - libr.front()));
  }
  if (drift_total > mass_tol) out.push_back("total sump mass drift " + format_number(drift_total));
  if (drift_libr > mass_tol) out.push_back("LiBr mass drift " + format_number(drift_libr));
  return out;
}

ScenarioResult run_scenario(const Scenario& scenario, const ModelParams& params,
                            const RunOptions& opt) {
  const Properties props(opt.properties, RangePolicy::Extrapolate);
  scenario.validate(props);

  std::vector<std::future<VariantRun>> jobs;
  for (const auto& v : scenario.variants) {
    jobs.push_back(std::async(std::launch::async, run_variant, v, std::cref(scenario),
                              std::cref(params), std::cref(opt)));
  }
  ScenarioResult result;
  result.name = scenario.name;
  for (auto& j : jobs) result.runs.push_back(j.get());

  // reference series for the error metrics
  ComparisonReport& rep = result.report;
  std::optional<MeasurementSeries> ref;
  if (!scenario.measurements.empty()) {
    const MeasurementSeries meas = read_measurements(scenario.measurements);
    ShiftResult shifted =
        dead_time_shift(meas, CircuitFlows::from_series(meas, props), scenario.dead_time);
    result.truncated_samples = shifted.truncated;
    ref = std::move(shifted.series);
    rep.reference = "measurements";
  } else {
    for (const auto& r : result.runs) {
      if (r.variant == "base-a" && r.ok) ref = r.series;
    }
    rep.reference = ref ? "base-a" : "none";
  }

  // operating points: the last sample before each later breakpoint, and t_end
  std::vector<double> points;
  for (const auto& s : scenario.steps) {
    if (s.t > 0.0) points.push_back(s.t);
  }
  points.push_back(scenario.t_end);
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const double t_step = scenario.first_step().value_or(0.0);
  for (const auto& r : result.runs) {
    if (!r.ok) continue;
    for (const auto& ch : OutputVector::names()) {
      ChannelMetrics m;
      m.variant = r.variant;
      m.channel = ch;
      const auto& y = r.series.at(ch);
      if (ref) {
        fill_errors(m, r.series.t, y, ref->t, ref->at(ch));
      } else {
        m.max_abs = m.rms = kNaN;
      }
      m.settling = scenario.steps.empty() ? kNaN : settling_time(r.series.t, y, t_step);
      m.rise = scenario.steps.empty() ? kNaN : rise_time(r.series.t, y, t_step);
      m.direction = scenario.steps.empty() ? 0 : initial_direction(r.series.t, y, t_step);
      rep.channels.push_back(std::move(m));
    }
    if (!ref) continue;
    for (double tp : points) {
      const std::size_t k = index_at(r.series.t, tp);
      std::array<double, 3> meas{};
      const char* q_names[] = {"Qdot_G", "Qdot_AC", "Qdot_E"};
      for (int i = 0; i < 3; ++i) {
        meas[i] = interpolate(ref->t, ref->at(q_names[i]), r.series.t[k]).value;
      }
      OperatingPointError e;
      e.variant = r.variant;
      e.t = r.series.t[k];
      try {
        e.rae_q = rae_q(heat_flows(r.series, k), meas);
      } catch (const MetricError&) {
        e.rae_q = kNaN;
      }
      rep.operating_points.push_back(e);
    }
  }
  return result;
}

void write_report_csv(const std::string& path, const ComparisonReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : report.channels) {
    const bool power = m.channel.rfind("Qdot_", 0) == 0;
    const double scale = power ? 1e-3 : 1.0;
    rows.push_back({m.variant, m.channel, report.reference, power ? "kW" : "K",
                    format_number(m.max_abs * scale), format_number(m.rms * scale),
                    format_number(m.settling), format_number(m.rise),
                    std::to_string(m.direction)});
  }
  write_table_csv(path,
                  {"variant", "channel", "reference", "unit", "max_abs", "rms", "settling__s",
                   "rise95__s", "direction"},
                  rows);
}

void write_scenario_outputs(const ScenarioResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::vector<std::vector<std::string>> status;
  for (const auto& run : r.runs) {
    std::string notes = run.error;
    for (const auto& v : run.violations) notes += (notes.empty() ? "" : "; ") + v;
    std::replace(notes.begin(), notes.end(), ',', ';');
    std::replace(notes.begin(), notes.end(), '\n', ' ');
    status.push_back({run.variant, run.ok && run.violations.empty() ? "ok" : "failed", notes});
    if (!run.ok) continue;
    write_series_csv((base / (r.name + "__" + run.variant + ".csv")).string(), run.series);
    write_states_csv((base / (r.name + "__" + run.variant + "__states.csv")).string(),
                     run.trajectory);
  }
  write_table_csv((base / (r.name + "__status.csv")).string(), {"variant", "status", "notes"},
                  status);
  write_report_csv((base / (r.name + "__report.csv")).string(), r.report);
  std::vector<std::vector<std::string>> rae;
  for (const auto& e : r.report.operating_points) {
    rae.push_back({e.variant, format_number(e.t), format_number(e.rae_q)});
  }
  write_table_csv((base / (r.name + "__rae.csv")).string(), {"variant", "time__s", "rae_q"},
                  rae);
}

std::vector<SweepPoint> steady_sweep(const std::string& axis, const std::vector<Quantity>& values,
                                     const InputSettings& fixed,
                                     const std::vector<std::string>& variants,
                                     const ModelParams& params, const RunOptions& opt) {
  const auto& keys = settings_keys();
  if (std::find(keys.begin(), keys.end(), axis) == keys.end()) {
    throw std::invalid_argument("unknown sweep axis '" + axis + "'");
  }
  auto sweep_variant = [&](const std::string& name) {
    std::vector<SweepPoint> out;
    const Model model = make_model(params, variant_of(name), opt.properties);
    std::optional<StateSpace> lin;
    Vec u0;
    if (name == "base-b") {
      u0 = resolve_inputs(fixed, model.props());
      const SteadyState anchor = solve_steady_state(model, u0, std::nullopt, opt.newton);
      if (!anchor.report.converged) {
        throw ModelError("base-b anchor did not converge: " + anchor.report.message);
      }
      lin = linearize(model, anchor);
    }
    std::optional<std::pair<Vec, Vec>> seed;
    for (const auto& q : values) {
      SweepPoint p;
      p.variant = name;
      p.value = q.value;
      InputSettings s = fixed;
      s[axis] = q;
      try {
        p.u = resolve_inputs(s, model.props());
        if (lin) {
          p.y = lin->y0 + lin->steady_gain() * (p.u - lin->u0);
          p.converged = true;
        } else {
          SteadyState st = solve_steady_state(model, p.u, seed, opt.newton);
          if (!st.report.converged && seed) {
            st = solve_steady_state(model, p.u, std::nullopt, opt.newton);
          }
          p.y = st.y;
          p.converged = st.report.converged;
          if (p.converged) {
            seed = std::make_pair(st.x, st.z);
          } else {
            p.error = st.report.message;
          }
        }
      } catch (const std::exception& e) {
        p.error = e.what();
      }
      out.push_back(std::move(p));
    }
    return out;
  };

  std::vector<std::future<std::vector<SweepPoint>>> jobs;
  for (const auto& v : variants) jobs.push_back(std::async(std::launch::async, sweep_variant, v));
  std::vector<SweepPoint> all;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      for (auto& p : jobs[i].get()) all.push_back(std::move(p));
    } catch (const std::exception& e) {
      for (const auto& q : values) {
        SweepPoint p;
        p.variant = variants[i];
        p.value = q.value;
        p.error = e.what();
        all.push_back(std::move(p));
      }
    }
  }
  return all;
}

void write_sweep_csv(const std::string& path, const std::string& axis,
                     const std::vector<SweepPoint>& points) {
  const Dimension dim = axis.rfind("T_", 0) == 0 ? Dimension::Temperature
                        : axis.rfind("Vdot_", 0) == 0 ? Dimension::VolumeFlow
                                                      : Dimension::MassFlow;
  const std::string axis_u = axis_unit(axis, dim);
  const Unit& au = unit_from_csv(axis_u);
  std::vector<std::string> header = {"variant", "sweep_" + axis + "__" + axis_u, "converged"};
  for (const auto& n : InputVector::names()) header.push_back(n + "__" + display_unit(n));
  for (const auto& n : OutputVector::names()) header.push_back(n + "__" + display_unit(n));
  header.push_back("error");

  std::vector<std::vector<std::string>> rows;
  for (const auto& p : points) {
    std::vector<std::string> row = {p.variant, format_number(au.from_si(p.value)),
                                    p.converged ? "1" : "0"};
    for (int i = 0; i < InputVector::size; ++i) {
      const Unit& u = unit_from_csv(display_unit(InputVector::names()[i]));
      row.push_back(p.u.size() ? format_number(u.from_si(p.u[i])) : "nan");
    }
    for (int i = 0; i < OutputVector::size; ++i) {
      const Unit& u = unit_from_csv(display_unit(OutputVector::names()[i]));
      row.push_back(p.y.size() ? format_number(u.from_si(p.y[i])) : "nan");
    }
    std::string err = p.error;
    std::replace(err.begin(), err.end(), ',', ';');
    row.push_back(err);
    rows.push_back(std::move(row));
  }
  write_table_csv(path, header, rows);
}

}  // namespace ahpd
