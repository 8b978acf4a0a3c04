// Command-line front end: steady, sweep, simulate, linearize, compare, provenance.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ahpd/harness.h"
#include "ahpd/linearize.h"
#include "ahpd/params_io.h"
#include "ahpd/props_validation.h"
#include "ahpd/scenario.h"

namespace fs = std::filesystem;
using namespace ahpd;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Common {
  std::string scenario;
  std::string out_dir = "out";
  std::vector<std::string> variants;
  double dt = 0.0;
  double tol = 0.0;
  std::string model_params;
  std::string property_params;
  std::string solver_options;
};

struct Setup {
  Scenario scenario;
  ModelParams params;
  RunOptions run;
};

Setup prepare(const Common& c) {
  Setup s;
  s.scenario = load_scenario(c.scenario);
  if (!c.variants.empty()) s.scenario.variants = c.variants;
  if (c.dt > 0.0) s.scenario.dt = c.dt;
  if (!c.model_params.empty()) s.params = load_model_params(c.model_params);
  if (!c.property_params.empty()) {
    s.run.properties = load_property_params(c.property_params, PropertyParams::defaults());
  }
  if (!c.solver_options.empty()) s.run.newton = load_solver_options(c.solver_options);
  if (c.tol > 0.0) s.run.newton.residual_tol = c.tol;
  s.run.newton.validate();
  s.scenario.validate(Properties(s.run.properties, RangePolicy::Extrapolate));
  fs::create_directories(c.out_dir);
  return s;
}

std::string out_path(const Common& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

int cmd_steady(const Common& c) {
  const Setup s = prepare(c);
  std::vector<std::string> header = {"variant", "converged", "iterations", "residual",
                                     "wall__s"};
  for (const auto& n : OutputVector::names()) header.push_back(n + "__" + display_unit(n));
  header.push_back("notes");
  std::vector<std::vector<std::string>> rows;
  bool ok = true;
  for (const auto& v : s.scenario.variants) {
    const Model model =
        make_model(s.params, parse_variant(v == "base-b" ? "base-a" : v), s.run.properties);
    const Vec u = s.scenario.initial_inputs(model.props());
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> row = {v};
    try {
      const SteadyState st = solve_steady_state(model, u, std::nullopt, s.run.newton);
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const auto violations = steady_violations(model, st);
      ok = ok && violations.empty();
      row.insert(row.end(), {st.report.converged ? "1" : "0",
                             std::to_string(st.report.iterations),
                             format_number(st.report.residual_norm), format_number(wall)});
      for (int i = 0; i < OutputVector::size; ++i) {
        const Unit& unit = unit_from_csv(display_unit(OutputVector::names()[i]));
        row.push_back(format_number(unit.from_si(st.y[i])));
      }
      std::string notes;
      for (const auto& w : st.report.warnings) notes += (notes.empty() ? "" : "; ") + w;
      for (const auto& w : violations) notes += (notes.empty() ? "" : "; ") + w;
      std::replace(notes.begin(), notes.end(), ',', ';');
      row.push_back(notes);
      std::printf("%-7s %s  Q_G %.3f kW  Q_AC %.3f kW  Q_E %.3f kW  T_G %.2f C  T_AC %.2f C  "
                  "T_E %.2f C  (%d it, %.3g s)\n",
                  v.c_str(), st.report.converged ? "converged" : "FAILED", st.y[3] * 1e-3,
                  st.y[4] * 1e-3, st.y[5] * 1e-3, st.y[0] - 273.15, st.y[1] - 273.15,
                  st.y[2] - 273.15, st.report.iterations, wall);
    } catch (const std::exception& e) {
      ok = false;
      row.insert(row.end(), {"0", "0", "nan", "nan"});
      for (int i = 0; i < OutputVector::size; ++i) row.push_back("nan");
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      row.push_back(msg);
      std::printf("%-7s FAILED  %s\n", v.c_str(), e.what());
    }
    rows.push_back(std::move(row));
  }
  write_table_csv(out_path(c, s.scenario.name + "__steady.csv"), header, rows);
  return ok ? kOk : kFailed;
}

int cmd_sweep(const Common& c) {
  const Setup s = prepare(c);
  if (!s.scenario.sweep) throw ScenarioError(s.scenario.name + ": no sweep section");
  const auto points = steady_sweep(s.scenario.sweep->axis, s.scenario.sweep->values,
                                   s.scenario.initial, s.scenario.variants, s.params, s.run);
  write_sweep_csv(out_path(c, s.scenario.name + "__sweep.csv"), s.scenario.sweep->axis, points);
  bool ok = true;
  for (const auto& p : points) {
    ok = ok && p.converged;
    if (!p.converged) std::printf("%s at %g: %s\n", p.variant.c_str(), p.value, p.error.c_str());
  }
  std::printf("%zu sweep points, %s\n", points.size(), ok ? "all converged" : "some failed");
  return ok ? kOk : kFailed;
}

void print_summary(const ScenarioResult& r) {
  for (const auto& run : r.runs) {
    std::printf("%-7s %s", run.variant.c_str(), run.ok ? "ok" : "FAILED");
    if (!run.error.empty()) std::printf("  %s", run.error.c_str());
    for (const auto& v : run.violations) std::printf("  [%s]", v.c_str());
    std::printf("\n");
  }
  if (r.truncated_samples > 0) {
    std::printf("dead-time shift truncated %d samples\n", r.truncated_samples);
  }
  std::printf("reference: %s\n", r.report.reference.c_str());
  for (const auto& m : r.report.channels) {
    const bool power = m.channel.rfind("Qdot_", 0) == 0;
    const double k = power ? 1e-3 : 1.0;
    std::printf("  %-7s %-11s max %8.4g %-2s rms %8.4g %-2s settle %7.1f s  rise95 %7.1f s  dir %+d\n",
                m.variant.c_str(), m.channel.c_str(), m.max_abs * k, power ? "kW" : "K",
                m.rms * k, power ? "kW" : "K", m.settling, m.rise, m.direction);
  }
  for (const auto& e : r.report.operating_points) {
    std::printf("  %-7s RAE_Q at t=%.0f s: %.4f\n", e.variant.c_str(), e.t, e.rae_q);
  }
}

int cmd_simulate(const Common& c, bool compare) {
  Setup s = prepare(c);
  if (compare && c.variants.empty()) s.scenario.variants = {"base-a", "base-b", "v1", "v2"};
  const ScenarioResult r = run_scenario(s.scenario, s.params, s.run);
  write_scenario_outputs(r, c.out_dir);
  if (compare) {
    print_summary(r);
  } else {
    for (const auto& run : r.runs) {
      std::printf("%-7s %s %s\n", run.variant.c_str(), run.ok ? "ok" : "FAILED",
                  run.error.c_str());
    }
  }
  return r.ok() ? kOk : kFailed;
}

int cmd_linearize(const Common& c) {
  const Setup s = prepare(c);
  bool ok = true;
  std::vector<std::string> models;
  for (const auto& v : s.scenario.variants) {
    const std::string name = v == "base-b" ? "base-a" : v;
    if (std::find(models.begin(), models.end(), name) == models.end()) models.push_back(name);
  }
  for (const auto& model_name : models) {
    const Model model = make_model(s.params, parse_variant(model_name), s.run.properties);
    const Vec u = s.scenario.initial_inputs(model.props());
    const SteadyState st = solve_steady_state(model, u, std::nullopt, s.run.newton);
    if (!st.report.converged) {
      std::printf("%s: anchor did not converge: %s\n", model_name.c_str(),
                  st.report.message.c_str());
      ok = false;
      continue;
    }
    const StateSpace ss = linearize(model, st);
    std::ofstream out(out_path(c, s.scenario.name + "__" + model_name + "__statespace.txt"));
    write_state_space(out, ss);

    const Mat G = ss.steady_gain();
    std::vector<std::string> header = {"output"};
    for (const auto& n : InputVector::names()) header.push_back(n);
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < G.rows(); ++i) {
      std::vector<std::string> row = {OutputVector::names()[i]};
      for (int j = 0; j < G.cols(); ++j) row.push_back(format_number(G(i, j)));
      rows.push_back(std::move(row));
    }
    write_table_csv(out_path(c, s.scenario.name + "__" + model_name + "__gain.csv"), header,
                    rows);
    const std::vector<int> k = ss.active_states();
    const Mat Ar = ss.A(k, k);
    const double max_real = Ar.eigenvalues().real().maxCoeff();
    ok = ok && !ss.ill_conditioned && max_real < 0.0;
    std::printf("%s: rcond(g_z) %.3g, slowest eigenvalue %.4g 1/s%s\n", model_name.c_str(),
                ss.g_z_rcond, max_real, ss.ill_conditioned ? " (ill-conditioned)" : "");
  }
  return ok ? kOk : kFailed;
}

int cmd_provenance(const Common& c) {
  const PropertyParams base =
      c.property_params.empty() ? PropertyParams::tabulated()
                                : load_property_params(c.property_params, PropertyParams::tabulated());
  const ValidationResult r = validate_property_params(base);
  fs::create_directories(c.out_dir);
  std::ofstream(out_path(c, "provenance.md")) << provenance_report(r);
  std::ofstream(out_path(c, "properties.json")) << dump_property_params(r.params);
  std::cout << provenance_report(r);
  return r.ok() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Absorption heat pump DAE simulator"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub, bool with_dt) {
    sub->add_option("scenario", c.scenario, "Scenario file (JSON)")->required()->check(
        CLI::ExistingFile);
    sub->add_option("-o,--out", c.out_dir, "Output directory");
    sub->add_option("--variant", c.variants, "Override the scenario's variants")
        ->check(CLI::IsMember({"base-a", "base-b", "v1", "v2"}));
    if (with_dt) sub->add_option("--dt", c.dt, "Time step override, s")->check(CLI::PositiveNumber);
    sub->add_option("--tol", c.tol, "Newton residual tolerance (scaled)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--params", c.model_params, "Model parameter file (JSON)")
        ->check(CLI::ExistingFile);
    sub->add_option("--props", c.property_params, "Property parameter file (JSON)")
        ->check(CLI::ExistingFile);
    sub->add_option("--solver", c.solver_options, "Solver options file (JSON)")
        ->check(CLI::ExistingFile);
  };

  auto* steady = app.add_subcommand("steady", "Steady state at the scenario's initial inputs");
  add_common(steady, false);
  auto* sweep = app.add_subcommand("sweep", "Steady states along the scenario's sweep axis");
  add_common(sweep, false);
  auto* simulate = app.add_subcommand("simulate", "Time response of the scenario's variants");
  add_common(simulate, true);
  auto* linearize_cmd = app.add_subcommand("linearize", "State-space model at the initial point");
  add_common(linearize_cmd, false);
  auto* compare = app.add_subcommand("compare", "Simulate and compare variants");
  add_common(compare, true);
  auto* provenance = app.add_subcommand("provenance", "Validate property parameters");
  provenance->add_option("-o,--out", c.out_dir, "Output directory");
  provenance->add_option("--props", c.property_params, "Property parameter file (JSON)")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*steady) return cmd_steady(c);
    if (*sweep) return cmd_sweep(c);
    if (*simulate) return cmd_simulate(c, false);
    if (*linearize_cmd) return cmd_linearize(c);
    if (*compare) return cmd_simulate(c, true);
    if (*provenance) return cmd_provenance(c);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
