#include "ahpd/scenario.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ahpd {

using nlohmann::json;

namespace {

const char* kVariants[] = {"base-a", "base-b", "v1", "v2"};

Quantity quantity(const json& j, const std::string& where) {
  if (!j.is_string()) {
    throw ScenarioError(where + ": expected a quantity with unit, e.g. \"80 °C\"");
  }
  try {
    return parse_quantity(j.get<std::string>());
  } catch (const UnitError& e) {
    throw ScenarioError(where + ": " + e.what());
  }
}

double quantity_si(const json& j, Dimension dim, const std::string& where) {
  const Quantity q = quantity(j, where);
  if (q.dim != dim) {
    throw ScenarioError(where + ": expected a " + std::string(to_string(dim)) + ", got a " +
                        to_string(q.dim));
  }
  return q.value;
}

Dimension expected_dimension(const std::string& key) {
  if (key.rfind("T_", 0) == 0) return Dimension::Temperature;
  return Dimension::VolumeFlow;   // flows accept mass flow as well
}

InputSettings settings(const json& j, const std::string& where) {
  if (!j.is_object()) throw ScenarioError(where + ": expected an object");
  const auto& keys = settings_keys();
  InputSettings out;
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ScenarioError(where + ": unknown input '" + key + "'");
    }
    const Quantity q = quantity(value, where + "." + key);
    const Dimension want = expected_dimension(key);
    const bool flow_ok = key.rfind("flow_", 0) == 0 &&
                         (q.dim == Dimension::MassFlow || q.dim == Dimension::VolumeFlow);
    if (q.dim != want && !flow_ok) {
      throw ScenarioError(where + "." + key + ": wrong dimension " + to_string(q.dim));
    }
    out[key] = q;
  }
  return out;
}

DeadTimeGeometry geometry(const json& j, const std::string& where) {
  DeadTimeGeometry g;
  for (const auto& [key, value] : j.items()) {
    if (key == "V_in") {
      g.V_in = quantity_si(value, Dimension::Volume, where + ".V_in");
    } else if (key == "V_out") {
      g.V_out = quantity_si(value, Dimension::Volume, where + ".V_out");
    } else {
      throw ScenarioError(where + ": unknown key '" + key + "'");
    }
  }
  if (g.V_in < 0.0 || g.V_out < 0.0) throw ScenarioError(where + ": negative volume");
  return g;
}

}  // namespace

const std::array<std::string, InputVector::size>& settings_keys() {
  static const std::array<std::string, InputVector::size> keys = {
      "T_W_G_in", "flow_W_G", "T_W_AC_in", "flow_W_AC", "T_W_E_in", "flow_W_E", "Vdot_RSo"};
  return keys;
}

InputSettings reference_settings() {
  return {
      {"T_W_G_in", parse_quantity("80 °C")},     {"flow_W_G", parse_quantity("1200 kg/h")},
      {"T_W_AC_in", parse_quantity("29 °C")},    {"flow_W_AC", parse_quantity("6200 kg/h")},
      {"T_W_E_in", parse_quantity("14 °C")},     {"flow_W_E", parse_quantity("2200 kg/h")},
      {"Vdot_RSo", parse_quantity("450 L/h")},
  };
}

Vec resolve_inputs(const InputSettings& settings, const Properties& props) {
  InputSettings all = reference_settings();
  for (const auto& [k, q] : settings) all[k] = q;
  const auto& keys = settings_keys();
  Vec u(InputVector::size);
  for (int i = 0; i < InputVector::size; ++i) {
    const Quantity& q = all.at(keys[i]);
    if (keys[i].rfind("flow_", 0) == 0 && q.dim == Dimension::VolumeFlow) {
      const double T_in = all.at(keys[i - 1]).value;
      u[i] = q.value * props.rho_liquid_water(T_in);
    } else {
      u[i] = q.value;
    }
  }
  return u;
}

Vec Scenario::initial_inputs(const Properties& props) const {
  return resolve_inputs(initial, props);
}

std::optional<double> Scenario::first_step() const {
  if (steps.empty()) return std::nullopt;
  return steps.front().t;
}

InputSchedule Scenario::schedule(const Properties& props) const {
  std::vector<std::pair<double, Vec>> points;
  InputSettings current = initial;
  std::size_t k = 0;
  for (; k < steps.size() && steps[k].t == 0.0; ++k) {
    for (const auto& [key, q] : steps[k].set) current[key] = q;
  }
  points.emplace_back(0.0, resolve_inputs(current, props));
  for (; k < steps.size(); ++k) {
    for (const auto& [key, q] : steps[k].set) current[key] = q;
    if (points.back().first == steps[k].t) {
      points.back().second = resolve_inputs(current, props);
    } else {
      points.emplace_back(steps[k].t, resolve_inputs(current, props));
    }
  }
  return InputSchedule(std::move(points));
}

void Scenario::validate(const Properties& props, const InputLimits& limits) const {
  if (variants.empty()) throw ScenarioError(name + ": no variants");
  for (const auto& v : variants) {
    if (std::find(std::begin(kVariants), std::end(kVariants), v) == std::end(kVariants)) {
      throw ScenarioError(name + ": unknown variant '" + v + "'");
    }
  }
  if (!(dt > 0.0)) throw ScenarioError(name + ": dt must be positive");
  if (!(t_end > 0.0)) throw ScenarioError(name + ": t_end must be positive");
  if (output_every < 1) throw ScenarioError(name + ": output_every must be at least 1");
  double last = 0.0;
  for (const auto& s : steps) {
    if (s.t < last) throw ScenarioError(name + ": step times must not decrease");
    if (s.t > t_end) throw ScenarioError(name + ": step after t_end");
    last = s.t;
  }
  if (!measurements.empty() && !std::filesystem::exists(measurements)) {
    throw ScenarioError(name + ": measurement file not found: " + measurements);
  }

  auto check = [&](const Vec& u, const std::string& when) {
    const InputVector in = InputVector::from_vec(u);
    const std::pair<const char*, std::pair<double, Window>> items[] = {
        {"T_W_G_in", {in.T_W_G_in, limits.T_W_G_in}},
        {"mdot_W_G", {in.mdot_W_G, limits.mdot_W_G}},
        {"T_W_AC_in", {in.T_W_AC_in, limits.T_W_AC_in}},
        {"mdot_W_AC", {in.mdot_W_AC, limits.mdot_W_AC}},
        {"T_W_E_in", {in.T_W_E_in, limits.T_W_E_in}},
        {"mdot_W_E", {in.mdot_W_E, limits.mdot_W_E}},
        {"Vdot_RSo", {in.Vdot_RSo, limits.Vdot_RSo}},
    };
    for (const auto& [label, vw] : items) {
      if (!vw.second.contains(vw.first)) {
        std::ostringstream os;
        os << name << ": " << label << " = " << vw.first << " (SI) " << when
           << " is outside [" << vw.second.lo << ", " << vw.second.hi << "]";
        throw ScenarioError(os.str());
      }
    }
  };
  check(initial_inputs(props), "initially");
  const InputSchedule sched = schedule(props);
  for (const auto& [t, u] : sched.breakpoints()) {
    check(u, "at t = " + std::to_string(t) + " s");
  }
  if (sweep) {
    for (const auto& q : sweep->values) {
      InputSettings s = initial;
      s[sweep->axis] = q;
      check(resolve_inputs(s, props), "in the sweep");
    }
  }
}

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");

  Scenario s;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") {
      s.name = value.get<std::string>();
    } else if (key == "variants") {
      s.variants = value.get<std::vector<std::string>>();
    } else if (key == "initial") {
      s.initial = settings(value, "initial");
    } else if (key == "steps") {
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string where = "steps[" + std::to_string(i) + "]";
        ScenarioStep step;
        step.t = quantity_si(value[i].at("t"), Dimension::Time, where + ".t");
        step.set = settings(value[i].at("set"), where + ".set");
        s.steps.push_back(std::move(step));
      }
    } else if (key == "t_end") {
      s.t_end = quantity_si(value, Dimension::Time, "t_end");
    } else if (key == "dt") {
      s.dt = quantity_si(value, Dimension::Time, "dt");
    } else if (key == "output_every") {
      s.output_every = value.get<int>();
    } else if (key == "measurements") {
      const std::filesystem::path p(value.get<std::string>());
      s.measurements = (p.is_absolute() ? p : std::filesystem::path(base_dir) / p).string();
    } else if (key == "dead_time") {
      for (const auto& [circuit, body] : value.items()) {
        const std::string where = "dead_time." + circuit;
        if (circuit == "G") {
          s.dead_time.G = geometry(body, where);
        } else if (circuit == "AC") {
          s.dead_time.AC = geometry(body, where);
        } else if (circuit == "E") {
          s.dead_time.E = geometry(body, where);
        } else {
          throw ScenarioError("unknown circuit '" + circuit + "' in dead_time");
        }
      }
    } else if (key == "sweep") {
      Sweep sw;
      sw.axis = value.at("axis").get<std::string>();
      const auto& keys = settings_keys();
      if (std::find(keys.begin(), keys.end(), sw.axis) == keys.end()) {
        throw ScenarioError("unknown sweep axis '" + sw.axis + "'");
      }
      json wrapped;
      for (const auto& v : value.at("values")) {
        wrapped[sw.axis] = v;
        sw.values.push_back(settings(wrapped, "sweep.values").at(sw.axis));
      }
      if (sw.values.empty()) throw ScenarioError("sweep has no values");
      s.sweep = std::move(sw);
    } else {
      throw ScenarioError("unknown scenario key '" + key + "'");
    }
  }
  if (s.name.empty()) s.name = "scenario";
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_scenario(ss.str(), dir.empty() ? "." : dir.string());
}

}  // namespace ahpd
