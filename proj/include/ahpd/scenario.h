#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ahpd/model.h"
#include "ahpd/transient.h"
#include "ahpd/units.h"

namespace ahpd {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fluid volumes between a circuit's sensors and its heat exchanger, m3.
struct DeadTimeGeometry {
  double V_in = 0.0;
  double V_out = 0.0;
};

struct CircuitGeometry {
  DeadTimeGeometry G, AC, E;
};

/// Input settings as written in the scenario file. Keys are T_W_G_in,
/// flow_W_G, T_W_AC_in, flow_W_AC, T_W_E_in, flow_W_E and Vdot_RSo. Water
/// flows may be mass or volume flows; a volume flow is converted with the
/// liquid density at the circuit's current inlet temperature.
using InputSettings = std::map<std::string, Quantity>;

struct ScenarioStep {
  double t = 0.0;   // s
  InputSettings set;
};

struct Sweep {
  std::string axis;              // a settings key
  std::vector<Quantity> values;
};

/// Operating limits checked when a scenario is loaded.
struct InputLimits {
  Window T_W_G_in{333.15, 373.15};
  Window T_W_AC_in{288.15, 313.15};
  Window T_W_E_in{278.15, 298.15};
  Window mdot_W_G{0.05, 1.0};       // kg/s
  Window mdot_W_AC{0.2, 3.0};
  Window mdot_W_E{0.1, 1.6};
  Window Vdot_RSo{0.5e-4 / 3.6, 7.0e-4 / 3.6};   // m3/s, 50 to 700 L/h
};

struct Scenario {
  std::string name;
  std::vector<std::string> variants{"base-a"};   // base-a, base-b, v1, v2
  InputSettings initial;                         // missing keys take the reference point
  std::vector<ScenarioStep> steps;
  double t_end = 3600.0;   // s
  double dt = 1.0;         // s
  int output_every = 1;
  std::string measurements;   // resolved path, empty if none
  CircuitGeometry dead_time;
  std::optional<Sweep> sweep;

  /// Inputs (SI vector) resolved from the initial settings.
  Vec initial_inputs(const Properties& props) const;
  /// Schedule whose point at t = 0 includes any steps given at t = 0.
  InputSchedule schedule(const Properties& props) const;
  /// First step time, if any.
  std::optional<double> first_step() const;
  /// Throws ScenarioError on bad variants, times or inputs outside limits.
  void validate(const Properties& props, const InputLimits& limits = {}) const;
};

/// Settings key of each input vector entry, in input order.
const std::array<std::string, InputVector::size>& settings_keys();

/// Resolves settings over the reference point into an SI input vector.
Vec resolve_inputs(const InputSettings& settings, const Properties& props);

/// Reference-point settings with explicit units.
InputSettings reference_settings();

Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

}  // namespace ahpd
