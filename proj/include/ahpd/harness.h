#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahpd/csv.h"
#include "ahpd/linearize.h"
#include "ahpd/scenario.h"
#include "ahpd/solver.h"

namespace ahpd {

/// Raised when a metric is undefined for the given data.
class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Circuit volume flows per sample of a series, m3/s.
struct CircuitFlows {
  std::vector<double> G, AC, E;

  static CircuitFlows constant(std::size_t n, double G, double AC, double E);
  /// From the series' mass flows and inlet temperatures.
  static CircuitFlows from_series(const MeasurementSeries& s, const Properties& props);
};

enum class ShiftDirection { Forward, Inverse };

struct ShiftResult {
  MeasurementSeries series;
  int truncated = 0;   // samples whose shifted time left the series span
};

/// Moves inlet temperatures later by V_in / Vdot and outlet temperatures
/// earlier by V_out / Vdot (Forward), or the reverse (Inverse). Samples are
/// linearly interpolated; shifted times outside the span hold the edge value
/// and are counted as truncated.
ShiftResult dead_time_shift(const MeasurementSeries& s, const CircuitFlows& flows,
                            const CircuitGeometry& geometry,
                            ShiftDirection direction = ShiftDirection::Forward);

/// Mean relative absolute heat-flow error over generator, cooling water and
/// evaporator. Throws MetricError on a zero measured value.
double rae_q(const std::array<double, 3>& sim, const std::array<double, 3>& meas);

/// First time after t_step from which |y - y_end| stays within band * |y_end - y_step|.
/// Returned relative to t_step; NaN if the channel does not change.
double settling_time(const std::vector<double>& t, const std::vector<double>& y, double t_step,
                     double band = 0.05);
/// First time after t_step at which 95% of the net change is reached.
double rise_time(const std::vector<double>& t, const std::vector<double>& y, double t_step,
                 double fraction = 0.95);
/// Sign (+1, -1 or 0) of the deviation from the pre-step value integrated
/// over `window` seconds after t_step.
int initial_direction(const std::vector<double>& t, const std::vector<double>& y, double t_step,
                      double window = 60.0);

struct ChannelMetrics {
  std::string variant;
  std::string channel;
  double max_abs = 0.0;    // vs reference, SI
  double rms = 0.0;
  double settling = 0.0;   // s after the first step
  double rise = 0.0;       // s after the first step
  int direction = 0;
};

struct OperatingPointError {
  std::string variant;
  double t = 0.0;       // sample the point is read at
  double rae_q = 0.0;
};

struct ComparisonReport {
  std::string reference;   // "measurements", "base-a" or "none"
  std::vector<ChannelMetrics> channels;
  std::vector<OperatingPointError> operating_points;
  const ChannelMetrics& find(const std::string& variant, const std::string& channel) const;
};

struct VariantRun {
  std::string variant;
  bool ok = false;
  std::string error;
  std::vector<std::string> violations;
  MeasurementSeries series;   // decimated outputs and inputs
  Trajectory trajectory;      // decimated
};

struct ScenarioResult {
  std::string name;
  std::vector<VariantRun> runs;
  ComparisonReport report;
  int truncated_samples = 0;
  bool ok() const;
  const VariantRun& run(const std::string& variant) const;
};

struct RunOptions {
  SolverOptions newton{};
  PropertyParams properties = PropertyParams::defaults();
};

Model make_model(ModelParams params, Variant v, const PropertyParams& props);

/// Hard invariants of a steady state: convergence, composition window,
/// pressure ordering, positive heat flows and the mass closures.
std::vector<std::string> steady_violations(const Model& model, const SteadyState& s);
/// Along a trajectory: completeness and drift of total sump and LiBr masses.
std::vector<std::string> trajectory_violations(const Model& model, const Trajectory& tr,
                                               double mass_tol = 1e-8);

/// Sump totals (all sumps, LiBr) at every sample of a nonlinear trajectory.
std::pair<std::vector<double>, std::vector<double>> sump_masses(const Model& model,
                                                                const Trajectory& tr);

/// Runs every variant of the scenario from the steady state at its initial
/// inputs. Variants run concurrently; one failing variant does not stop the
/// others. Metrics compare against the dead-time-shifted measurements if
/// given, otherwise against base-a.
ScenarioResult run_scenario(const Scenario& scenario, const ModelParams& params,
                            const RunOptions& opt = {});

/// Per-variant series, state and report CSVs in `dir`.
void write_scenario_outputs(const ScenarioResult& r, const std::string& dir);
void write_report_csv(const std::string& path, const ComparisonReport& report);

struct SweepPoint {
  std::string variant;
  double value = 0.0;   // axis value as given, SI
  Vec u;
  Vec y;
  bool converged = false;
  std::string error;
};

/// Steady outputs per variant along `values` of one input axis, the other
/// inputs held at `fixed`. base-b evaluates the linearization of base-a at
/// `fixed`.
std::vector<SweepPoint> steady_sweep(const std::string& axis, const std::vector<Quantity>& values,
                                     const InputSettings& fixed,
                                     const std::vector<std::string>& variants,
                                     const ModelParams& params, const RunOptions& opt = {});

void write_sweep_csv(const std::string& path, const std::string& axis,
                     const std::vector<SweepPoint>& points);

}  // namespace ahpd
