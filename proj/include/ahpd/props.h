#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ahpd {

/// Selects which fitted parameter row applies to a saturation relation.
/// HighSide serves generator/condenser, LowSide absorber/evaporator.
enum class PressureRange { HighSide, LowSide };

const char* to_string(PressureRange range);

/// Closed validity interval of one coordinate of a correlation.
struct Window {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const;
  double clamp(double v) const;
};

/// Coefficients of one correlation in tabulated order (A1..A5, B1..B4, ...)
/// together with the coordinate windows it was fitted on.
struct CorrelationParams {
  std::string name;
  char symbol = '?';
  std::vector<double> coef;
  Window T;
  Window xi;      // empty (lo == hi == 0) for pure-water correlations
  Window p;       // empty when the table gives no pressure bound

  bool has_xi() const { return xi.hi > xi.lo; }
  bool has_p() const { return p.hi > p.lo; }
  std::string coefficient_name(std::size_t i) const;
};

/// Full parameter set of the simplified LiBr/H2O and water correlations.
///
/// The sign conventions are those of the tabulated equations:
///   h_sol   = -A1 - A2 xi + A3 xi^2 + A4 T - A5 xi T
///   ln psol = -B1 + B2 xi - B3 xi^2 + B4 T
///   rho_sol =  R1 - R2 xi + R3 xi^2 + R4 T
///   h_l     = -C1 + C2 T
///   h_v     =  D1 + D2 T
///   ln pw   = -E1 + E2 T
///   rho_l   =  F1 + F2 T - F3 T^2
/// so a sign correction is expressed by a negative coefficient value.
struct PropertyParams {
  CorrelationParams h_solution;
  CorrelationParams p_sat_solution_high;
  CorrelationParams p_sat_solution_low;
  CorrelationParams rho_solution;
  CorrelationParams h_liquid_water;
  CorrelationParams h_vapor_water;
  CorrelationParams p_sat_water_high;
  CorrelationParams p_sat_water_low;
  CorrelationParams rho_liquid_water;

  /// Coefficients exactly as tabulated, before the validation pass.
  static PropertyParams tabulated();

  /// Validated parameter set (tabulated values after oracle corrections).
  static const PropertyParams& defaults();

  std::vector<CorrelationParams*> correlations();
  std::vector<const CorrelationParams*> correlations() const;
  CorrelationParams& by_name(const std::string& name);
};

/// Thrown in strict mode when an argument leaves the fitted window.
class PropertyRangeError : public std::out_of_range {
 public:
  PropertyRangeError(std::string function, std::string coordinate, double value,
                     Window window);

  const std::string& function() const { return function_; }
  const std::string& coordinate() const { return coordinate_; }
  double value() const { return value_; }
  Window window() const { return window_; }

 private:
  std::string function_;
  std::string coordinate_;
  double value_;
  Window window_;
};

enum class RangePolicy {
  Strict,       // throw PropertyRangeError
  Clamp,        // evaluate at the window edge, record the event
  Extrapolate,  // evaluate the formula as is, record the event
};

/// Collects out-of-window events raised under the lenient policies.
struct RangeLog {
  int count = 0;
  std::vector<std::string> messages;  // first few events only

  void record(const std::string& function, const std::string& coordinate, double value,
              Window window);
  void clear();
};

/// Property functions over an immutable parameter set. Cheap to copy.
///
/// A Properties object is safe for concurrent use when no RangeLog is
/// attached; with a log attached, each thread needs its own instance.
class Properties {
 public:
  explicit Properties(PropertyParams params = PropertyParams::defaults(),
                      RangePolicy policy = RangePolicy::Strict, RangeLog* log = nullptr);

  const PropertyParams& params() const { return params_; }
  RangePolicy policy() const { return policy_; }

  /// Copy of this object evaluating under a different policy.
  Properties with_policy(RangePolicy policy, RangeLog* log = nullptr) const;

  // LiBr/H2O solution
  double h_solution(double T, double xi) const;
  double cp_solution(double xi) const;
  double t_from_h_solution(double h, double xi) const;
  double ln_p_sat_solution(double T, double xi, PressureRange range) const;
  double p_sat_solution(double T, double xi, PressureRange range) const;
  double t_sat_solution(double p, double xi, PressureRange range) const;
  double rho_solution(double T, double xi) const;

  // water
  double h_liquid_water(double T) const;
  double t_from_h_liquid_water(double h) const;
  double cp_liquid_water() const;
  double h_vapor_water(double T) const;
  double ln_p_sat_water(double T, PressureRange range) const;
  double p_sat_water(double T, PressureRange range) const;
  double t_sat_water(double p, PressureRange range) const;
  double rho_liquid_water(double T) const;

 private:
  double guard(const CorrelationParams& c, const char* coordinate, const Window& w,
               double v) const;
  const CorrelationParams& solution_saturation(PressureRange range) const;
  const CorrelationParams& water_saturation(PressureRange range) const;

  PropertyParams params_;
  RangePolicy policy_;
  RangeLog* log_;
};

}  // namespace ahpd
