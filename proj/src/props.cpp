#include "ahpd/props.h"
#include "ahpd/props_validation.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ahpd {

namespace {

// Relative slack on window edges so that round-off at the boundary of a
// closed interval does not trip the strict policy.
constexpr double kEdgeSlack = 1e-9;

CorrelationParams make(std::string name, char symbol, std::vector<double> coef, Window T,
                       Window xi = {}, Window p = {}) {
  CorrelationParams c;
  c.name = std::move(name);
  c.symbol = symbol;
  c.coef = std::move(coef);
  c.T = T;
  c.xi = xi;
  c.p = p;
  return c;
}

}  // namespace

const char* to_string(PressureRange range) {
  return range == PressureRange::HighSide ? "high" : "low";
}

bool Window::contains(double v) const {
  const double slack = kEdgeSlack * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  return v >= lo - slack && v <= hi + slack;
}

double Window::clamp(double v) const { return std::clamp(v, lo, hi); }

std::string CorrelationParams::coefficient_name(std::size_t i) const {
  return std::string(1, symbol) + std::to_string(i + 1);
}

PropertyParams PropertyParams::tabulated() {
  const Window xi{0.45, 0.6};
  PropertyParams p;
  p.h_solution = make("h_solution", 'A', {6.892e5, 7.001e5, 1.738e6, 3.617e3, 2.827e3},
                      {293.15, 363.15}, xi);
  p.p_sat_solution_low = make("p_sat_solution_low", 'B', {1.226e1, 1.042e1, 1.944e1, 6.237e-2},
                              {293.15, 328.15}, xi, {0.0, 2200.0});
  p.p_sat_solution_high = make("p_sat_solution_high", 'B', {6.804e0, 7.405e0, 1.483e1, 4.647e-2},
                               {323.15, 363.15}, xi, {5000.0, 14000.0});
  p.rho_solution = make("rho_solution", 'R', {1.349e3, 2.274e2, 1.856e3, 5.569e-1},
                        {293.15, 363.15}, xi);
  p.h_liquid_water = make("h_liquid_water", 'C', {1.143e6, 4.186e3}, {278.15, 368.15});
  // Fitted for T_sat(p) < T < T_sat(p) + 5 K with 800 < p < 15000 Pa, i.e. from
  // the saturation temperature at 800 Pa up to 5 K above that at 15 kPa.
  p.h_vapor_water = make("h_vapor_water", 'D', {2.009e6, 1.803e3}, {276.95, 332.15}, {},
                         {800.0, 15000.0});
  p.p_sat_water_low = make("p_sat_water_low", 'E', {1.158e1, 6.599e-1}, {277.15, 293.15});
  p.p_sat_water_high = make("p_sat_water_high", 'E', {7.591e0, 5.266e-2}, {303.15, 323.15});
  p.rho_liquid_water = make("rho_liquid_water", 'F', {7.397e-1, 1.984e-3, 3.760e-6},
                            {278.15, 368.15});
  return p;
}

const PropertyParams& PropertyParams::defaults() {
  static const PropertyParams validated = validate_property_params(tabulated()).params;
  return validated;
}

std::vector<CorrelationParams*> PropertyParams::correlations() {
  return {&h_solution,     &p_sat_solution_high, &p_sat_solution_low,
          &rho_solution,   &h_liquid_water,      &h_vapor_water,
          &p_sat_water_high, &p_sat_water_low,   &rho_liquid_water};
}

std::vector<const CorrelationParams*> PropertyParams::correlations() const {
  return {&h_solution,     &p_sat_solution_high, &p_sat_solution_low,
          &rho_solution,   &h_liquid_water,      &h_vapor_water,
          &p_sat_water_high, &p_sat_water_low,   &rho_liquid_water};
}

CorrelationParams& PropertyParams::by_name(const std::string& name) {
  for (auto* c : correlations()) {
    if (c->name == name) return *c;
  }
  throw std::invalid_argument("unknown property correlation: " + name);
}

PropertyRangeError::PropertyRangeError(std::string function, std::string coordinate,
                                       double value, Window window)
    : std::out_of_range([&] {
        std::ostringstream os;
        os.precision(10);
        os << function << ": " << coordinate << " = " << value << " outside [" << window.lo
           << ", " << window.hi << "]";
        return os.str();
      }()),
      function_(std::move(function)),
      coordinate_(std::move(coordinate)),
      value_(value),
      window_(window) {}

void RangeLog::record(const std::string& function, const std::string& coordinate, double value,
                      Window window) {
  ++count;
  if (messages.size() < 8) {
    std::ostringstream os;
    os.precision(8);
    os << function << ": " << coordinate << " = " << value << " outside [" << window.lo << ", "
       << window.hi << "]";
    messages.push_back(os.str());
  }
}

void RangeLog::clear() {
  count = 0;
  messages.clear();
}

Properties::Properties(PropertyParams params, RangePolicy policy, RangeLog* log)
    : params_(std::move(params)), policy_(policy), log_(log) {}

Properties Properties::with_policy(RangePolicy policy, RangeLog* log) const {
  Properties copy(*this);
  copy.policy_ = policy;
  copy.log_ = log;
  return copy;
}

double Properties::guard(const CorrelationParams& c, const char* coordinate, const Window& w,
                         double v) const {
  if (w.contains(v)) return v;
  switch (policy_) {
    case RangePolicy::Strict:
      throw PropertyRangeError(c.name, coordinate, v, w);
    case RangePolicy::Clamp:
      if (log_) log_->record(c.name, coordinate, v, w);
      return w.clamp(v);
    case RangePolicy::Extrapolate:
      if (log_) log_->record(c.name, coordinate, v, w);
      return v;
  }
  return v;
}

const CorrelationParams& Properties::solution_saturation(PressureRange range) const {
  return range == PressureRange::HighSide ? params_.p_sat_solution_high
                                          : params_.p_sat_solution_low;
}

const CorrelationParams& Properties::water_saturation(PressureRange range) const {
  return range == PressureRange::HighSide ? params_.p_sat_water_high : params_.p_sat_water_low;
}

double Properties::h_solution(double T, double xi) const {
  const auto& c = params_.h_solution;
  xi = guard(c, "xi", c.xi, xi);
  T = guard(c, "T", c.T, T);
  const auto& a = c.coef;
  return -a[0] - a[1] * xi + a[2] * xi * xi + a[3] * T - a[4] * xi * T;
}

double Properties::cp_solution(double xi) const {
  const auto& c = params_.h_solution;
  xi = guard(c, "xi", c.xi, xi);
  return c.coef[3] - c.coef[4] * xi;
}

double Properties::t_from_h_solution(double h, double xi) const {
  const auto& c = params_.h_solution;
  xi = guard(c, "xi", c.xi, xi);
  const auto& a = c.coef;
  const double T = (h + a[0] + a[1] * xi - a[2] * xi * xi) / (a[3] - a[4] * xi);
  return guard(c, "T", c.T, T);
}

double Properties::ln_p_sat_solution(double T, double xi, PressureRange range) const {
  const auto& c = solution_saturation(range);
  xi = guard(c, "xi", c.xi, xi);
  T = guard(c, "T", c.T, T);
  const auto& b = c.coef;
  return -b[0] + b[1] * xi - b[2] * xi * xi + b[3] * T;
}

double Properties::p_sat_solution(double T, double xi, PressureRange range) const {
  return std::exp(ln_p_sat_solution(T, xi, range));
}

double Properties::t_sat_solution(double p, double xi, PressureRange range) const {
  const auto& c = solution_saturation(range);
  if (!(p > 0.0)) throw std::domain_error(c.name + ": pressure must be positive");
  xi = guard(c, "xi", c.xi, xi);
  const auto& b = c.coef;
  const double T = (std::log(p) + b[0] - b[1] * xi + b[2] * xi * xi) / b[3];
  return guard(c, "T", c.T, T);
}

double Properties::rho_solution(double T, double xi) const {
  const auto& c = params_.rho_solution;
  xi = guard(c, "xi", c.xi, xi);
  T = guard(c, "T", c.T, T);
  const auto& r = c.coef;
  return r[0] - r[1] * xi + r[2] * xi * xi + r[3] * T;
}

double Properties::h_liquid_water(double T) const {
  const auto& c = params_.h_liquid_water;
  T = guard(c, "T", c.T, T);
  return -c.coef[0] + c.coef[1] * T;
}

double Properties::t_from_h_liquid_water(double h) const {
  const auto& c = params_.h_liquid_water;
  return guard(c, "T", c.T, (h + c.coef[0]) / c.coef[1]);
}

double Properties::cp_liquid_water() const { return params_.h_liquid_water.coef[1]; }

double Properties::h_vapor_water(double T) const {
  const auto& c = params_.h_vapor_water;
  T = guard(c, "T", c.T, T);
  return c.coef[0] + c.coef[1] * T;
}

double Properties::ln_p_sat_water(double T, PressureRange range) const {
  const auto& c = water_saturation(range);
  T = guard(c, "T", c.T, T);
  return -c.coef[0] + c.coef[1] * T;
}

double Properties::p_sat_water(double T, PressureRange range) const {
  return std::exp(ln_p_sat_water(T, range));
}

double Properties::t_sat_water(double p, PressureRange range) const {
  const auto& c = water_saturation(range);
  if (!(p > 0.0)) throw std::domain_error(c.name + ": pressure must be positive");
  return guard(c, "T", c.T, (std::log(p) + c.coef[0]) / c.coef[1]);
}

double Properties::rho_liquid_water(double T) const {
  const auto& c = params_.rho_liquid_water;
  T = guard(c, "T", c.T, T);
  const auto& f = c.coef;
  return f[0] + f[1] * T - f[2] * T * T;
}

}  // namespace ahpd
