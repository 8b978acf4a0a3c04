#include "ahpd/props_validation.h"

#include <cmath>
#include <functional>
#include <sstream>

namespace ahpd {

namespace {

constexpr double kT0 = 273.15;

struct Checker {
  const std::string& name;
  std::vector<OracleCheck> out;

  void near(const std::string& what, const std::function<double()>& eval, double expected,
            double rel_tol) {
    OracleCheck c{name, what, NAN, expected, rel_tol, false};
    try {
      c.computed = eval();
      c.passed = std::isfinite(c.computed) &&
                 std::abs(c.computed - expected) <= rel_tol * std::abs(expected);
    } catch (const std::exception&) {
      c.passed = false;
    }
    out.push_back(c);
  }

  // computed must lie in [lo, hi]; expected records the midpoint
  void within(const std::string& what, const std::function<double()>& eval, double lo,
              double hi) {
    OracleCheck c{name, what, NAN, 0.5 * (lo + hi), 0.0, false};
    try {
      c.computed = eval();
      c.passed = std::isfinite(c.computed) && c.computed >= lo && c.computed <= hi;
    } catch (const std::exception&) {
      c.passed = false;
    }
    out.push_back(c);
  }

  // computed < bound
  void below(const std::string& what, const std::function<double()>& eval, double bound) {
    OracleCheck c{name, what, NAN, bound, 0.0, false};
    try {
      c.computed = eval();
      c.passed = std::isfinite(c.computed) && c.computed < bound;
    } catch (const std::exception&) {
      c.passed = false;
    }
    out.push_back(c);
  }
};

// Order matters: later correlations are checked against the already repaired
// water functions.
const std::vector<std::string>& validation_order() {
  static const std::vector<std::string> order = {
      "h_liquid_water",  "h_vapor_water",       "p_sat_water_high",
      "p_sat_water_low", "rho_liquid_water",    "h_solution",
      "p_sat_solution_high", "p_sat_solution_low", "rho_solution"};
  return order;
}

std::vector<std::pair<PropertyParams, Correction>> candidates(const PropertyParams& base,
                                                             const std::string& name) {
  std::vector<std::pair<PropertyParams, Correction>> out;
  const std::vector<double> coef = PropertyParams(base).by_name(name).coef;
  const std::size_t n = coef.size();

  for (std::size_t i = 0; i < n; ++i) {
    PropertyParams p = base;
    auto& c = p.by_name(name);
    c.coef[i] = -c.coef[i];
    out.push_back({p, {name, c.coefficient_name(i), "sign", coef[i], c.coef[i]}});
  }
  const int shifts[] = {-1, 1, -2, 2, -3, 3};
  for (std::size_t i = 0; i < n; ++i) {
    for (int k : shifts) {
      PropertyParams p = base;
      auto& c = p.by_name(name);
      c.coef[i] *= std::pow(10.0, k);
      out.push_back({p, {name, c.coefficient_name(i), "decimal shift", coef[i], c.coef[i]}});
    }
  }
  for (int k : shifts) {
    PropertyParams p = base;
    const double factor = std::pow(10.0, k);
    for (auto& v : p.by_name(name).coef) v *= factor;
    out.push_back({p, {name, "*", "scale", 1.0, factor}});
  }
  return out;
}

bool all_pass(const std::vector<OracleCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

}  // namespace

std::vector<OracleCheck> property_oracles(const PropertyParams& params,
                                          const std::string& correlation) {
  const Properties pr(params, RangePolicy::Strict);
  const auto hi = PressureRange::HighSide;
  const auto lo = PressureRange::LowSide;
  Checker ck{correlation, {}};

  if (correlation == "h_liquid_water") {
    // steam-table saturated liquid enthalpy, reference state at the triple point
    ck.near("h_l(10 C) vs 42.02 kJ/kg", [&] { return pr.h_liquid_water(kT0 + 10); }, 42.02e3, 0.01);
    ck.near("h_l(20 C) vs 83.91 kJ/kg", [&] { return pr.h_liquid_water(kT0 + 20); }, 83.91e3, 0.01);
    ck.near("h_l(60 C) vs 251.18 kJ/kg", [&] { return pr.h_liquid_water(kT0 + 60); }, 251.18e3,
            0.01);
  } else if (correlation == "h_vapor_water") {
    ck.near("h_v(10 C) vs 2519.2 kJ/kg", [&] { return pr.h_vapor_water(kT0 + 10); }, 2519.2e3,
            0.01);
    ck.near("h_v(40 C) vs 2573.5 kJ/kg", [&] { return pr.h_vapor_water(kT0 + 40); }, 2573.5e3,
            0.01);
  } else if (correlation == "p_sat_water_high") {
    ck.near("p_w(40 C) vs 7384 Pa", [&] { return pr.p_sat_water(kT0 + 40, hi); }, 7384.0, 0.02);
    ck.near("p_w(50 C) vs 12352 Pa", [&] { return pr.p_sat_water(kT0 + 50, hi); }, 12352.0, 0.02);
  } else if (correlation == "p_sat_water_low") {
    ck.near("p_w(10 C) vs 1228.1 Pa", [&] { return pr.p_sat_water(kT0 + 10, lo); }, 1228.1, 0.05);
    ck.near("p_w(15 C) vs 1705.8 Pa", [&] { return pr.p_sat_water(kT0 + 15, lo); }, 1705.8, 0.05);
    // the two pressure ranges must not overlap
    ck.below("max low-side p_w below min high-side p_w",
             [&] { return pr.p_sat_water(params.p_sat_water_low.T.hi, lo); },
             pr.p_sat_water(params.p_sat_water_high.T.lo, hi));
  } else if (correlation == "rho_liquid_water") {
    ck.near("rho_l(20 C) vs 998.2 kg/m3", [&] { return pr.rho_liquid_water(kT0 + 20); }, 998.2,
            0.01);
    ck.near("rho_l(40 C) vs 992.2 kg/m3", [&] { return pr.rho_liquid_water(kT0 + 40); }, 992.2,
            0.01);
    ck.near("rho_l(60 C) vs 983.2 kg/m3", [&] { return pr.rho_liquid_water(kT0 + 60); }, 983.2,
            0.01);
  } else if (correlation == "h_solution") {
    const auto& w = params.h_solution.xi;
    ck.within("c_p(xi_min) in 1800..2600 J/(kg K)", [&] { return pr.cp_solution(w.lo); }, 1800,
              2600);
    ck.within("c_p(xi_max) in 1800..2600 J/(kg K)", [&] { return pr.cp_solution(w.hi); }, 1800,
              2600);
  } else if (correlation == "p_sat_solution_high") {
    ck.within("p_sol(80 C, 0.55) in 9..10.5 kPa",
              [&] { return pr.p_sat_solution(kT0 + 80, 0.55, hi); }, 9.0e3, 10.5e3);
    ck.below("p_sol(50 C, 0.5) below p_w(50 C)",
             [&] { return pr.p_sat_solution(kT0 + 50, 0.5, hi); }, pr.p_sat_water(kT0 + 50, hi));
  } else if (correlation == "p_sat_solution_low") {
    ck.below("p_sol(20 C, 0.5) below p_w(20 C)",
             [&] { return pr.p_sat_solution(kT0 + 20, 0.5, lo); }, pr.p_sat_water(kT0 + 20, lo));
    ck.near("low/high continuity at 52.5 C, 0.55",
            [&] { return pr.p_sat_solution(kT0 + 52.5, 0.55, lo); },
            pr.p_sat_solution(kT0 + 52.5, 0.55, hi), 0.10);
    ck.below("declared pressure windows disjoint",
             [&] { return params.p_sat_solution_low.p.hi; }, params.p_sat_solution_high.p.lo);
  } else if (correlation == "rho_solution") {
    ck.near("rho_sol(20 C, 0.5) vs 1540 kg/m3", [&] { return pr.rho_solution(kT0 + 20, 0.5); },
            1540.0, 0.03);
    ck.below("d rho_sol / dT < 0",
             [&] { return pr.rho_solution(kT0 + 60, 0.5) - pr.rho_solution(kT0 + 40, 0.5); }, 0.0);
    ck.below("-d rho_sol / d xi < 0",
             [&] { return pr.rho_solution(kT0 + 40, 0.45) - pr.rho_solution(kT0 + 40, 0.6); }, 0.0);
  } else {
    throw std::invalid_argument("no oracles for correlation " + correlation);
  }
  return ck.out;
}

ValidationResult validate_property_params(const PropertyParams& params) {
  ValidationResult result;
  result.params = params;

  for (const auto& name : validation_order()) {
    if (all_pass(property_oracles(result.params, name))) continue;
    bool repaired = false;
    for (auto& [candidate, correction] : candidates(result.params, name)) {
      if (all_pass(property_oracles(candidate, name))) {
        result.params = std::move(candidate);
        result.corrections.push_back(correction);
        repaired = true;
        break;
      }
    }
    if (!repaired) result.unresolved.push_back(name);
  }

  for (const auto& name : validation_order()) {
    auto checks = property_oracles(result.params, name);
    result.checks.insert(result.checks.end(), checks.begin(), checks.end());
  }
  return result;
}

std::string provenance_report(const ValidationResult& result) {
  std::ostringstream os;
  os.precision(6);
  os << "# Property parameter provenance\n\n";
  os << "## Corrections adopted\n\n";
  if (result.corrections.empty()) os << "none\n";
  for (const auto& c : result.corrections) {
    os << "- " << c.correlation << " " << c.coefficient << ": " << c.kind << ", ";
    if (c.coefficient == "*") {
      os << "all coefficients multiplied by " << c.adopted << "\n";
    } else {
      os << "tabulated " << c.tabulated << " -> adopted " << c.adopted << "\n";
    }
  }
  if (!result.unresolved.empty()) {
    os << "\n## Unresolved\n\n";
    for (const auto& n : result.unresolved) os << "- " << n << "\n";
  }
  os << "\n## Coefficients in use\n\n";
  for (const auto* c : result.params.correlations()) {
    os << c->name << ":";
    for (std::size_t i = 0; i < c->coef.size(); ++i) {
      os << " " << c->coefficient_name(i) << "=" << c->coef[i];
    }
    os << "\n";
  }
  os << "\n## Oracle checks\n\n";
  for (const auto& c : result.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.correlation << ": " << c.description
       << " (computed " << c.computed << ")\n";
  }
  return os.str();
}

}  // namespace ahpd
