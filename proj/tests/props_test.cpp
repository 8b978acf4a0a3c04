#include <cmath>

#include <gtest/gtest.h>

#include "ahpd/props.h"

using namespace ahpd;

namespace {

// Direct evaluations of the tabulated formulas, independent of the library.
double h_sol_oracle(double T, double xi) {
  return -689200.0 - 700100.0 * xi + 1738000.0 * xi * xi + 3617.0 * T - 2827.0 * xi * T;
}

double p_sol_high_oracle(double T, double xi) {
  return std::exp(-6.804 + 7.405 * xi - 14.83 * xi * xi + 0.04647 * T);
}

const Properties& strict() {
  static const Properties p;
  return p;
}

}  // namespace

TEST(SolutionEnthalpy, ReferencePoint) {
  // the tabulated formula evaluates to +35.09 kJ/kg at 20 C, 45 %
  EXPECT_NEAR(strict().h_solution(293.15, 0.45), h_sol_oracle(293.15, 0.45), 1e-6);
  EXPECT_NEAR(strict().h_solution(293.15, 0.45), 35092.8, 0.1);
  EXPECT_NEAR(strict().h_solution(340.0, 0.58), h_sol_oracle(340.0, 0.58), 1e-6);
}

TEST(SolutionEnthalpy, HeatCapacity) {
  EXPECT_DOUBLE_EQ(strict().cp_solution(0.5), 2203.5);
  EXPECT_NEAR(strict().with_policy(RangePolicy::Extrapolate).cp_solution(0.0), 3617.0, 1e-9);
}

TEST(SolutionEnthalpy, HeatCapacityMatchesDifference) {
  const double d = 0.01;
  for (double xi : {0.45, 0.5, 0.55, 0.6}) {
    for (double T : {300.0, 330.0, 360.0}) {
      const double fd =
          (strict().h_solution(T + d, xi) - strict().h_solution(T - d, xi)) / (2 * d);
      EXPECT_NEAR(fd / strict().cp_solution(xi), 1.0, 1e-6) << T << " " << xi;
    }
  }
}

TEST(SolutionEnthalpy, Inverse) {
  EXPECT_NEAR(strict().t_from_h_solution(h_sol_oracle(293.15, 0.45), 0.45), 293.15, 1e-9);
  for (double xi : {0.46, 0.52, 0.59}) {
    for (double T : {295.0, 320.0, 355.0}) {
      EXPECT_NEAR(strict().t_from_h_solution(strict().h_solution(T, xi), xi), T, 1e-9);
    }
  }
}

TEST(SolutionEnthalpy, CompositionOutsideWindow) {
  EXPECT_THROW(strict().h_solution(293.15, 0.44), PropertyRangeError);
  EXPECT_THROW(strict().t_from_h_solution(0.0, 0.61), PropertyRangeError);
  try {
    strict().h_solution(293.15, 0.44);
  } catch (const PropertyRangeError& e) {
    EXPECT_EQ(e.coordinate(), "xi");
    EXPECT_DOUBLE_EQ(e.value(), 0.44);
    EXPECT_DOUBLE_EQ(e.window().lo, 0.45);
  }
}

TEST(SolutionEnthalpy, LenientPolicies) {
  RangeLog log;
  const Properties clamp = strict().with_policy(RangePolicy::Clamp, &log);
  EXPECT_DOUBLE_EQ(clamp.h_solution(293.15, 0.44), strict().h_solution(293.15, 0.45));
  EXPECT_EQ(log.count, 1);

  log.clear();
  const Properties extra = strict().with_policy(RangePolicy::Extrapolate, &log);
  EXPECT_NEAR(extra.h_solution(293.15, 0.44), h_sol_oracle(293.15, 0.44), 1e-6);
  EXPECT_EQ(log.count, 1);
  EXPECT_FALSE(log.messages.empty());
}

TEST(WaterEnthalpy, Liquid) {
  EXPECT_NEAR(strict().h_liquid_water(283.15), 42266.0, 1.0);
  EXPECT_NEAR(strict().h_liquid_water(293.15), 84126.0, 1.0);
  EXPECT_NEAR(strict().h_liquid_water(283.15), 42.1e3, 0.01 * 42.1e3);   // steam table, 10 C
  for (double T : {280.0, 300.0, 330.0}) {
    EXPECT_NEAR(strict().t_from_h_liquid_water(strict().h_liquid_water(T)), T, 1e-10);
  }
}

TEST(WaterEnthalpy, Vapor) {
  EXPECT_NEAR(strict().h_vapor_water(283.15), 2.5195e6, 100.0);
  EXPECT_NEAR(strict().h_vapor_water(313.15), 2.5736e6, 100.0);
  EXPECT_NEAR(strict().h_vapor_water(283.15), 2519e3, 0.005 * 2519e3);  // steam table, 10 C
  EXPECT_GT(strict().h_vapor_water(300.0), strict().h_liquid_water(300.0));
}

TEST(SolutionSaturation, HighSide) {
  const double p = strict().p_sat_solution(353.15, 0.55, PressureRange::HighSide);
  EXPECT_NEAR(p, p_sol_high_oracle(353.15, 0.55), 1e-9 * p);
  EXPECT_NEAR(p, 9.87e3, 0.005 * 9.87e3);
  EXPECT_GT(p, 9e3);   // equilibrium chart range
  EXPECT_LT(p, 10e3);
  EXPECT_NEAR(strict().t_sat_solution(9.87e3, 0.55, PressureRange::HighSide), 353.15, 0.1);
}

TEST(SolutionSaturation, RoundTrips) {
  const std::pair<PressureRange, double> cases[] = {
      {PressureRange::HighSide, 350.0}, {PressureRange::LowSide, 310.0}};
  for (const auto& [range, T] : cases) {
    for (double xi : {0.5, 0.55, 0.58}) {
      const double p = strict().p_sat_solution(T, xi, range);
      EXPECT_NEAR(strict().t_sat_solution(p, xi, range), T, 1e-9) << to_string(range);
    }
  }
}

TEST(SolutionSaturation, PressureRisesWithTemperatureAndFallsWithConcentration) {
  const auto r = PressureRange::HighSide;
  EXPECT_LT(strict().p_sat_solution(345.0, 0.55, r), strict().p_sat_solution(355.0, 0.55, r));
  EXPECT_GT(strict().p_sat_solution(350.0, 0.5, r), strict().p_sat_solution(350.0, 0.6, r));
}

TEST(SolutionSaturation, NonPositivePressure) {
  EXPECT_THROW(strict().t_sat_solution(0.0, 0.55, PressureRange::HighSide), std::domain_error);
  EXPECT_THROW(strict().t_sat_solution(-1.0, 0.55, PressureRange::LowSide), std::domain_error);
  EXPECT_THROW(strict().t_sat_water(0.0, PressureRange::LowSide), std::domain_error);
}

TEST(WaterSaturation, SteamTable) {
  EXPECT_NEAR(strict().p_sat_water(313.15, PressureRange::HighSide), 7.33e3, 0.01e3);
  EXPECT_NEAR(strict().p_sat_water(313.15, PressureRange::HighSide), 7384.0, 0.02 * 7384.0);
  EXPECT_NEAR(strict().p_sat_water(283.15, PressureRange::LowSide), 1228.0, 0.05 * 1228.0);
  for (double T : {305.0, 315.0, 322.0}) {
    const double p = strict().p_sat_water(T, PressureRange::HighSide);
    EXPECT_NEAR(strict().t_sat_water(p, PressureRange::HighSide), T, 1e-9);
  }
}

TEST(Density, Solution) {
  const double rho = strict().rho_solution(293.15, 0.5);
  EXPECT_GT(rho, 1530.0);
  EXPECT_LT(rho, 1545.0);
  EXPECT_LT(strict().rho_solution(330.0, 0.5), rho);   // falls with temperature
}

TEST(Density, LiquidWater) {
  EXPECT_NEAR(strict().rho_liquid_water(293.15), 998.0, 2.0);
  double last = strict().rho_liquid_water(280.0);
  for (double T = 285.0; T <= 360.0; T += 5.0) {
    const double rho = strict().rho_liquid_water(T);
    EXPECT_LT(rho, last) << T;
    last = rho;
  }
  EXPECT_THROW(strict().rho_liquid_water(400.0), PropertyRangeError);
}

TEST(PropertyParams, NamedAccess) {
  PropertyParams p = PropertyParams::defaults();
  EXPECT_EQ(p.correlations().size(), 9u);
  EXPECT_EQ(p.by_name("h_solution").coefficient_name(0), "A1");
  EXPECT_THROW(p.by_name("nonsense"), std::invalid_argument);
}
