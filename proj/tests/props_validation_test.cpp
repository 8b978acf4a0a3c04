#include <algorithm>

#include <gtest/gtest.h>

#include "ahpd/props_validation.h"

using namespace ahpd;

namespace {

const Correction* find_correction(const ValidationResult& r, const std::string& correlation) {
  for (const auto& c : r.corrections) {
    if (c.correlation == correlation) return &c;
  }
  return nullptr;
}

}  // namespace

TEST(PropertyValidation, TabulatedSetNeedsThreeCorrections) {
  const ValidationResult r = validate_property_params(PropertyParams::tabulated());
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.corrections.size(), 3u);

  const Correction* e = find_correction(r, "p_sat_water_low");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->coefficient, "E2");
  EXPECT_EQ(e->kind, "decimal shift");
  EXPECT_NEAR(e->adopted, 6.599e-2, 1e-12);

  const Correction* rho = find_correction(r, "rho_solution");
  ASSERT_NE(rho, nullptr);
  EXPECT_EQ(rho->coefficient, "R4");
  EXPECT_EQ(rho->kind, "sign");
  EXPECT_LT(rho->adopted * rho->tabulated, 0.0);

  const Correction* rl = find_correction(r, "rho_liquid_water");
  ASSERT_NE(rl, nullptr);
  EXPECT_EQ(rl->kind, "scale");
  EXPECT_DOUBLE_EQ(rl->adopted, 1000.0);
}

TEST(PropertyValidation, EveryFinalCheckPasses) {
  const ValidationResult r = validate_property_params(PropertyParams::tabulated());
  ASSERT_FALSE(r.checks.empty());
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.correlation << ": " << c.description;
}

TEST(PropertyValidation, DefaultsAreTheValidatedSet) {
  const ValidationResult r = validate_property_params(PropertyParams::defaults());
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.corrections.empty());
  const PropertyParams repaired = validate_property_params(PropertyParams::tabulated()).params;
  for (std::size_t i = 0; i < repaired.correlations().size(); ++i) {
    EXPECT_EQ(repaired.correlations()[i]->coef, PropertyParams::defaults().correlations()[i]->coef)
        << repaired.correlations()[i]->name;
  }
}

TEST(PropertyValidation, TabulatedSetFailsItsOracles) {
  const auto checks = property_oracles(PropertyParams::tabulated(), "p_sat_water_low");
  EXPECT_TRUE(std::any_of(checks.begin(), checks.end(),
                          [](const OracleCheck& c) { return !c.passed; }));
}

TEST(PropertyValidation, UnrepairableCorrelationIsReported) {
  PropertyParams p = PropertyParams::defaults();
  p.by_name("h_vapor_water").coef = {1.0, 1.0};
  const ValidationResult r = validate_property_params(p);
  EXPECT_FALSE(r.ok());
  EXPECT_NE(std::find(r.unresolved.begin(), r.unresolved.end(), "h_vapor_water"),
            r.unresolved.end());
}

TEST(PropertyValidation, ReportListsCorrections) {
  const std::string text = provenance_report(validate_property_params(PropertyParams::tabulated()));
  EXPECT_NE(text.find("p_sat_water_low E2"), std::string::npos);
  EXPECT_NE(text.find("rho_solution R4"), std::string::npos);
  EXPECT_EQ(text.find("FAIL"), std::string::npos);
}

TEST(PropertyValidation, UnknownCorrelation) {
  EXPECT_THROW(property_oracles(PropertyParams::defaults(), "nonsense"), std::invalid_argument);
}
