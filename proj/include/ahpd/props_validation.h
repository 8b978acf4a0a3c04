#pragma once

#include <string>
#include <vector>

#include "ahpd/props.h"

namespace ahpd {

/// One reference-value or physical-plausibility check of a correlation.
struct OracleCheck {
  std::string correlation;
  std::string description;
  double computed = 0.0;
  double expected = 0.0;     // reference value, or bound for one-sided checks
  double tolerance = 0.0;    // relative; 0 for pure inequality checks
  bool passed = false;
};

/// A coefficient change adopted by the validation pass.
struct Correction {
  std::string correlation;
  std::string coefficient;   // "A1", ..., or "*" for a whole-correlation rescale
  std::string kind;          // "sign", "decimal shift" or "scale"
  double tabulated = 0.0;
  double adopted = 0.0;      // for "*" this is the factor applied
};

struct ValidationResult {
  PropertyParams params;
  std::vector<Correction> corrections;
  std::vector<OracleCheck> checks;       // final checks on the adopted set
  std::vector<std::string> unresolved;   // correlations no candidate could repair

  bool ok() const { return unresolved.empty(); }
};

/// Oracle checks for one correlation evaluated with the given parameter set.
std::vector<OracleCheck> property_oracles(const PropertyParams& params,
                                          const std::string& correlation);

/// Runs every oracle on `params` and repairs failing correlations by the first
/// candidate (sign flip, decimal shift of one coefficient, rescale of the
/// whole correlation) that passes all of its oracles.
ValidationResult validate_property_params(const PropertyParams& params);

/// Human-readable provenance report of a validation run.
std::string provenance_report(const ValidationResult& result);

}  // namespace ahpd
