#pragma once

#include <string>

#include "ahpd/model.h"
#include "ahpd/newton.h"
#include "ahpd/props.h"

namespace ahpd {

// JSON parameter files. Keys missing from a file keep their default value;
// unknown keys are an error.

/// {"h_solution": {"T": [lo, hi], "xi": [lo, hi], "p": [lo, hi],
///                 "coefficients": {"A1": ..., ...}}, ...}
PropertyParams load_property_params(const std::string& path,
                                    const PropertyParams& base = PropertyParams::defaults());
std::string dump_property_params(const PropertyParams& p);

/// {"K_G": [4 values], ..., "m_total_sumps": 49.36, "variant": "base-a"}
ModelParams load_model_params(const std::string& path, const ModelParams& base = {});
std::string dump_model_params(const ModelParams& p);

/// {"residual_tol": 1e-8, "max_iterations": 60, ...}
SolverOptions load_solver_options(const std::string& path, const SolverOptions& base = {});

}  // namespace ahpd
