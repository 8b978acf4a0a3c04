#pragma once

#include <map>

#include "ahpd/solver.h"

namespace ahpd::test {

inline Model model_of(Variant v) {
  ModelParams p;
  p.variant = v;
  return Model(p);
}

inline Vec rop_inputs() { return InputVector::reference().to_vec(); }

/// Steady state at the reference point, solved once per variant.
inline const SteadyState& rop_state(Variant v) {
  static std::map<Variant, SteadyState> cache;
  auto it = cache.find(v);
  if (it == cache.end()) {
    it = cache.emplace(v, solve_steady_state(model_of(v), rop_inputs())).first;
  }
  return it->second;
}

inline double scaled_norm(const Model& m, const Vec& x, const Vec& z, const Vec& u) {
  const Residuals r = m.residuals(x, z, u);
  return std::max(r.f.cwiseQuotient(m.f_scale()).lpNorm<Eigen::Infinity>(),
                  r.g.cwiseQuotient(m.g_scale()).lpNorm<Eigen::Infinity>());
}

}  // namespace ahpd::test
