#include "ahpd/model.h"

#include <cmath>

namespace ahpd {

namespace {

constexpr double kW = 1e3;     // W -> kW, J/kg -> kJ/kg, J -> kJ
constexpr double kGs = 1e-3;   // kg/s -> g/s

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double d : values) v[i++] = d;
  return v;
}

}  // namespace

Variant parse_variant(std::string_view key) {
  if (key == "base-a") return Variant::BaseA;
  if (key == "v1") return Variant::V1;
  if (key == "v2") return Variant::V2;
  throw std::invalid_argument("unknown model variant '" + std::string(key) +
                              "' (expected base-a, v1 or v2)");
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::BaseA: return "base-a";
    case Variant::V1: return "v1";
    case Variant::V2: return "v2";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// vectors

Vec InputVector::to_vec() const {
  return make_vec({T_W_G_in, mdot_W_G, T_W_AC_in, mdot_W_AC, T_W_E_in, mdot_W_E, Vdot_RSo});
}

InputVector InputVector::from_vec(const Vec& v) {
  if (v.size() != size) throw std::invalid_argument("input vector must have 7 entries");
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

const std::array<std::string, InputVector::size>& InputVector::names() {
  static const std::array<std::string, size> n = {"T_W_G_in", "mdot_W_G", "T_W_AC_in",
                                                  "mdot_W_AC", "T_W_E_in", "mdot_W_E",
                                                  "Vdot_RSo"};
  return n;
}

InputVector InputVector::reference() {
  return {273.15 + 80.0, 1200.0 / 3600.0, 273.15 + 29.0, 6200.0 / 3600.0,
          273.15 + 14.0, 2200.0 / 3600.0, 450e-3 / 3600.0};
}

Vec StateVector::to_vec() const {
  return make_vec({m_PSo_G, m_LiBr_G, H_PSo_G, H_Ref_C, m_RSo_A, H_RSo_A, H_Ref_E, H_RSo_SHX,
                   H_PSo_SHX});
}

StateVector StateVector::from_vec(const Vec& v) {
  if (v.size() != size) throw std::invalid_argument("state vector must have 9 entries");
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

const std::array<std::string, StateVector::size>& StateVector::names() {
  static const std::array<std::string, size> n = {"m_PSo_G", "m_LiBr_G",  "H_PSo_G",
                                                  "H_Ref_C", "m_RSo_A",   "H_RSo_A",
                                                  "H_Ref_E", "H_RSo_SHX", "H_PSo_SHX"};
  return n;
}

int AlgebraicVector::size(Variant v) { return v == Variant::V2 ? 32 : 33; }

namespace {

// Unknowns shared by every variant, in packing order.
template <class A>
auto common_fields(A& a) {
  return std::array{&a.p_high, &a.p_low, &a.T_PSo_HX_G_out, &a.xi_PSo_HX_G_out,
                    &a.mdot_PSo_HX_G_out, &a.mdot_Ref_GRh, &a.Qdot_G, &a.T_W_G_out,
                    &a.T_Ref_HX_C_out, &a.Qdot_C, &a.T_W_C_out, &a.mdot_v_Ref_E_in,
                    &a.mdot_l_Ref_E_in, &a.T_Ref_HX_E_out, &a.mdot_v_Ref_HX_E_out,
                    &a.mdot_l_Ref_HX_E_out, &a.Qdot_E, &a.T_W_E_out, &a.T_Ref_rec,
                    &a.T_RSo_HX_A_out_sat, &a.T_RSo_HX_A_out, &a.xi_RSo_HX_A_out,
                    &a.mdot_RSo_HX_A_out, &a.Qdot_A, &a.T_W_A_out, &a.mdot_Ref_GRl,
                    &a.h_Ref_GRl, &a.m_LiBr_A, &a.m_Ref_E};
}

template <class A>
auto shx_fields(A& a, Variant v) {
  using P = decltype(&a.TTD_h);
  if (v == Variant::V2) return std::vector<P>{&a.Qdot_SHX, &a.T_RSo_SHX_out, &a.T_PSo_SHX_out};
  return std::vector<P>{&a.TTD_h, &a.TTD_c, &a.T_RSo_SHX_out_ss, &a.T_PSo_SHX_out_ss};
}

}  // namespace

Vec AlgebraicVector::pack(Variant v) const {
  Vec z(size(v));
  Eigen::Index i = 0;
  for (const double* f : common_fields(*this)) z[i++] = *f;
  for (const double* f : shx_fields(*this, v)) z[i++] = *f;
  return z;
}

AlgebraicVector AlgebraicVector::unpack(Variant v, const Vec& z) {
  if (z.size() != size(v)) {
    throw std::invalid_argument("algebraic vector has " + std::to_string(z.size()) +
                                " entries, variant " + to_string(v) + " needs " +
                                std::to_string(size(v)));
  }
  AlgebraicVector a;
  Eigen::Index i = 0;
  for (double* f : common_fields(a)) *f = z[i++];
  for (double* f : shx_fields(a, v)) *f = z[i++];
  return a;
}

std::vector<std::string> AlgebraicVector::names(Variant v) {
  std::vector<std::string> n = {
      "p_high", "p_low", "T_PSo_HX_G_out", "xi_PSo_HX_G_out", "mdot_PSo_HX_G_out",
      "mdot_Ref_GRh", "Qdot_G", "T_W_G_out", "T_Ref_HX_C_out", "Qdot_C", "T_W_C_out",
      "mdot_v_Ref_E_in", "mdot_l_Ref_E_in", "T_Ref_HX_E_out", "mdot_v_Ref_HX_E_out",
      "mdot_l_Ref_HX_E_out", "Qdot_E", "T_W_E_out", "T_Ref_rec", "T_RSo_HX_A_out_sat",
      "T_RSo_HX_A_out", "xi_RSo_HX_A_out", "mdot_RSo_HX_A_out", "Qdot_A", "T_W_A_out",
      "mdot_Ref_GRl", "h_Ref_GRl", "m_LiBr_A", "m_Ref_E"};
  if (v == Variant::V2) {
    n.insert(n.end(), {"Qdot_SHX", "T_RSo_SHX_out", "T_PSo_SHX_out"});
  } else {
    n.insert(n.end(), {"TTD_h", "TTD_c", "T_RSo_SHX_out_ss", "T_PSo_SHX_out_ss"});
  }
  return n;
}

Vec OutputVector::to_vec() const {
  return make_vec({T_W_G_out, T_W_AC_out, T_W_E_out, Qdot_G, Qdot_AC, Qdot_E});
}

OutputVector OutputVector::from_vec(const Vec& v) {
  if (v.size() != size) throw std::invalid_argument("output vector must have 6 entries");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

const std::array<std::string, OutputVector::size>& OutputVector::names() {
  static const std::array<std::string, size> n = {"T_W_G_out", "T_W_AC_out", "T_W_E_out",
                                                  "Qdot_G",    "Qdot_AC",    "Qdot_E"};
  return n;
}

// ---------------------------------------------------------------------------
// parameters and standalone relations

void ModelParams::validate() const {
  const std::pair<const char*, double> masses[] = {
      {"m_LiBr_sumps", m_LiBr_sumps}, {"m_total_sumps", m_total_sumps}, {"m_Ref_C", m_Ref_C},
      {"m_RSo_SHX", m_RSo_SHX},       {"m_PSo_SHX", m_PSo_SHX}};
  for (const auto& [name, m] : masses) {
    if (!(m > 0.0)) throw ParameterError(std::string(name) + " must be positive");
  }
  if (!(phi_sub >= 0.0 && phi_sub <= 0.2)) {
    throw ParameterError("phi_sub must lie in [0, 0.2]");
  }
  if (!(mdot_Ref_rec > 0.0)) throw ParameterError("mdot_Ref_rec must be positive");
  if (!(K_SEV > 0.0)) throw ParameterError("K_SEV must be positive");
}

HxCoefficients hx_coefficients(const ModelParams& p, const InputVector& u, double mdot_RSo,
                               double mdot_PSo, double mdot_Ref_GRh, double mdot_Ref_GRl) {
  HxCoefficients c;
  if (p.variant == Variant::BaseA) {
    c.UA_G = p.K_G[0] + p.K_G[1] * u.mdot_W_G + p.K_G[2] * mdot_RSo + p.K_G[3] * mdot_Ref_GRh;
    c.UA_A = p.K_A[0] + p.K_A[1] * u.mdot_W_AC + p.K_A[2] * mdot_PSo + p.K_A[3] * mdot_Ref_GRl;
    c.eps_C = p.K_C[0] - p.K_C[1] * u.mdot_W_AC;
    c.eps_E = p.K_E[0] - p.K_E[1] * u.mdot_W_E;
    if (!(c.eps_C > 0.0)) throw ParameterError("condenser effectiveness not positive");
    if (!(c.eps_E > 0.0)) throw ParameterError("evaporator effectiveness not positive");
  } else {
    c.UA_G = p.UA_G_const;
    c.UA_A = p.UA_A_const;
  }
  if (!(c.UA_G > 0.0)) throw ParameterError("generator UA not positive");
  if (!(c.UA_A > 0.0)) throw ParameterError("absorber UA not positive");
  return c;
}

double sev_flow(const StateVector& x, const ModelParams& p) { return p.K_SEV * x.m_PSo_G; }

ShxFactors shx_factors(const ModelParams& p, double mcp_RSo, double mcp_PSo) {
  return {p.K_h[0] + p.K_h[1] * mcp_RSo - p.K_h[2] * mcp_PSo,
          p.K_c[0] - p.K_c[1] * mcp_RSo + p.K_c[2] * mcp_PSo};
}

RevSplit rev_split(const Properties& props, double h_in, double mdot_in, double p_low) {
  RevSplit s;
  s.T = props.t_sat_water(p_low, PressureRange::LowSide);
  const double hl = props.h_liquid_water(s.T);
  const double hv = props.h_vapor_water(s.T);
  if (h_in > hv * (1.0 + 1e-12)) {
    throw ModelError("refrigerant expansion valve inlet is above vapor saturation");
  }
  const double q = h_in <= hl ? 0.0 : (h_in - hl) / (hv - hl);
  s.mdot_v = q * mdot_in;
  s.mdot_l = mdot_in - s.mdot_v;
  return s;
}

// ---------------------------------------------------------------------------
// Model

Model::Model(ModelParams params) : Model(std::move(params), PropertyParams::defaults()) {}

Model::Model(ModelParams params, const PropertyParams& property_params)
    : params_(std::move(params)), props_(property_params, RangePolicy::Extrapolate) {
  params_.validate();
}

Model::Derived Model::derived(const StateVector& x, const AlgebraicVector& z,
                              const InputVector& u) const {
  const auto& p = params_;
  Derived d;
  d.xi_G = x.m_LiBr_G / x.m_PSo_G;
  d.T_PSo_G = props_.t_from_h_solution(x.H_PSo_G / x.m_PSo_G, d.xi_G);
  d.xi_A = z.m_LiBr_A / x.m_RSo_A;
  d.T_RSo_A = props_.t_from_h_solution(x.H_RSo_A / x.m_RSo_A, d.xi_A);
  d.mdot_RSo = props_.rho_solution(d.T_RSo_A, d.xi_A) * u.Vdot_RSo;
  d.mdot_PSo = sev_flow(x, p);
  if (p.variant == Variant::V2) {
    d.T_RSo_SHX_out = z.T_RSo_SHX_out;
    d.T_PSo_SHX_out = z.T_PSo_SHX_out;
  } else {
    d.T_RSo_SHX_out = props_.t_from_h_solution(x.H_RSo_SHX / p.m_RSo_SHX, d.xi_A);
    d.T_PSo_SHX_out = props_.t_from_h_solution(x.H_PSo_SHX / p.m_PSo_SHX, d.xi_G);
  }
  d.T_Ref_E_in = props_.t_sat_water(z.p_low, PressureRange::LowSide);
  d.hx = hx_coefficients(p, u, d.mdot_RSo, d.mdot_PSo, z.mdot_Ref_GRh, z.mdot_Ref_GRl);
  return d;
}

Vec Model::generator_relations(const StateVector& x, const AlgebraicVector& z,
                               const InputVector& u) const {
  const Derived d = derived(x, z, u);
  const auto& pr = props_;
  // the desorbed vapor leaves at the temperature of the entering rich solution
  const double T_vap = d.T_RSo_SHX_out;
  const double dT_mean =
      0.5 * (u.T_W_G_in + z.T_W_G_out) - 0.5 * (d.T_RSo_SHX_out + z.T_PSo_HX_G_out);
  return make_vec({
      z.Qdot_G - d.hx.UA_G * dT_mean,
      d.mdot_RSo - z.mdot_PSo_HX_G_out - z.mdot_Ref_GRh,
      d.mdot_RSo * d.xi_A - z.mdot_PSo_HX_G_out * z.xi_PSo_HX_G_out,
      d.mdot_RSo * pr.h_solution(d.T_RSo_SHX_out, d.xi_A) -
          z.mdot_PSo_HX_G_out * pr.h_solution(z.T_PSo_HX_G_out, z.xi_PSo_HX_G_out) -
          z.mdot_Ref_GRh * pr.h_vapor_water(T_vap) + z.Qdot_G,
      u.mdot_W_G * (pr.h_liquid_water(u.T_W_G_in) - pr.h_liquid_water(z.T_W_G_out)) - z.Qdot_G,
      std::log(z.p_high) -
          pr.ln_p_sat_solution(z.T_PSo_HX_G_out, z.xi_PSo_HX_G_out, PressureRange::HighSide),
  });
}

Vec Model::condenser_relations(const StateVector& x, const AlgebraicVector& z,
                               const InputVector& u) const {
  const Derived d = derived(x, z, u);
  const auto& pr = props_;
  double law;
  if (params_.variant == Variant::BaseA) {
    // cooling water enters the condenser at the absorber outlet temperature
    law = d.hx.eps_C * u.mdot_W_AC * pr.cp_liquid_water() * (z.T_Ref_HX_C_out - z.T_W_A_out);
  } else {
    law = params_.UA_C_const * (z.T_Ref_HX_C_out - 0.5 * (z.T_W_A_out + z.T_W_C_out));
  }
  return make_vec({
      std::log(z.p_high) - pr.ln_p_sat_water(z.T_Ref_HX_C_out, PressureRange::HighSide),
      z.Qdot_C - law,
      z.mdot_Ref_GRh *
              (pr.h_vapor_water(d.T_RSo_SHX_out) - pr.h_liquid_water(z.T_Ref_HX_C_out)) -
          z.Qdot_C,
      u.mdot_W_AC * (pr.h_liquid_water(z.T_W_A_out) - pr.h_liquid_water(z.T_W_C_out)) +
          z.Qdot_C,
  });
}

Vec Model::rev_relations(const StateVector& x, const AlgebraicVector& z,
                         const InputVector& u) const {
  const Derived d = derived(x, z, u);
  const double h_in = x.H_Ref_C / params_.m_Ref_C;
  return make_vec({
      z.mdot_v_Ref_E_in + z.mdot_l_Ref_E_in - z.mdot_Ref_GRh,
      z.mdot_v_Ref_E_in * props_.h_vapor_water(d.T_Ref_E_in) +
          z.mdot_l_Ref_E_in * props_.h_liquid_water(d.T_Ref_E_in) - z.mdot_Ref_GRh * h_in,
  });
}

Vec Model::evaporator_relations(const StateVector& x, const AlgebraicVector& z,
                                const InputVector& u) const {
  const Derived d = derived(x, z, u);
  const auto& pr = props_;
  const double rec = params_.mdot_Ref_rec;
  double law;
  if (params_.variant == Variant::BaseA) {
    law = d.hx.eps_E * u.mdot_W_E * pr.cp_liquid_water() * (u.T_W_E_in - z.T_Ref_rec);
  } else {
    law = params_.UA_E_const *
          (0.5 * (u.T_W_E_in + z.T_W_E_out) - 0.5 * (z.T_Ref_rec + z.T_Ref_HX_E_out));
  }
  return make_vec({
      std::log(z.p_low) - pr.ln_p_sat_water(z.T_Ref_HX_E_out, PressureRange::LowSide),
      z.Qdot_E - law,
      rec - z.mdot_l_Ref_HX_E_out - z.mdot_v_Ref_HX_E_out,
      rec * pr.h_liquid_water(z.T_Ref_rec) -
          z.mdot_l_Ref_HX_E_out * pr.h_liquid_water(z.T_Ref_HX_E_out) -
          z.mdot_v_Ref_HX_E_out * pr.h_vapor_water(z.T_Ref_HX_E_out) + z.Qdot_E,
      u.mdot_W_E * (pr.h_liquid_water(u.T_W_E_in) - pr.h_liquid_water(z.T_W_E_out)) - z.Qdot_E,
      // recirculated refrigerant leaves the sump at the sump temperature
      pr.h_liquid_water(z.T_Ref_rec) * z.m_Ref_E - x.H_Ref_E,
  });
}

Vec Model::absorber_relations(const StateVector& x, const AlgebraicVector& z,
                              const InputVector& u) const {
  const Derived d = derived(x, z, u);
  const auto& pr = props_;
  const double dT_mean =
      0.5 * (d.T_PSo_SHX_out + z.T_RSo_HX_A_out) - 0.5 * (u.T_W_AC_in + z.T_W_A_out);
  const double h_out = pr.h_solution(z.T_RSo_HX_A_out, z.xi_RSo_HX_A_out);
  return make_vec({
      z.Qdot_A - d.hx.UA_A * dT_mean,
      d.mdot_PSo - z.mdot_RSo_HX_A_out + z.mdot_Ref_GRl,
      d.mdot_PSo * d.xi_G - z.mdot_RSo_HX_A_out * z.xi_RSo_HX_A_out,
      d.mdot_PSo * pr.h_solution(d.T_PSo_SHX_out, d.xi_G) - z.mdot_RSo_HX_A_out * h_out +
          z.mdot_Ref_GRl * z.h_Ref_GRl - z.Qdot_A,
      u.mdot_W_AC * (pr.h_liquid_water(u.T_W_AC_in) - pr.h_liquid_water(z.T_W_A_out)) +
          z.Qdot_A,
      // subcooled outlet: a fraction of the absorber heat cools below saturation
      h_out - pr.h_solution(z.T_RSo_HX_A_out_sat, z.xi_RSo_HX_A_out) +
          params_.phi_sub * z.Qdot_A / z.mdot_RSo_HX_A_out,
      std::log(z.p_low) - pr.ln_p_sat_solution(z.T_RSo_HX_A_out_sat, z.xi_RSo_HX_A_out,
                                               PressureRange::LowSide),
  });
}

Vec Model::gas_room_relations(const AlgebraicVector& z) const {
  const double T_in = props_.t_sat_water(z.p_low, PressureRange::LowSide);
  const double h_rev = props_.h_vapor_water(T_in);
  const double h_hx = props_.h_vapor_water(z.T_Ref_HX_E_out);
  const double total = z.mdot_v_Ref_E_in + z.mdot_v_Ref_HX_E_out;
  const double h_mix = std::abs(total) > 1e-12
                           ? (z.mdot_v_Ref_E_in * h_rev + z.mdot_v_Ref_HX_E_out * h_hx) / total
                           : 0.5 * (h_rev + h_hx);
  return make_vec({z.mdot_Ref_GRl - total, z.h_Ref_GRl - h_mix});
}

Vec Model::shx_relations(const StateVector& x, const AlgebraicVector& z,
                         const InputVector& u) const {
  const Derived d = derived(x, z, u);
  const auto& pr = props_;
  if (params_.variant == Variant::V2) {
    const double dT_mean =
        0.5 * (d.T_PSo_G + z.T_PSo_SHX_out) - 0.5 * (d.T_RSo_A + z.T_RSo_SHX_out);
    return make_vec({
        z.Qdot_SHX - params_.UA_SHX_const * dT_mean,
        d.mdot_RSo * (pr.h_solution(d.T_RSo_A, d.xi_A) -
                      pr.h_solution(z.T_RSo_SHX_out, d.xi_A)) +
            z.Qdot_SHX,
        d.mdot_PSo * (pr.h_solution(d.T_PSo_G, d.xi_G) -
                      pr.h_solution(z.T_PSo_SHX_out, d.xi_G)) -
            z.Qdot_SHX,
    });
  }
  const double dT_in = d.T_PSo_G - d.T_RSo_A;
  const ShxFactors k = shx_factors(params_, d.mdot_RSo * pr.cp_solution(d.xi_A),
                                   d.mdot_PSo * pr.cp_solution(d.xi_G));
  return make_vec({
      z.TTD_h - k.f_h * dT_in,
      z.TTD_c - k.f_c * dT_in,
      z.T_RSo_SHX_out_ss - (d.T_PSo_G - z.TTD_h),
      z.T_PSo_SHX_out_ss - (d.T_RSo_A + z.TTD_c),
  });
}

Vec Model::closure_relations(const StateVector& x, const AlgebraicVector& z) const {
  const auto& p = params_;
  return make_vec({
      z.m_LiBr_A + x.m_LiBr_G - p.m_LiBr_sumps,
      z.m_Ref_E + p.m_Ref_C + x.m_RSo_A + x.m_PSo_G - p.m_total_sumps,
  });
}

Vec Model::sump_derivatives(const StateVector& x, const AlgebraicVector& z,
                            const InputVector& u) const {
  const Derived d = derived(x, z, u);
  const auto& pr = props_;
  const auto& p = params_;
  const double h_Go = pr.h_solution(z.T_PSo_HX_G_out, z.xi_PSo_HX_G_out);
  const double h_Ao = pr.h_solution(z.T_RSo_HX_A_out, z.xi_RSo_HX_A_out);
  const double h_E = pr.h_liquid_water(z.T_Ref_HX_E_out);
  Vec f(9);
  f[0] = z.mdot_PSo_HX_G_out - d.mdot_PSo;
  f[1] = z.mdot_PSo_HX_G_out * z.xi_PSo_HX_G_out - d.mdot_PSo * d.xi_G;
  f[2] = z.mdot_PSo_HX_G_out * h_Go - d.mdot_PSo * x.H_PSo_G / x.m_PSo_G;
  f[3] = z.mdot_Ref_GRh * (pr.h_liquid_water(z.T_Ref_HX_C_out) - x.H_Ref_C / p.m_Ref_C);
  f[4] = z.mdot_RSo_HX_A_out - d.mdot_RSo;
  f[5] = z.mdot_RSo_HX_A_out * h_Ao - d.mdot_RSo * x.H_RSo_A / x.m_RSo_A;
  f[6] = (z.mdot_l_Ref_E_in + z.mdot_l_Ref_HX_E_out) * h_E -
         p.mdot_Ref_rec * x.H_Ref_E / z.m_Ref_E;
  if (p.variant == Variant::V2) {
    f[7] = 0.0;
    f[8] = 0.0;
  } else {
    f[7] = d.mdot_RSo * (pr.h_solution(z.T_RSo_SHX_out_ss, d.xi_A) - x.H_RSo_SHX / p.m_RSo_SHX);
    f[8] = d.mdot_PSo * (pr.h_solution(z.T_PSo_SHX_out_ss, d.xi_G) - x.H_PSo_SHX / p.m_PSo_SHX);
  }
  return f;
}

Residuals Model::residuals(const Vec& xv, const Vec& zv, const Vec& uv) const {
  const StateVector x = StateVector::from_vec(xv);
  const AlgebraicVector z = AlgebraicVector::unpack(params_.variant, zv);
  const InputVector u = InputVector::from_vec(uv);
  Residuals r;
  r.f = sump_derivatives(x, z, u);
  const Vec blocks[] = {generator_relations(x, z, u),  condenser_relations(x, z, u),
                        rev_relations(x, z, u),        evaporator_relations(x, z, u),
                        absorber_relations(x, z, u),   gas_room_relations(z),
                        closure_relations(x, z),       shx_relations(x, z, u)};
  r.g.resize(nz());
  Eigen::Index i = 0;
  for (const Vec& b : blocks) {
    r.g.segment(i, b.size()) = b;
    i += b.size();
  }
  return r;
}

Vec Model::steady_residuals(const Vec& xv, const Vec& zv, const Vec& uv) const {
  Residuals r = residuals(xv, zv, uv);
  if (params_.variant == Variant::V2) {
    const Derived d =
        derived(StateVector::from_vec(xv), AlgebraicVector::unpack(Variant::V2, zv),
                InputVector::from_vec(uv));
    r.f[7] = xv[7] - params_.m_RSo_SHX * props_.h_solution(d.T_RSo_SHX_out, d.xi_A);
    r.f[8] = xv[8] - params_.m_PSo_SHX * props_.h_solution(d.T_PSo_SHX_out, d.xi_G);
  }
  Vec out(nx() + nz());
  out << r.f, r.g;
  return out;
}

OutputVector Model::outputs(const AlgebraicVector& z) const {
  return {z.T_W_G_out, z.T_W_C_out, z.T_W_E_out, z.Qdot_G, z.Qdot_A + z.Qdot_C, z.Qdot_E};
}

Vec Model::output_map(const Vec& z) const {
  return outputs(AlgebraicVector::unpack(params_.variant, z)).to_vec();
}

Mat Model::output_selection() const {
  Mat S = Mat::Zero(ny(), nz());
  S(0, 7) = 1.0;                 // T_W_G_out
  S(1, 10) = 1.0;                // T_W_C_out
  S(2, 17) = 1.0;                // T_W_E_out
  S(3, 6) = 1.0;                 // Qdot_G
  S(4, 9) = S(4, 23) = 1.0;      // Qdot_C + Qdot_A
  S(5, 16) = 1.0;                // Qdot_E
  return S;
}

Vec Model::x_scale() const { return make_vec({1, 1, kW, kW, 1, kW, kW, kW, kW}); }

Vec Model::z_scale() const {
  Vec s = make_vec({kW, kW,                                   // pressures in kPa
                    1, 1e-2, kGs, kGs, kW, 1,                 // generator
                    1, kW, 1,                                 // condenser
                    kGs, kGs,                                 // REV
                    1, kGs, kGs, kW, 1, 1,                    // evaporator
                    1, 1, 1e-2, kGs, kW, 1,                   // absorber
                    kGs, kW,                                  // gas room
                    1, 1});                                   // closures
  s.conservativeResize(nz());
  if (params_.variant == Variant::V2) {
    s.tail(3) << kW, 1, 1;
  } else {
    s.tail(4).setOnes();
  }
  return s;
}

Vec Model::f_scale() const { return make_vec({kGs, kGs, kW, kW, kGs, kW, kW, kW, kW}); }

Vec Model::g_scale() const {
  Vec s = make_vec({kW, kGs, kGs, kW, kW, 1,                  // generator
                    1, kW, kW, kW,                            // condenser
                    kGs, kW,                                  // REV
                    1, kW, kGs, kW, kW, kW,                   // evaporator
                    kW, kGs, kGs, kW, kW, kW, 1,              // absorber
                    kGs, kW,                                  // gas room
                    1, 1});                                   // closures
  s.conservativeResize(nz());
  if (params_.variant == Variant::V2) {
    s.tail(3).setConstant(kW);
  } else {
    s.tail(4).setOnes();
  }
  return s;
}

Model::Envelope Model::envelope(const Vec& x, const Vec& z, const Vec& u) const {
  RangeLog log;
  Model logged(*this);
  logged.props_ = props_.with_policy(RangePolicy::Extrapolate, &log);
  logged.residuals(x, z, u);

  Envelope e;
  e.warnings = log.messages;
  if (log.count > static_cast<int>(log.messages.size())) {
    e.warnings.push_back("... " + std::to_string(log.count) + " window events in total");
  }
  const Window xi = props_.params().h_solution.xi;
  const AlgebraicVector a = AlgebraicVector::unpack(params_.variant, z);
  const double fractions[] = {x[1] / x[0], a.m_LiBr_A / x[4], a.xi_PSo_HX_G_out,
                              a.xi_RSo_HX_A_out};
  for (double f : fractions) {
    if (!xi.contains(f)) e.xi_ok = false;
  }
  return e;
}

}  // namespace ahpd
