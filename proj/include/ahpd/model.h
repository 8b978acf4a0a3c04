#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ahpd/props.h"

namespace ahpd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Variant { BaseA, V1, V2 };

/// Parses "base-a", "v1" or "v2".
Variant parse_variant(std::string_view key);
const char* to_string(Variant v);

/// Model inconsistency that no solver setting can repair (for example a
/// superheated inlet to the refrigerant expansion valve).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a parameterization produces a nonphysical coefficient.
class ParameterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputVector {
  static constexpr int size = 7;

  double T_W_G_in = 0.0;    // K
  double mdot_W_G = 0.0;    // kg/s
  double T_W_AC_in = 0.0;   // K
  double mdot_W_AC = 0.0;   // kg/s
  double T_W_E_in = 0.0;    // K
  double mdot_W_E = 0.0;    // kg/s
  double Vdot_RSo = 0.0;    // m3/s

  Vec to_vec() const;
  static InputVector from_vec(const Vec& v);
  static const std::array<std::string, size>& names();

  /// Reference operating point: 80/29/14 C inlets, 1200/6200/2200 kg/h, 450 L/h.
  static InputVector reference();
};

struct StateVector {
  static constexpr int size = 9;

  double m_PSo_G = 0.0;     // kg
  double m_LiBr_G = 0.0;    // kg
  double H_PSo_G = 0.0;     // J
  double H_Ref_C = 0.0;     // J
  double m_RSo_A = 0.0;     // kg
  double H_RSo_A = 0.0;     // J
  double H_Ref_E = 0.0;     // J
  double H_RSo_SHX = 0.0;   // J
  double H_PSo_SHX = 0.0;   // J

  Vec to_vec() const;
  static StateVector from_vec(const Vec& v);
  static const std::array<std::string, size>& names();
};

/// Algebraic unknowns. Quantities that are explicit functions of these
/// (UA values, effectivenesses, the valve flow, the REV outlet temperature)
/// are not unknowns; see Model::Derived.
struct AlgebraicVector {
  double p_high = 0.0, p_low = 0.0;
  // generator
  double T_PSo_HX_G_out = 0.0, xi_PSo_HX_G_out = 0.0, mdot_PSo_HX_G_out = 0.0;
  double mdot_Ref_GRh = 0.0, Qdot_G = 0.0, T_W_G_out = 0.0;
  // condenser
  double T_Ref_HX_C_out = 0.0, Qdot_C = 0.0, T_W_C_out = 0.0;
  // refrigerant expansion valve
  double mdot_v_Ref_E_in = 0.0, mdot_l_Ref_E_in = 0.0;
  // evaporator
  double T_Ref_HX_E_out = 0.0, mdot_v_Ref_HX_E_out = 0.0, mdot_l_Ref_HX_E_out = 0.0;
  double Qdot_E = 0.0, T_W_E_out = 0.0, T_Ref_rec = 0.0;
  // absorber
  double T_RSo_HX_A_out_sat = 0.0, T_RSo_HX_A_out = 0.0, xi_RSo_HX_A_out = 0.0;
  double mdot_RSo_HX_A_out = 0.0, Qdot_A = 0.0, T_W_A_out = 0.0;
  // low-pressure gas room
  double mdot_Ref_GRl = 0.0, h_Ref_GRl = 0.0;
  // closures
  double m_LiBr_A = 0.0, m_Ref_E = 0.0;
  // solution heat exchanger, TTD form (base-a, v1)
  double TTD_h = 0.0, TTD_c = 0.0, T_RSo_SHX_out_ss = 0.0, T_PSo_SHX_out_ss = 0.0;
  // solution heat exchanger, constant-UA form (v2)
  double Qdot_SHX = 0.0, T_RSo_SHX_out = 0.0, T_PSo_SHX_out = 0.0;

  static int size(Variant v);
  Vec pack(Variant v) const;
  static AlgebraicVector unpack(Variant v, const Vec& z);
  static std::vector<std::string> names(Variant v);
};

struct OutputVector {
  static constexpr int size = 6;

  double T_W_G_out = 0.0, T_W_AC_out = 0.0, T_W_E_out = 0.0;   // K
  double Qdot_G = 0.0, Qdot_AC = 0.0, Qdot_E = 0.0;             // W

  Vec to_vec() const;
  static OutputVector from_vec(const Vec& v);
  static const std::array<std::string, size>& names();
};

struct ModelParams {
  std::array<double, 4> K_G{252.3, 723.8, 5003.0, 1.642e5};
  std::array<double, 2> K_C{0.8836, 0.1034};
  std::array<double, 2> K_E{1.046, 0.1964};
  std::array<double, 4> K_A{1673.0, 248.3, 1812.0, 6.038e4};
  std::array<double, 3> K_h{1.109e-2, 7.704e-4, 4.409e-4};
  std::array<double, 3> K_c{7.319e-2, 2.637e-4, 4.150e-4};
  double K_SEV = 2.579e-2;   // 1/s

  // constant UA values of the benchmark variants, W/K
  double UA_G_const = 2.594e3;
  double UA_C_const = 1.731e3;
  double UA_E_const = 4.337e3;
  double UA_A_const = 7.759e3;
  double UA_SHX_const = 2.803e3;

  // stored masses, kg
  double m_LiBr_sumps = 15.98;
  double m_total_sumps = 49.36;
  double m_Ref_C = 4.15;
  double m_RSo_SHX = 5.32;
  double m_PSo_SHX = 5.32;

  double phi_sub = 0.08;
  double mdot_Ref_rec = 0.2;   // kg/s

  Variant variant = Variant::BaseA;

  /// Throws ParameterError on nonpositive masses or phi_sub outside [0, 0.2].
  void validate() const;
};

struct HxCoefficients {
  double UA_G = 0.0;    // W/K
  double UA_A = 0.0;    // W/K
  double eps_C = 0.0;
  double eps_E = 0.0;
};

/// Heat-exchanger coefficients of the selected variant. In the benchmark
/// variants UA_G and UA_A are the fitted constants and the effectivenesses
/// are unused (reported as 0). Throws ParameterError if a coefficient used by
/// the variant is not positive.
HxCoefficients hx_coefficients(const ModelParams& p, const InputVector& u, double mdot_RSo,
                               double mdot_PSo, double mdot_Ref_GRh, double mdot_Ref_GRl);

/// Poor-solution flow through the solution expansion valve, kg/s.
double sev_flow(const StateVector& x, const ModelParams& p);

struct ShxFactors {
  double f_h = 0.0;
  double f_c = 0.0;
};

/// Hot- and cold-end TTD factors from the heat capacity flows (W/K).
ShxFactors shx_factors(const ModelParams& p, double mcp_RSo, double mcp_PSo);

struct RevSplit {
  double mdot_v = 0.0;
  double mdot_l = 0.0;
  double T = 0.0;
};

/// Isenthalpic flash of condensate to the low pressure. A subcooled inlet
/// gives an all-liquid outlet; an inlet above vapor saturation throws ModelError.
RevSplit rev_split(const Properties& props, double h_in, double mdot_in, double p_low);

struct Residuals {
  Vec f;   // dx/dt in SI units
  Vec g;   // algebraic residuals in SI units (row scale: Model::g_scale)
};

/// Residual form of the dynamic plant.
///
/// All evaluations are pure. Properties are evaluated under the
/// extrapolating policy so that Newton iterates may leave the fitted windows;
/// envelope() reports window violations at a given point.
class Model {
 public:
  /// Quantities computed explicitly from (x, z, u).
  struct Derived {
    double xi_G = 0.0, T_PSo_G = 0.0;
    double xi_A = 0.0, T_RSo_A = 0.0;
    double mdot_RSo = 0.0, mdot_PSo = 0.0;
    double T_RSo_SHX_out = 0.0, T_PSo_SHX_out = 0.0;
    double T_Ref_E_in = 0.0;
    HxCoefficients hx;
  };

  struct Envelope {
    bool xi_ok = true;                    // hard requirement
    std::vector<std::string> warnings;    // property windows left
  };

  explicit Model(ModelParams params = {});
  Model(ModelParams params, const PropertyParams& property_params);

  const ModelParams& params() const { return params_; }
  const Properties& props() const { return props_; }
  Variant variant() const { return params_.variant; }

  int nx() const { return StateVector::size; }
  int nz() const { return AlgebraicVector::size(params_.variant); }
  int nu() const { return InputVector::size; }
  int ny() const { return OutputVector::size; }

  Derived derived(const StateVector& x, const AlgebraicVector& z, const InputVector& u) const;

  Vec generator_relations(const StateVector& x, const AlgebraicVector& z,
                          const InputVector& u) const;
  Vec condenser_relations(const StateVector& x, const AlgebraicVector& z,
                          const InputVector& u) const;
  Vec rev_relations(const StateVector& x, const AlgebraicVector& z, const InputVector& u) const;
  Vec evaporator_relations(const StateVector& x, const AlgebraicVector& z,
                           const InputVector& u) const;
  Vec absorber_relations(const StateVector& x, const AlgebraicVector& z,
                         const InputVector& u) const;
  Vec gas_room_relations(const AlgebraicVector& z) const;
  Vec shx_relations(const StateVector& x, const AlgebraicVector& z, const InputVector& u) const;
  Vec closure_relations(const StateVector& x, const AlgebraicVector& z) const;
  Vec sump_derivatives(const StateVector& x, const AlgebraicVector& z,
                       const InputVector& u) const;

  /// f and g in deterministic order: generator, condenser, REV, evaporator,
  /// absorber, gas room, closures, SHX.
  Residuals residuals(const Vec& x, const Vec& z, const Vec& u) const;

  /// Residuals whose zero is a steady state. Equal to (f, g) except for v2,
  /// whose frozen SHX storage rows are replaced by H - m h(T_out, xi).
  Vec steady_residuals(const Vec& x, const Vec& z, const Vec& u) const;

  OutputVector outputs(const AlgebraicVector& z) const;
  Vec output_map(const Vec& z) const;
  /// y = output_selection() * z.
  Mat output_selection() const;

  // Row/variable scales: residual_scaled = residual / scale.
  Vec x_scale() const;
  Vec z_scale() const;
  Vec f_scale() const;
  Vec g_scale() const;

  Envelope envelope(const Vec& x, const Vec& z, const Vec& u) const;

 private:
  ModelParams params_;
  Properties props_;
};

}  // namespace ahpd
