#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ahpd {

enum class Dimension { Temperature, MassFlow, VolumeFlow, Power, Time, Volume, Mass, Energy };

const char* to_string(Dimension d);

class UnitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Quantity {
  double value = 0.0;   // SI: K, kg/s, m3/s, W, s, m3, kg, J
  Dimension dim = Dimension::Time;
};

/// Affine map from a unit to SI: si = scale * v + offset.
struct Unit {
  std::string symbol;
  Dimension dim;
  double scale;
  double offset;

  double to_si(double v) const { return scale * v + offset; }
  double from_si(double si) const { return (si - offset) / scale; }
};

/// Looks up a unit symbol. Accepted: °C, degC, K, kg/h, kg/s, m³/h, m3/h,
/// L/h, kW, W, s, min, L, m³, m3, kg, kJ, J. Throws UnitError otherwise.
const Unit& unit(std::string_view symbol);

/// Parses "80 °C", "1200 kg/h", "4.5 m³/h", ... Throws UnitError on a missing
/// or unknown unit.
Quantity parse_quantity(std::string_view text);

/// As parse_quantity, additionally requiring the given dimension.
double parse_si(std::string_view text, Dimension expected);

/// Column-name-safe spelling of a unit (degC, kg_h, m3_h, L_h, ...).
std::string csv_unit(const Unit& u);
/// Inverse of csv_unit.
const Unit& unit_from_csv(std::string_view token);

}  // namespace ahpd
