#include "ahpd/units.h"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace ahpd {

namespace {

const std::array<Unit, 18>& table() {
  static const std::array<Unit, 18> units = {{
      {"°C", Dimension::Temperature, 1.0, 273.15},
      {"degC", Dimension::Temperature, 1.0, 273.15},
      {"K", Dimension::Temperature, 1.0, 0.0},
      {"kg/h", Dimension::MassFlow, 1.0 / 3600.0, 0.0},
      {"kg/s", Dimension::MassFlow, 1.0, 0.0},
      {"m³/h", Dimension::VolumeFlow, 1.0 / 3600.0, 0.0},
      {"m3/h", Dimension::VolumeFlow, 1.0 / 3600.0, 0.0},
      {"L/h", Dimension::VolumeFlow, 1e-3 / 3600.0, 0.0},
      {"kW", Dimension::Power, 1e3, 0.0},
      {"W", Dimension::Power, 1.0, 0.0},
      {"s", Dimension::Time, 1.0, 0.0},
      {"min", Dimension::Time, 60.0, 0.0},
      {"L", Dimension::Volume, 1e-3, 0.0},
      {"m³", Dimension::Volume, 1.0, 0.0},
      {"m3", Dimension::Volume, 1.0, 0.0},
      {"kg", Dimension::Mass, 1.0, 0.0},
      {"kJ", Dimension::Energy, 1e3, 0.0},
      {"J", Dimension::Energy, 1.0, 0.0},
  }};
  return units;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::Temperature: return "temperature";
    case Dimension::MassFlow: return "mass flow";
    case Dimension::VolumeFlow: return "volume flow";
    case Dimension::Power: return "power";
    case Dimension::Time: return "time";
    case Dimension::Volume: return "volume";
    case Dimension::Mass: return "mass";
    case Dimension::Energy: return "energy";
  }
  return "?";
}

const Unit& unit(std::string_view symbol) {
  for (const auto& u : table()) {
    if (u.symbol == symbol) return u;
  }
  throw UnitError("unknown unit '" + std::string(symbol) + "'");
}

Quantity parse_quantity(std::string_view text) {
  const std::string_view s = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc()) throw UnitError("no number in quantity '" + std::string(text) + "'");
  const std::string_view rest = trim(std::string_view(end, s.data() + s.size() - end));
  if (rest.empty()) throw UnitError("quantity '" + std::string(text) + "' has no unit");
  const Unit& u = unit(rest);
  return {u.to_si(v), u.dim};
}

double parse_si(std::string_view text, Dimension expected) {
  const Quantity q = parse_quantity(text);
  if (q.dim != expected) {
    throw UnitError("quantity '" + std::string(text) + "' is a " + to_string(q.dim) +
                    ", expected a " + to_string(expected));
  }
  return q.value;
}

std::string csv_unit(const Unit& u) {
  if (u.symbol == "°C") return "degC";
  if (u.symbol == "m³/h") return "m3_h";
  if (u.symbol == "m³") return "m3";
  std::string out = u.symbol;
  for (char& c : out) {
    if (c == '/') c = '_';
  }
  return out;
}

const Unit& unit_from_csv(std::string_view token) {
  for (const auto& u : table()) {
    if (csv_unit(u) == token) return u;
  }
  throw UnitError("unknown unit suffix '" + std::string(token) + "'");
}

}  // namespace ahpd
