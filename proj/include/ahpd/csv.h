#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahpd/transient.h"

namespace ahpd {

/// Measured (or simulated) boundary signals in SI units.
struct MeasurementSeries {
  std::vector<double> t;
  std::map<std::string, std::vector<double>> channels;

  /// The 7 input and 6 output channel names.
  static const std::vector<std::string>& channel_names();
  const std::vector<double>& at(const std::string& name) const;
};

/// A required column is missing or a header cell is malformed.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& what, std::string column)
      : std::runtime_error(what), column_(std::move(column)) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

/// Unit a channel is written in (degC, kg_h, L_h or kW).
std::string display_unit(const std::string& channel);

MeasurementSeries to_series(const Trajectory& tr);

/// Columns `time__s` and `<channel>__<unit>`, comma separated, LF endings,
/// 17 significant digits.
void write_series_csv(const std::string& path, const MeasurementSeries& s);

/// Reads a series written by write_series_csv or an equivalent measurement
/// file; columns may appear in any order and in any supported unit.
MeasurementSeries read_measurements(const std::string& path);

/// State trajectory with SI columns (kg, J).
void write_states_csv(const std::string& path, const Trajectory& tr);

/// Generic writer for a header and rows of numbers or text cells.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

/// Formats with 17 significant digits.
std::string format_number(double v);

}  // namespace ahpd
