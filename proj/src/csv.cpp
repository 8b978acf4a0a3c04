#include "ahpd/csv.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ahpd/units.h"

namespace ahpd {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& MeasurementSeries::channel_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n(InputVector::names().begin(), InputVector::names().end());
    n.insert(n.end(), OutputVector::names().begin(), OutputVector::names().end());
    return n;
  }();
  return names;
}

const std::vector<double>& MeasurementSeries::at(const std::string& name) const {
  auto it = channels.find(name);
  if (it == channels.end()) throw SchemaError("series has no channel " + name, name);
  return it->second;
}

std::string display_unit(const std::string& channel) {
  if (channel.rfind("T_", 0) == 0) return "degC";
  if (channel.rfind("mdot_", 0) == 0) return "kg_h";
  if (channel.rfind("Vdot_", 0) == 0) return "L_h";
  if (channel.rfind("Qdot_", 0) == 0) return "kW";
  throw std::invalid_argument("no display unit for channel " + channel);
}

MeasurementSeries to_series(const Trajectory& tr) {
  MeasurementSeries s;
  s.t = tr.t;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    for (int i = 0; i < InputVector::size; ++i) {
      s.channels[InputVector::names()[i]].push_back(tr.u[k][i]);
    }
    for (int i = 0; i < OutputVector::size; ++i) {
      s.channels[OutputVector::names()[i]].push_back(tr.y[k][i]);
    }
  }
  return s;
}

void write_series_csv(const std::string& path, const MeasurementSeries& s) {
  std::vector<std::string> header = {"time__s"};
  std::vector<const Unit*> units;
  std::vector<const std::vector<double>*> cols;
  for (const auto& name : MeasurementSeries::channel_names()) {
    const std::string u = display_unit(name);
    header.push_back(name + "__" + u);
    units.push_back(&unit_from_csv(u));
    cols.push_back(&s.at(name));
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(s.t.size());
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    std::vector<std::string> row = {format_number(s.t[k])};
    for (std::size_t c = 0; c < cols.size(); ++c) {
      row.push_back(format_number(units[c]->from_si((*cols[c])[k])));
    }
    rows.push_back(std::move(row));
  }
  write_table_csv(path, header, rows);
}

MeasurementSeries read_measurements(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(path + ": empty file", "time__s");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);

  struct Column {
    std::string channel;
    const Unit* unit;
  };
  std::vector<Column> columns;
  int time_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto pos = header[c].rfind("__");
    if (pos == std::string::npos) {
      throw SchemaError(path + ": column '" + header[c] + "' has no unit suffix", header[c]);
    }
    const std::string name = header[c].substr(0, pos);
    const Unit* u = &unit_from_csv(header[c].substr(pos + 2));
    if (name == "time") {
      if (u->dim != Dimension::Time) throw SchemaError(path + ": time column unit", header[c]);
      time_col = static_cast<int>(c);
    }
    columns.push_back({name, u});
  }
  if (time_col < 0) throw SchemaError(path + ": missing column time__s", "time");
  for (const auto& name : MeasurementSeries::channel_names()) {
    bool found = false;
    for (const auto& col : columns) found = found || col.channel == name;
    if (!found) throw SchemaError(path + ": missing column " + name, name);
  }

  MeasurementSeries s;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != columns.size()) {
      throw SchemaError(path + ": row with " + std::to_string(cells.size()) + " cells", "");
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = columns[c].unit->to_si(std::stod(cells[c]));
      if (static_cast<int>(c) == time_col) {
        s.t.push_back(v);
      } else {
        s.channels[columns[c].channel].push_back(v);
      }
    }
  }
  for (std::size_t k = 1; k < s.t.size(); ++k) {
    if (!(s.t[k] > s.t[k - 1])) throw SchemaError(path + ": time not increasing", "time");
  }
  return s;
}

void write_states_csv(const std::string& path, const Trajectory& tr) {
  std::vector<std::string> header = {"time__s"};
  for (const auto& n : StateVector::names()) header.push_back(n + (n[0] == 'm' ? "__kg" : "__J"));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    std::vector<std::string> row = {format_number(tr.t[k])};
    for (Eigen::Index i = 0; i < tr.x[k].size(); ++i) row.push_back(format_number(tr.x[k][i]));
    rows.push_back(std::move(row));
  }
  write_table_csv(path, header, rows);
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_out(path);
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ahpd
