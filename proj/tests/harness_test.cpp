#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ahpd/harness.h"
#include "fixtures.h"

using namespace ahpd;

namespace {

const std::filesystem::path kScenarios = AHPD_SCENARIO_DIR;

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// A synthetic series: every channel ramps linearly with its own slope.
MeasurementSeries ramp_series(std::size_t n, double dt) {
  MeasurementSeries s;
  for (std::size_t k = 0; k < n; ++k) s.t.push_back(k * dt);
  double slope = 0.1;
  for (const auto& name : MeasurementSeries::channel_names()) {
    auto& c = s.channels[name];
    const double base = name[0] == 'T' ? 300.0 : name[0] == 'Q' ? 2e4 : 0.5;
    for (double t : s.t) c.push_back(base + slope * t);
    slope += 0.01;
  }
  return s;
}

CircuitGeometry uniform_geometry(double V) {
  return {{V, V}, {V, V}, {V, V}};
}

}  // namespace

TEST(DeadTime, ZeroVolumeIsIdentity) {
  const MeasurementSeries s = ramp_series(50, 1.0);
  const ShiftResult r =
      dead_time_shift(s, CircuitFlows::constant(50, 1e-4, 1e-3, 5e-4), uniform_geometry(0.0));
  EXPECT_EQ(r.truncated, 0);
  for (const auto& [name, c] : s.channels) EXPECT_EQ(r.series.at(name), c) << name;
}

TEST(DeadTime, DelayFromVolumeAndFlow) {
  // 2.2 L at 2.2 m3/h is 3.6 s
  const double q = 2.2 / 3600.0;
  const MeasurementSeries s = ramp_series(100, 0.5);
  CircuitGeometry g;
  g.G = {2.2e-3, 2.2e-3};
  const ShiftResult r = dead_time_shift(s, CircuitFlows::constant(100, q, q, q), g);
  const auto& in = s.at("T_W_G_in");
  const auto& out = s.at("T_W_G_out");
  const double slope_in = in[1] - in[0];
  const double slope_out = out[1] - out[0];
  for (std::size_t k = 10; k + 10 < s.t.size(); ++k) {
    EXPECT_NEAR(r.series.at("T_W_G_in")[k], in[k] - 3.6 / 0.5 * slope_in, 1e-9);
    EXPECT_NEAR(r.series.at("T_W_G_out")[k], out[k] + 3.6 / 0.5 * slope_out, 1e-9);
  }
  EXPECT_EQ(r.series.at("T_W_AC_in"), s.at("T_W_AC_in"));
  EXPECT_EQ(r.series.at("Qdot_G"), s.at("Qdot_G"));
  EXPECT_GT(r.truncated, 0);   // the edges are held
}

TEST(DeadTime, InverseUndoesForwardAwayFromEdges) {
  MeasurementSeries s = ramp_series(400, 1.0);
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    s.channels["T_W_AC_out"][k] = 303.0 + std::sin(0.01 * s.t[k]);   // smooth, nonlinear
  }
  const CircuitFlows f = CircuitFlows::constant(400, 5e-4, 1.7e-3, 6e-4);
  const CircuitGeometry g = {{1.5e-3, 2.2e-3}, {4e-3, 6e-3}, {2e-3, 3e-3}};
  const ShiftResult fwd = dead_time_shift(s, f, g, ShiftDirection::Forward);
  const ShiftResult back = dead_time_shift(fwd.series, f, g, ShiftDirection::Inverse);
  for (std::size_t k = 20; k + 20 < s.t.size(); ++k) {
    for (const char* c : {"T_W_G_in", "T_W_G_out", "T_W_E_in"}) {
      EXPECT_NEAR(back.series.at(c)[k], s.at(c)[k], 1e-9) << c << " " << k;
    }
    EXPECT_NEAR(back.series.at("T_W_AC_out")[k], s.at("T_W_AC_out")[k], 1e-4);
  }
}

TEST(DeadTime, CommutesWithUnitConversion) {
  // shifting in kelvin and then converting equals converting and then shifting
  const MeasurementSeries s = ramp_series(60, 1.0);
  const CircuitFlows f = CircuitFlows::constant(60, 3e-4, 1e-3, 5e-4);
  const CircuitGeometry g = uniform_geometry(1e-3);
  MeasurementSeries celsius = s;
  for (auto& [name, c] : celsius.channels) {
    if (name[0] == 'T') {
      for (double& v : c) v = unit("°C").from_si(v);
    }
  }
  const ShiftResult a = dead_time_shift(s, f, g);
  const ShiftResult b = dead_time_shift(celsius, f, g);
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    EXPECT_NEAR(unit("°C").from_si(a.series.at("T_W_E_out")[k]), b.series.at("T_W_E_out")[k],
                1e-9);
  }
}

TEST(DeadTime, RejectsBadFlows) {
  const MeasurementSeries s = ramp_series(10, 1.0);
  EXPECT_THROW(dead_time_shift(s, CircuitFlows::constant(9, 1, 1, 1), uniform_geometry(0.0)),
               std::invalid_argument);
  EXPECT_THROW(dead_time_shift(s, CircuitFlows::constant(10, 0, 1, 1), uniform_geometry(1e-3)),
               std::invalid_argument);
}

TEST(RaeQ, Examples) {
  EXPECT_EQ(rae_q({21.3, 34.9, 14.5}, {21.3, 34.9, 14.5}), 0.0);
  const double oracle = (0.3 / 21.3 + 0.9 / 34.9 + 0.5 / 14.5) / 3.0;
  EXPECT_NEAR(rae_q({21.0, 34.0, 14.0}, {21.3, 34.9, 14.5}), oracle, 1e-15);
  EXPECT_NEAR(oracle, 0.0248, 1e-4);
  EXPECT_NEAR(rae_q({20.7, 33.1, 13.5}, {21.3, 34.9, 14.5}),
              2.0 * rae_q({21.0, 34.0, 14.0}, {21.3, 34.9, 14.5}), 1e-12);
  EXPECT_THROW(rae_q({1, 1, 1}, {1, 0, 1}), MetricError);
}

TEST(StepMetrics, FirstOrderResponse) {
  // y = 1 - exp(-(t - 10) / 100) after a step at t = 10
  std::vector<double> t, y;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(k);
    y.push_back(k <= 10 ? 0.0 : 1.0 - std::exp(-(k - 10) / 100.0));
  }
  const double exact = -100.0 * std::log(0.05);   // 299.6 s
  EXPECT_NEAR(rise_time(t, y, 10.0), exact, 1.0);
  EXPECT_NEAR(settling_time(t, y, 10.0), exact, 1.0);
  EXPECT_EQ(initial_direction(t, y, 10.0), 1);
}

TEST(StepMetrics, WrongWayResponse) {
  // a dip below the start before rising: settling is later than first reaching 95%
  std::vector<double> t, y;
  for (int k = 0; k <= 600; ++k) {
    t.push_back(k);
    const double s = k;
    y.push_back(1.0 - std::exp(-s / 50.0) - 1.5 * s / 20.0 * std::exp(-s / 20.0) +
                0.04 * std::sin(s / 5.0) * std::exp(-s / 150.0));
  }
  EXPECT_EQ(initial_direction(t, y, 0.0, 20.0), -1);
  EXPECT_GE(settling_time(t, y, 0.0), rise_time(t, y, 0.0));
}

TEST(StepMetrics, FlatChannel) {
  const std::vector<double> t{0, 1, 2, 3}, y{5, 5, 5, 5};
  EXPECT_TRUE(std::isnan(settling_time(t, y, 1.0)));
  EXPECT_TRUE(std::isnan(rise_time(t, y, 1.0)));
  EXPECT_EQ(initial_direction(t, y, 1.0), 0);
}

TEST(SeriesCsv, RoundTrip) {
  const auto dir = temp_dir("ahpd_csv_roundtrip");
  MeasurementSeries s = ramp_series(25, 0.5);
  s.channels["T_W_G_in"][3] = 353.15 + 1.0 / 3.0;
  const std::string path = (dir / "series.csv").string();
  write_series_csv(path, s);
  const MeasurementSeries back = read_measurements(path);
  EXPECT_EQ(back.t, s.t);
  for (const auto& [name, c] : s.channels) {
    const auto& b = back.at(name);
    ASSERT_EQ(b.size(), c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      EXPECT_NEAR(b[k], c[k], 1e-12 * std::abs(c[k])) << name;
    }
  }

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("time__s,", 0), 0u);
  for (const auto& name : MeasurementSeries::channel_names()) {
    EXPECT_NE(header.find(name + "__" + display_unit(name)), std::string::npos) << name;
  }
}

TEST(SeriesCsv, MissingColumnIsNamed) {
  const auto dir = temp_dir("ahpd_csv_missing");
  const std::string path = (dir / "m.csv").string();
  std::vector<std::string> header{"time__s"};
  std::vector<std::string> row{"0"};
  for (const auto& name : MeasurementSeries::channel_names()) {
    if (name == "Qdot_E") continue;
    header.push_back(name + "__" + display_unit(name));
    row.push_back("1");
  }
  write_table_csv(path, header, {row});
  try {
    read_measurements(path);
    FAIL() << "expected a schema error";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.column(), "Qdot_E");
    EXPECT_NE(std::string(e.what()).find("Qdot_E"), std::string::npos);
  }
}

TEST(SeriesCsv, AcceptsOtherUnitsAndOrder) {
  const auto dir = temp_dir("ahpd_csv_units");
  const std::string path = (dir / "m.csv").string();
  std::ofstream out(path);
  out << "Qdot_E__W,time__min,T_W_G_in__K,mdot_W_G__kg_s,T_W_G_out__degC,T_W_AC_in__degC,"
         "mdot_W_AC__kg_h,T_W_AC_out__degC,T_W_E_in__degC,mdot_W_E__m3_h,T_W_E_out__degC,"
         "Vdot_RSo__L_h,Qdot_G__kW,Qdot_AC__kW\n"
      << "14500,0,353.15,0.3,74.4,29,6200,33.9,14,2.2,8.4,450,21.3,34.9\n"
      << "14600,1,353.15,0.3,74.5,29,6200,33.9,14,2.2,8.4,450,21.3,34.9\n";
  out.close();
  const MeasurementSeries s = read_measurements(path);
  EXPECT_EQ(s.t, (std::vector<double>{0.0, 60.0}));
  EXPECT_DOUBLE_EQ(s.at("Qdot_E")[0], 14500.0);
  EXPECT_DOUBLE_EQ(s.at("T_W_G_out")[0], 74.4 + 273.15);
  EXPECT_DOUBLE_EQ(s.at("mdot_W_AC")[0], 6200.0 / 3600.0);
  EXPECT_DOUBLE_EQ(s.at("Vdot_RSo")[0], 0.45 / 3600.0);
}

TEST(SeriesCsv, RejectsNonIncreasingTime) {
  const auto dir = temp_dir("ahpd_csv_time");
  const std::string path = (dir / "m.csv").string();
  MeasurementSeries s = ramp_series(4, 1.0);
  s.t[2] = s.t[1];
  write_series_csv(path, s);
  EXPECT_THROW(read_measurements(path), SchemaError);
}

TEST(Invariants, ReferencePointIsClean) {
  const Model m = test::model_of(Variant::BaseA);
  EXPECT_TRUE(steady_violations(m, test::rop_state(Variant::BaseA)).empty());
}

class RopHold : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    scenario_ = new Scenario(load_scenario((kScenarios / "rop_hold.json").string()));
    result_ = new ScenarioResult(run_scenario(*scenario_, ModelParams{}));
  }
  static void TearDownTestSuite() {
    delete result_;
    delete scenario_;
  }
  static Scenario* scenario_;
  static ScenarioResult* result_;
};

Scenario* RopHold::scenario_ = nullptr;
ScenarioResult* RopHold::result_ = nullptr;

TEST_F(RopHold, AllVariantsRunClean) {
  ASSERT_EQ(result_->runs.size(), 4u);
  for (const auto& r : result_->runs) {
    EXPECT_TRUE(r.ok) << r.variant << ": " << r.error;
    EXPECT_TRUE(r.violations.empty()) << r.variant;
    EXPECT_EQ(r.series.t.size(), 61u);   // 600 s, every 10th sample
  }
  EXPECT_TRUE(result_->ok());
  EXPECT_EQ(result_->report.reference, "base-a");
}

TEST_F(RopHold, OutputsStayFlat) {
  for (const auto& r : result_->runs) {
    for (const auto& ch : OutputVector::names()) {
      const auto& y = r.series.at(ch);
      const double span = *std::max_element(y.begin(), y.end()) -
                          *std::min_element(y.begin(), y.end());
      EXPECT_LE(span, ch[0] == 'Q' ? 1e-3 : 1e-6) << r.variant << " " << ch;
    }
  }
}

TEST_F(RopHold, MassIsConserved) {
  const Model m = test::model_of(Variant::BaseA);
  const auto [total, libr] = sump_masses(m, result_->run("base-a").trajectory);
  for (double v : total) EXPECT_NEAR(v, 49.36, 1e-8);
  for (double v : libr) EXPECT_NEAR(v, 15.98, 1e-8);
}

TEST_F(RopHold, Deterministic) {
  const ScenarioResult again = run_scenario(*scenario_, ModelParams{});
  for (const auto& r : result_->runs) {
    const VariantRun& b = again.run(r.variant);
    for (const auto& ch : OutputVector::names()) EXPECT_EQ(r.series.at(ch), b.series.at(ch));
  }
}

TEST_F(RopHold, WritesOutputs) {
  const auto dir = temp_dir("ahpd_rop_hold_out");
  write_scenario_outputs(*result_, dir.string());
  for (const char* f : {"rop_hold__base-a.csv", "rop_hold__v2__states.csv", "rop_hold__status.csv",
                        "rop_hold__report.csv", "rop_hold__rae.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const MeasurementSeries back = read_measurements((dir / "rop_hold__v1.csv").string());
  EXPECT_EQ(back.t, result_->run("v1").series.t);
}

TEST(Scenario, ComparisonAgainstMeasurements) {
  // a base-a run written out as measurements and read back compares to itself
  const auto dir = temp_dir("ahpd_measured");
  Scenario sc = parse_scenario(R"({"name": "m", "t_end": "60 s",
                                   "steps": [{"t": "10 s", "set": {"T_W_G_in": "82 °C"}}]})");
  const ScenarioResult first = run_scenario(sc, ModelParams{});
  ASSERT_TRUE(first.ok());
  write_series_csv((dir / "meas.csv").string(), first.run("base-a").series);

  sc.measurements = (dir / "meas.csv").string();
  const ScenarioResult second = run_scenario(sc, ModelParams{});
  EXPECT_EQ(second.report.reference, "measurements");
  EXPECT_EQ(second.truncated_samples, 0);
  for (const auto& ch : OutputVector::names()) {
    EXPECT_LE(second.report.find("base-a", ch).max_abs, 1e-9) << ch;
  }
  for (const auto& e : second.report.operating_points) EXPECT_LE(e.rae_q, 1e-12);
}

TEST(Sweep, BaseBFollowsSteadyGainAndBaseARespectsEnvelope) {
  const std::vector<Quantity> values = {parse_quantity("80 °C"), parse_quantity("95 °C")};
  const auto points =
      steady_sweep("T_W_G_in", values, reference_settings(), {"base-a", "base-b", "v1"},
                   ModelParams{});
  ASSERT_EQ(points.size(), 6u);
  for (const auto& p : points) {
    const bool rejected = p.variant == "base-a" && p.value > 360.0;
    EXPECT_EQ(p.converged, !rejected) << p.variant << " " << p.value << " " << p.error;
  }
  // at the anchor the linearization reproduces the nonlinear outputs
  EXPECT_LE((points[2].y - points[0].y).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(steady_sweep("nonsense", values, {}, {"v1"}, ModelParams{}),
               std::invalid_argument);
}
