#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mzsim/constants.hpp"
#include "mzsim/engine.hpp"
#include "mzsim/output_csv.hpp"

using namespace mzsim;

namespace {

const Material kWood{0.15, 600.0, 1600.0};

// One zone behind a light wood wall with a trickle vent; pure convective
// films so the steady balance has a short closed form.
BuildingModel buildCabin() {
  BuildingModel m;
  Zone z;
  z.name = "cabin";
  z.volume = 30.0;
  m.zones.push_back(z);

  Wall w;
  w.name = "shell";
  w.construction.layers = {{kWood, 0.05}};
  w.area = 10.0;
  w.side_in = 0;
  w.side_out = kExterior;
  w.h_ri = 0.0;
  w.h_re = 0.0;
  m.walls.push_back(w);
  return m;
}

SimulationConfig quietConfig(double dt_s = 3600.0, int warmup_days = 2) {
  SimulationConfig c;
  c.dt_s = dt_s;
  c.warmup_days = warmup_days;
  return c;
}

std::vector<WeatherRecord> constantWeather(double t_ae, int hours) {
  std::vector<WeatherRecord> w;
  for (int h = 0; h < hours; ++h) {
    WeatherRecord r;
    r.time_h = h;
    r.t_ae = t_ae;
    w.push_back(r);
  }
  return w;
}

std::vector<WeatherRecord> sineWeather(int hours) {
  std::vector<WeatherRecord> w;
  for (int h = 0; h < hours; ++h) {
    WeatherRecord r;
    r.time_h = h;
    r.t_ae = 12.0 + 6.0 * std::sin(2.0 * std::numbers::pi * h / 24.0);
    w.push_back(r);
  }
  return w;
}

} // namespace

// ============================================================================
// Construction and bookkeeping
// ============================================================================

TEST(Engine, RejectsInvalidModelUpFront) {
  BuildingModel m = buildCabin();
  m.walls[0].area = -1.0;
  try {
    Engine eng(m, quietConfig());
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("wall 'shell'"), std::string::npos);
  }
}

TEST(Engine, EmitsOneRowPerStepAfterWarmup) {
  Engine eng(buildCabin(), quietConfig(3600.0, 1));
  OutputSeries out = eng.run(constantWeather(15.0, 24), 48.0);
  ASSERT_EQ(out.rows.size(), 48u);
  EXPECT_DOUBLE_EQ(out.rows[0].time_h, 1.0);
  EXPECT_DOUBLE_EQ(out.rows.back().time_h, 48.0);

  Engine fine(buildCabin(), quietConfig(1800.0, 0));
  OutputSeries out2 = fine.run(constantWeather(15.0, 24), 24.0);
  ASSERT_EQ(out2.rows.size(), 48u);
  EXPECT_DOUBLE_EQ(out2.rows[0].time_h, 0.5);

  ASSERT_EQ(out.zone_names.size(), 1u);
  EXPECT_EQ(out.zone_names[0], "cabin");
  EXPECT_EQ(out.wall_names[0], "shell");
}

TEST(Engine, RefusesEmptyWeather) {
  Engine eng(buildCabin(), quietConfig());
  EXPECT_THROW(eng.run({}, 24.0), std::invalid_argument);
}

// ============================================================================
// Thermal behaviour end to end
// ============================================================================

TEST(Engine, HoldsAmbientEquilibriumInTheDark) {
  Engine eng(buildCabin(), quietConfig(3600.0, 2));
  OutputSeries out = eng.run(constantWeather(10.0, 24), 24.0);
  for (const StepRecord& row : out.rows) {
    EXPECT_NEAR(row.zone_t[0], 10.0, 0.01);
    EXPECT_EQ(row.coupling_iterations, 1); // no links, nothing to iterate
    EXPECT_LE(row.radiant_residual_w, 1e-6);
  }
}

TEST(Engine, SteadyGainsMatchAnalyticBalance) {
  BuildingModel m = buildCabin();
  m.zones[0].internal_gains = constant_schedule(120.0);
  Engine eng(m, quietConfig(3600.0, 5));
  OutputSeries out = eng.run(constantWeather(0.0, 24), 24.0);

  const double ua = wall_u_value(m.walls[0]) * m.walls[0].area;
  EXPECT_NEAR(out.rows.back().zone_t[0], 120.0 / ua, 1e-3);
}

TEST(Engine, SteadyAuditCloses) {
  BuildingModel m = buildCabin();
  m.zones[0].internal_gains = constant_schedule(120.0);
  Engine eng(m, quietConfig(3600.0, 6));
  eng.run(constantWeather(0.0, 24), 24.0);

  WeatherRecord w;
  w.t_ae = 0.0;
  EnergyAudit audit = eng.audit(w, 0.0, 172);
  EXPECT_NEAR(audit.sources_w, 120.0, 1e-9);
  EXPECT_LT(audit.relative_imbalance(), 1e-4);
}

TEST(Engine, LongerWarmupChangesNothingOnceSteady) {
  BuildingModel m = buildCabin();
  m.zones[0].internal_gains = constant_schedule(80.0);
  Engine a(m, quietConfig(3600.0, 4));
  Engine b(m, quietConfig(3600.0, 8));
  auto weather = constantWeather(5.0, 24);
  const double ta = a.run(weather, 24.0).rows.back().zone_t[0];
  const double tb = b.run(weather, 24.0).rows.back().zone_t[0];
  EXPECT_NEAR(ta, tb, 1e-6);
}

TEST(Engine, PeriodicForcingGivesPeriodicResponse) {
  Engine eng(buildCabin(), quietConfig(3600.0, 3));
  OutputSeries out = eng.run(sineWeather(24), 48.0);
  ASSERT_EQ(out.rows.size(), 48u);
  for (int k = 0; k < 24; ++k)
    EXPECT_NEAR(out.rows[k].zone_t[0], out.rows[k + 24].zone_t[0], 0.05);
}

TEST(Engine, RunsAreDeterministic) {
  auto weather = sineWeather(24);
  Engine a(buildCabin(), quietConfig(3600.0, 2));
  Engine b(buildCabin(), quietConfig(3600.0, 2));
  OutputSeries ra = a.run(weather, 48.0);
  OutputSeries rb = b.run(weather, 48.0);
  ASSERT_EQ(ra.rows.size(), rb.rows.size());
  for (size_t i = 0; i < ra.rows.size(); ++i) {
    EXPECT_EQ(ra.rows[i].zone_t[0], rb.rows[i].zone_t[0]);
    EXPECT_EQ(ra.rows[i].zone_r[0], rb.rows[i].zone_r[0]);
  }
}

// ============================================================================
// Coupled airflow output
// ============================================================================

TEST(Engine, ReportsLinkFlowsAndPowers) {
  BuildingModel m = buildCabin();
  AirLink low;
  low.name = "low";
  low.kind = LinkKind::Opening;
  low.cd = 0.6;
  low.aperture = 0.01;
  low.height = 0.2;
  low.from = kExterior;
  low.to = 0;
  AirLink high = low;
  high.name = "high";
  high.height = 2.2;
  high.from = 0;
  high.to = kExterior;
  m.links = {low, high};
  m.zones[0].internal_gains = constant_schedule(200.0);

  Engine eng(m, quietConfig(3600.0, 4));
  OutputSeries out = eng.run(constantWeather(0.0, 24), 24.0);
  const StepRecord& row = out.rows.back();

  // Heated zone in cold air: the stack loop runs bottom-in top-out.
  ASSERT_EQ(row.link_flow.size(), 2u);
  EXPECT_GT(row.link_flow[0], 1e-5);
  EXPECT_GT(row.link_flow[1], 1e-5);
  EXPECT_NEAR(row.link_flow[0], row.link_flow[1], 1e-8);
  // Settled state: one coupling pass suffices, but the pressure solve ran.
  EXPECT_GE(row.coupling_iterations, 1);
  EXPECT_GE(row.airflow_iterations, 1);

  // Cold inflow: the power it hands the zone is negative.
  const double t_zone = row.zone_t[0];
  EXPECT_NEAR(row.link_power_w[0],
              kAirSpecificHeat * row.link_flow[0] * (0.0 - t_zone), 1e-9);
}

TEST(Engine, WrapsStepFailuresWithTimestamp) {
  // Extract fan in a zone group with no exterior path: the airflow solver
  // refuses, and the engine reports when.
  BuildingModel m = buildCabin();
  Zone z2;
  z2.name = "closet";
  z2.volume = 5.0;
  z2.mech_extract_flow = 0.01;
  m.zones.push_back(z2);
  Wall w2 = m.walls[0];
  w2.name = "partition";
  w2.side_in = 1;
  m.walls.push_back(w2);
  AirLink door;
  door.name = "door";
  door.kind = LinkKind::Opening;
  door.aperture = 0.02;
  door.from = 0;
  door.to = 1;
  m.links.push_back(door);

  Engine eng(m, quietConfig(3600.0, 0));
  try {
    eng.run(constantWeather(10.0, 24), 24.0);
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("step at t="), std::string::npos);
  }
}

// ============================================================================
// Link power helpers
// ============================================================================

TEST(LinkPower, FollowsFlowTimesTemperatureDrop) {
  BuildingModel m = buildCabin();
  AirLink vent;
  vent.name = "vent";
  vent.from = 0;
  vent.to = kExterior;
  vent.aperture = 0.01;
  m.links.push_back(vent);

  const std::vector<double> zone_t{25.0};
  EXPECT_NEAR(link_sensible_power(m, 0, 0.01, zone_t, 20.0), 50.0, 1e-12);
  EXPECT_NEAR(link_sensible_power(m, 0, -0.01, zone_t, 20.0), -50.0, 1e-12);
  EXPECT_DOUBLE_EQ(link_sensible_power(m, 0, 0.01, {20.0}, 20.0), 0.0);
}

TEST(LinkPower, ZoneAeraulicPowerCountsOnlyInflows) {
  BuildingModel m = buildCabin();
  FlowMatrix flows(1);
  flows.add_flow(FlowMatrix::index_of(kExterior), FlowMatrix::index_of(0), 0.01);
  flows.add_flow(FlowMatrix::index_of(0), FlowMatrix::index_of(kExterior), 0.01);
  // 10 C air displacing 20 C air: 0.01 * 1000 * (10 - 20) = -100 W.
  EXPECT_NEAR(zone_aeraulic_power(m, flows, {20.0}, 10.0, 0), -100.0, 1e-12);
}

// ============================================================================
// CSV serialization
// ============================================================================

TEST(OutputCsv, NumbersUseCompactRoundTripFormat) {
  EXPECT_EQ(format_number(25.0), "25");
  EXPECT_EQ(format_number(0.0001), "0.0001");
  EXPECT_EQ(format_number(26.476469631), "26.47646963");
}

TEST(OutputCsv, SelectionControlsColumnGroups) {
  Engine eng(buildCabin(), quietConfig(3600.0, 1));
  OutputSeries out = eng.run(constantWeather(15.0, 24), 24.0);

  std::ostringstream all;
  write_output_csv(all, out);
  std::string header = all.str().substr(0, all.str().find('\n'));
  EXPECT_NE(header.find("t_cabin_c"), std::string::npos);
  EXPECT_NE(header.find("r_cabin_kgkg"), std::string::npos);
  EXPECT_NE(header.find("ts_in_shell_c"), std::string::npos);
  EXPECT_NE(header.find("coupling_iters"), std::string::npos);

  std::ostringstream narrow;
  write_output_csv(narrow, out, {"zone_t"});
  const std::string text = narrow.str();
  header = text.substr(0, text.find('\n'));
  EXPECT_EQ(header, "time_h,t_ae_c,t_cabin_c");
  // One header plus one line per row, LF only.
  EXPECT_EQ(static_cast<size_t>(std::count(text.begin(), text.end(), '\n')),
            out.rows.size() + 1);
  EXPECT_EQ(text.find('\r'), std::string::npos);

  std::ostringstream bad;
  EXPECT_THROW(write_output_csv(bad, out, {"zone_t", "pressure"}),
               std::invalid_argument);
}

TEST(OutputCsv, SerializationIsReproducible) {
  Engine a(buildCabin(), quietConfig(3600.0, 1));
  Engine b(buildCabin(), quietConfig(3600.0, 1));
  std::ostringstream sa;
  std::ostringstream sb;
  write_output_csv(sa, a.run(sineWeather(24), 24.0));
  write_output_csv(sb, b.run(sineWeather(24), 24.0));
  EXPECT_EQ(sa.str(), sb.str());
}
