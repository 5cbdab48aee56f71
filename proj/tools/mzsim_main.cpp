#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mzsim/building_io.hpp"
#include "mzsim/engine.hpp"
#include "mzsim/errors.hpp"
#include "mzsim/output_csv.hpp"
#include "mzsim/scenarios.hpp"
#include "mzsim/weather.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;
constexpr int kExitUsage = 64;

// Input-content problems (schema, references, value ranges).
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

mzsim::BuildingModel load_checked(const std::string& path) {
  mzsim::BuildingModel model = mzsim::load_building(path);
  const auto violations = mzsim::validate_building(model);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) msg += v.component + ": " + v.message + "\n";
    if (!msg.empty()) msg.pop_back();
    throw ValidationFailure(msg);
  }
  return model;
}

void write_csv_to(const std::string& path, const mzsim::OutputSeries& series,
                  const std::vector<std::string>& outputs) {
  if (path.empty()) {
    mzsim::write_output_csv(std::cout, series, outputs);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  mzsim::write_output_csv(out, series, outputs);
}

struct SimulateArgs {
  std::string building;
  std::string weather;
  std::string out;
  std::string outputs;
  double dt = 3600.0;
  int days = 1;
  int warmup = 0;
  double latitude = 45.0;
  int start_day = 172;
  std::string sky = "equal";
  double sky_offset = 6.0;
};

int cmd_simulate(const SimulateArgs& a) {
  mzsim::BuildingModel model = load_checked(a.building);

  mzsim::SimulationConfig config;
  config.dt_s = a.dt;
  config.warmup_days = a.warmup;
  config.latitude_deg = a.latitude;
  config.start_day_of_year = a.start_day;
  config.sky.mode =
      a.sky == "offset" ? mzsim::SkyMode::Offset : mzsim::SkyMode::EqualAir;
  config.sky.offset_k = a.sky_offset;
  if (!a.outputs.empty()) config.outputs = split_csv_list(a.outputs);

  const auto weather = mzsim::load_weather(a.weather, a.dt);
  mzsim::Engine engine(std::move(model), config);
  const mzsim::OutputSeries series = engine.run(weather, a.days * 24.0);
  write_csv_to(a.out, series, config.outputs);
  return kExitOk;
}

struct CollectorArgs {
  double flow = 1.0;
  double irradiance = 500.0;
  double ambient = 25.0;
  double dt = 3600.0;
  int days = 2;
  int warmup = 2;
  std::string out;
  std::string emit;
};

int cmd_collector(const CollectorArgs& a) {
  mzsim::CollectorParams params;
  params.flow_m3h = a.flow;
  params.irradiance_w_m2 = a.irradiance;
  params.t_ambient_c = a.ambient;

  if (!a.emit.empty()) {
    mzsim::save_building(a.emit, mzsim::build_collector(params));
    return kExitOk;
  }

  mzsim::Engine engine(mzsim::build_collector(params),
                       mzsim::collector_config(params, a.dt, a.warmup));
  const auto weather = mzsim::collector_weather(params, a.dt, a.days + a.warmup);
  const mzsim::OutputSeries series = engine.run(weather, a.days * 24.0);
  write_csv_to(a.out, series, {});

  const mzsim::CollectorMetrics m = mzsim::collector_metrics(params, series);
  std::printf("P_u=%.1fW eff=%.1f%%\n", m.useful_power_w, 100.0 * m.efficiency);
  return kExitOk;
}

struct TrombeArgs {
  mzsim::HoleMode holes = mzsim::HoleMode::Open;
  double dt = 3600.0;
  int days = 7;
  int warmup = 3;
  std::string out;
  std::string emit;
};

int cmd_trombe(const TrombeArgs& a) {
  mzsim::TrombeParams params;
  params.holes = a.holes;

  if (!a.emit.empty()) {
    mzsim::save_building(a.emit, mzsim::build_trombe(params));
    return kExitOk;
  }

  const mzsim::TrombeSeries series =
      mzsim::run_trombe(params, a.dt, a.days, a.warmup);
  write_csv_to(a.out, series.output, {});

  const mzsim::TrombeMetrics m = mzsim::trombe_metrics(params, series, a.dt);
  std::printf("delivered=%.2fkWh incident=%.2fkWh/m2 eff=%.1f%% lag=%.0fh\n",
              m.delivered_kwh, m.incident_kwh_m2, 100.0 * m.efficiency,
              m.peak_lag_h);
  return kExitOk;
}

struct SweepArgs {
  std::string scenario;
  std::string parameter;
  std::string values;
  double dt = 3600.0;
  int days = 2;
  int warmup = 2;
  std::string out;
};

int cmd_sweep(const SweepArgs& a) {
  if (a.scenario != "collector" || a.parameter != "flow")
    throw CLI::ValidationError("sweep", "only 'sweep collector flow <values>' is supported");

  std::vector<double> values;
  for (const std::string& v : split_csv_list(a.values)) {
    try {
      values.push_back(std::stod(v));
    } catch (const std::exception&) {
      throw CLI::ValidationError("sweep", "bad flow value '" + v + "'");
    }
  }
  if (values.empty()) throw CLI::ValidationError("sweep", "no flow values given");

  // Independent simulations; results assembled in the declared order.
  std::vector<std::future<mzsim::CollectorMetrics>> futures;
  for (double flow : values)
    futures.push_back(std::async(std::launch::async, [&, flow] {
      mzsim::CollectorParams params;
      params.flow_m3h = flow;
      return mzsim::run_collector(params, a.dt, a.days, a.warmup);
    }));

  std::ostringstream csv;
  csv << "flow_m3h,useful_power_w,efficiency,dt_out_k\n";
  for (size_t i = 0; i < values.size(); ++i) {
    const mzsim::CollectorMetrics m = futures[i].get();
    csv << mzsim::format_number(values[i]) << ','
        << mzsim::format_number(m.useful_power_w) << ','
        << mzsim::format_number(m.efficiency) << ','
        << mzsim::format_number(m.outlet_minus_ambient_k) << "\n";
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + a.out + "'");
    out << csv.str();
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"multizone building thermal-airflow-humidity simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a building description");
  validate->add_option("building", validate_path, "building JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run a building + weather file");
  simulate->add_option("--building", sim.building)->required()->check(CLI::ExistingFile);
  simulate->add_option("--weather", sim.weather)->required()->check(CLI::ExistingFile);
  simulate->add_option("--dt", sim.dt, "timestep, s");
  simulate->add_option("--days", sim.days, "reported span, days");
  simulate->add_option("--warmup", sim.warmup, "discarded lead-in, days");
  simulate->add_option("--latitude", sim.latitude);
  simulate->add_option("--start-day", sim.start_day, "day of year at t=0");
  simulate->add_option("--sky", sim.sky)->check(CLI::IsMember({"equal", "offset"}));
  simulate->add_option("--sky-offset", sim.sky_offset, "K below outside air");
  simulate->add_option("--outputs", sim.outputs, "comma list of column groups");
  simulate->add_option("--out", sim.out, "output CSV (default stdout)");

  CollectorArgs col;
  CLI::App* collector = app.add_subcommand("collector", "flat-plate air collector bench");
  collector->add_option("--flow", col.flow, "sweep flow, m3/h");
  collector->add_option("--irradiance", col.irradiance, "daytime flux, W/m2");
  collector->add_option("--ambient", col.ambient, "outside temperature, degC");
  collector->add_option("--dt", col.dt);
  collector->add_option("--days", col.days);
  collector->add_option("--warmup", col.warmup);
  collector->add_option("--out", col.out, "output CSV (default stdout)");
  collector->add_option("--emit-building", col.emit, "write the model JSON and exit");

  TrombeArgs tr;
  const std::map<std::string, mzsim::HoleMode> hole_names{
      {"open", mzsim::HoleMode::Open},
      {"closed", mzsim::HoleMode::Closed},
      {"night-closed", mzsim::HoleMode::NightClosed}};
  CLI::App* trombe = app.add_subcommand("trombe", "storage wall with recycling loop");
  trombe->add_option("--holes", tr.holes, "hole control")
      ->transform(CLI::CheckedTransformer(hole_names, CLI::ignore_case));
  trombe->add_option("--dt", tr.dt);
  trombe->add_option("--days", tr.days);
  trombe->add_option("--warmup", tr.warmup);
  trombe->add_option("--out", tr.out, "output CSV (default stdout)");
  trombe->add_option("--emit-building", tr.emit, "write the model JSON and exit");

  SweepArgs sw;
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over a scenario");
  sweep->add_option("scenario", sw.scenario)->required();
  sweep->add_option("parameter", sw.parameter)->required();
  sweep->add_option("values", sw.values, "comma-separated values")->required();
  sweep->add_option("--dt", sw.dt);
  sweep->add_option("--days", sw.days);
  sweep->add_option("--warmup", sw.warmup);
  sweep->add_option("--out", sw.out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) {
      mzsim::BuildingModel model;
      try {
        model = mzsim::load_building(validate_path);
      } catch (const mzsim::ParseError& e) {
        std::cout << e.what() << "\n";
        return kExitValidation;
      }
      const auto violations = mzsim::validate_building(model);
      if (!violations.empty()) {
        for (const auto& v : violations)
          std::cout << v.component << ": " << v.message << "\n";
        return kExitValidation;
      }
      std::cout << "ok: " << model.zones.size() << " zones, " << model.walls.size()
                << " walls, " << model.glazings.size() << " glazings, "
                << model.links.size() << " links\n";
      return kExitOk;
    }
    if (simulate->parsed()) return cmd_simulate(sim);
    if (collector->parsed()) return cmd_collector(col);
    if (trombe->parsed()) return cmd_trombe(tr);
    if (sweep->parsed()) return cmd_sweep(sw);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationFailure& e) {
    std::cout << e.what() << "\n";
    return kExitValidation;
  } catch (const mzsim::ParseError& e) {
    std::cout << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
