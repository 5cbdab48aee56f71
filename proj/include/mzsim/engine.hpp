#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mzsim/airflow.hpp"
#include "mzsim/building.hpp"
#include "mzsim/moisture.hpp"
#include "mzsim/solar.hpp"
#include "mzsim/thermal.hpp"
#include "mzsim/weather.hpp"

namespace mzsim {

struct SimulationConfig {
  double dt_s = 3600.0;
  int warmup_days = 0;
  double latitude_deg = 45.0;
  int start_day_of_year = 172;
  SkyModel sky;
  double coupling_tolerance_k = 0.01;
  int max_coupling_iters = 20;
  double initial_temp_c = 20.0;
  double initial_rh = 0.5;
  // Column groups for CSV output; empty selects everything. Known names:
  // zone_t, zone_r, surface_t, wall_flux, link_flow, link_power,
  // diagnostics.
  std::vector<std::string> outputs;
};

// One output row per completed step (post-warmup).
struct StepRecord {
  double time_h = 0.0;               // hours since the end of warmup
  double t_ae = 0.0;
  std::vector<double> zone_t;        // degC
  std::vector<double> zone_r;        // kg/kg
  std::vector<double> surface_t_in;  // degC, per wall inside surface
  std::vector<double> surface_t_out;
  std::vector<double> wall_flux_in_w;  // delivered through each inside face
  std::vector<double> link_flow;     // signed kg/s, positive from -> to
  std::vector<double> link_power_w;  // sensible power carried downstream
  double radiant_residual_w = 0.0;   // worst |radiant balance| this step
  int airflow_iterations = 0;
  int coupling_iterations = 0;
};

struct OutputSeries {
  std::vector<std::string> zone_names;
  std::vector<std::string> wall_names;
  std::vector<std::string> link_names;
  std::vector<StepRecord> rows;
};

struct EnergyAudit {
  double sources_w = 0.0;  // internal gains + absorbed shortwave
  double losses_w = 0.0;   // envelope + ventilation losses
  double relative_imbalance() const;
};

class Engine {
public:
  Engine(BuildingModel model, SimulationConfig config);

  // Re-initializes the state isothermal at the first record's outside
  // temperature, consumes warmup_days from the head of the series without
  // recording, then reports one row per step over span_h. The series
  // should cover warmup plus span; if shorter it wraps around.
  OutputSeries run(const std::vector<WeatherRecord>& weather, double span_h);

  const BuildingModel& model() const { return model_; }
  const NodeRegistry& registry() const { return registry_; }
  const ThermalState& state() const { return state_; }
  const MoistureState& moisture() const { return moisture_; }

  // Advances exactly one step against the given weather record.
  StepRecord step(const WeatherRecord& weather, double hour_of_day, int day_of_year);

  EnergyAudit audit(const WeatherRecord& weather, double hour_of_day,
                    int day_of_year) const;

private:
  BuildingModel model_;
  SimulationConfig config_;
  NodeRegistry registry_;
  ThermalState state_;
  MoistureState moisture_;
  FlowMatrix last_flows_;
  bool has_last_flows_ = false;

  std::vector<SurfaceFlux> solar_fluxes(const WeatherRecord& weather,
                                        double hour_of_day, int day_of_year,
                                        double* glazing_gain_w) const;
};

// Sensible power delivered downstream by a signed link flow, W. For
// either flow direction this is c * flow * (T_from - T_to): positive when
// the moving air is warmer than the volume it enters.
double link_sensible_power(const BuildingModel& model, int link, double signed_flow,
                           const std::vector<double>& zone_t, double t_ae);

// Net aeraulic power delivered by all links into the given zone, W.
double zone_aeraulic_power(const BuildingModel& model, const FlowMatrix& flows,
                           const std::vector<double>& zone_t, double t_ae, int zone);

} // namespace mzsim
