#include "mzsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "mzsim/constants.hpp"

namespace mzsim {

namespace {

int schedule_hour(double hour_of_day) {
  double h = std::fmod(hour_of_day, 24.0);
  if (h < 0.0) h += 24.0;
  return std::min(static_cast<int>(h), 23);
}

int wrap_day(int day_of_year) { return (day_of_year - 1) % 365 + 1; }

std::vector<double> air_temps(const NodeRegistry& reg, const ThermalState& state,
                              int zones) {
  std::vector<double> t(zones);
  for (int z = 0; z < zones; ++z) t[z] = state.t[reg.air_node(z)];
  return t;
}

FlowMatrix blend_half(const FlowMatrix& a, const FlowMatrix& b) {
  FlowMatrix out(a.zone_count());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      out.at(i, j) = 0.5 * (a.at(i, j) + b.at(i, j));
  return out;
}

} // namespace

double EnergyAudit::relative_imbalance() const {
  return std::abs(sources_w - losses_w) / std::max(std::abs(sources_w), 1e-12);
}

Engine::Engine(BuildingModel model, SimulationConfig config)
    : model_(std::move(model)),
      config_(config),
      registry_(model_),
      state_(uniform_state(registry_, config.initial_temp_c)),
      last_flows_(static_cast<int>(model_.zones.size())) {
  const auto violations = validate_building(model_);
  if (!violations.empty())
    throw std::invalid_argument("invalid building: " + violations.front().component +
                                ": " + violations.front().message);
  moisture_.r.assign(model_.zones.size(),
                     humidity_ratio(config.initial_temp_c, config.initial_rh));
}

std::vector<SurfaceFlux> Engine::solar_fluxes(const WeatherRecord& weather,
                                              double hour_of_day, int day_of_year,
                                              double* glazing_gain_w) const {
  std::vector<SurfaceFlux> out;
  double transmitted = 0.0;
  const SunPosition sun =
      sun_position(config_.latitude_deg, wrap_day(day_of_year), hour_of_day);

  if (weather.i_bh > 0.0 || weather.i_dh > 0.0) {
    for (int wi = 0; wi < static_cast<int>(model_.walls.size()); ++wi) {
      const Wall& wall = model_.walls[wi];
      for (Face face : {Face::In, Face::Out}) {
        if (face_boundary(wall, face) != kExterior) continue;
        const double inc = incident_irradiance(weather, face_tilt(wall, face),
                                               face_azimuth(wall, face),
                                               model_.albedo, sun)
                               .total();
        const double power = face_absorptivity(wall, face) * wall.area * inc;
        if (power > 0.0) out.push_back({wi, face, power});
      }
    }

    for (const Glazing& g : model_.glazings) {
      const bool in_ext = g.side_in == kExterior;
      const bool out_ext = g.side_out == kExterior;
      if (in_ext == out_ext) continue;  // internal or degenerate pane
      const int zone = in_ext ? g.side_out : g.side_in;
      const double tilt = out_ext ? g.tilt : 180.0 - g.tilt;
      const double azimuth =
          out_ext ? g.azimuth : std::fmod(g.azimuth + 180.0, 360.0);
      const IrradianceSplit split =
          incident_irradiance(weather, tilt, azimuth, model_.albedo, sun);
      const double theta = incidence_angle(tilt, azimuth, sun);
      const double density =
          glazing_transmission(split.total(), g.tau0, theta, g.angular);
      const double power = density * g.area;
      if (power <= 0.0) continue;
      transmitted += power;
      const ShortwaveSplit inside = distribute_shortwave(model_, zone, power);
      out.insert(out.end(), inside.absorbed.begin(), inside.absorbed.end());
    }
  }

  if (glazing_gain_w) *glazing_gain_w = transmitted;
  return out;
}

StepRecord Engine::step(const WeatherRecord& weather, double hour_of_day,
                        int day_of_year) {
  const int zones = static_cast<int>(model_.zones.size());
  const int hour_i = schedule_hour(hour_of_day);

  std::vector<double> gains(zones);
  for (int z = 0; z < zones; ++z) gains[z] = model_.zones[z].internal_gains[hour_i];

  double transmitted = 0.0;
  const std::vector<SurfaceFlux> fluxes =
      solar_fluxes(weather, hour_of_day, day_of_year, &transmitted);

  std::vector<double> zone_t = air_temps(registry_, state_, zones);
  const bool has_links = !model_.links.empty();

  // Pressure and thermal solutions feed each other (density-driven flows
  // move heat, heat changes densities); iterate with a half-step damping
  // on the flows until the zone temperatures settle.
  AirflowSolution sol;
  FlowMatrix flows;
  FlowMatrix prev_flows;
  bool have_prev = false;
  ThermalState candidate = state_;
  int coupling = 0;
  double delta = 0.0;
  for (int it = 1; it <= config_.max_coupling_iters; ++it) {
    sol = solve_pressures(model_, zone_t, weather, hour_of_day);
    flows = sol.flows;
    if (has_links && have_prev) flows = blend_half(flows, prev_flows);
    prev_flows = flows;
    have_prev = true;

    ThermalInputs inputs;
    inputs.weather = weather;
    inputs.t_sky = sky_temperature(weather.t_ae, config_.sky);
    inputs.flows = flows;
    inputs.surface_fluxes = fluxes;
    inputs.zone_gains_w = gains;
    const NodalSystem sys = assemble(model_, registry_, inputs);
    candidate = step_thermal(model_, registry_, sys, state_, config_.dt_s);

    std::vector<double> t_new = air_temps(registry_, candidate, zones);
    delta = 0.0;
    for (int z = 0; z < zones; ++z)
      delta = std::max(delta, std::abs(t_new[z] - zone_t[z]));
    zone_t = std::move(t_new);
    coupling = it;
    if (!has_links || delta < config_.coupling_tolerance_k) break;
  }
  if (has_links && delta >= config_.coupling_tolerance_k)
    std::cerr << "warning: flow-thermal coupling still moving " << delta
              << " K after " << coupling << " iterations at t=" << state_.time_h
              << " h\n";

  state_ = candidate;
  last_flows_ = flows;
  has_last_flows_ = true;

  const double r_out = humidity_ratio(weather.t_ae, weather.rh_out);
  moisture_ = step_moisture(model_, moisture_, flows, r_out, config_.dt_s);

  StepRecord rec;
  rec.time_h = state_.time_h;
  rec.t_ae = weather.t_ae;
  rec.zone_t = zone_t;
  rec.zone_r = moisture_.r;
  const int walls = static_cast<int>(model_.walls.size());
  rec.surface_t_in.resize(walls);
  rec.surface_t_out.resize(walls);
  rec.wall_flux_in_w.resize(walls);
  for (int wi = 0; wi < walls; ++wi) {
    rec.surface_t_in[wi] = state_.t[registry_.surface_node(wi, Face::In)];
    rec.surface_t_out[wi] = state_.t[registry_.surface_node(wi, Face::Out)];
    rec.wall_flux_in_w[wi] =
        -wall_conductive_flux(registry_, state_, model_, wi, Face::In);
  }
  rec.link_flow = sol.link_flows;
  rec.link_power_w.resize(model_.links.size());
  for (int li = 0; li < static_cast<int>(model_.links.size()); ++li)
    rec.link_power_w[li] =
        link_sensible_power(model_, li, sol.link_flows[li], zone_t, weather.t_ae);
  for (int z = 0; z < zones; ++z)
    rec.radiant_residual_w =
        std::max(rec.radiant_residual_w,
                 std::abs(radiant_balance_residual(model_, registry_, state_, z)));
  rec.airflow_iterations = sol.iterations;
  rec.coupling_iterations = coupling;
  return rec;
}

OutputSeries Engine::run(const std::vector<WeatherRecord>& weather, double span_h) {
  if (weather.empty()) throw std::invalid_argument("weather series is empty");

  OutputSeries out;
  for (const Zone& z : model_.zones) out.zone_names.push_back(z.name);
  for (const Wall& w : model_.walls) out.wall_names.push_back(w.name);
  for (const AirLink& l : model_.links) out.link_names.push_back(l.name);

  const double dt_h = config_.dt_s / 3600.0;
  const auto per_day = std::max<size_t>(1, static_cast<size_t>(std::llround(24.0 / dt_h)));
  const size_t warm_steps = per_day * static_cast<size_t>(config_.warmup_days);
  const auto steps = static_cast<size_t>(std::llround(span_h / dt_h));

  state_ = uniform_state(registry_, weather.front().t_ae);
  state_.time_h = -static_cast<double>(warm_steps) * dt_h;
  moisture_.r.assign(model_.zones.size(),
                     humidity_ratio(weather.front().t_ae, weather.front().rh_out));
  has_last_flows_ = false;

  out.rows.reserve(steps);
  for (size_t k = 0; k < warm_steps + steps; ++k) {
    const double sim_h = static_cast<double>(k) * dt_h;
    const int day = config_.start_day_of_year + static_cast<int>(sim_h / 24.0);
    try {
      StepRecord rec =
          step(weather[k % weather.size()], std::fmod(sim_h, 24.0), day);
      if (k >= warm_steps) out.rows.push_back(rec);
    } catch (const std::exception& e) {
      throw std::runtime_error("step at t=" +
                               std::to_string(state_.time_h + dt_h) + " h: " +
                               e.what());
    }
  }
  return out;
}

EnergyAudit Engine::audit(const WeatherRecord& weather, double hour_of_day,
                          int day_of_year) const {
  EnergyAudit a;
  const int zones = static_cast<int>(model_.zones.size());
  const int hour_i = schedule_hour(hour_of_day);
  for (int z = 0; z < zones; ++z) a.sources_w += model_.zones[z].internal_gains[hour_i];

  for (const SurfaceFlux& f : solar_fluxes(weather, hour_of_day, day_of_year, nullptr))
    a.sources_w += f.power_w;

  const double t_ae = weather.t_ae;
  const double t_sky = sky_temperature(t_ae, config_.sky);
  const std::vector<double> zone_t = air_temps(registry_, state_, zones);

  for (int wi = 0; wi < static_cast<int>(model_.walls.size()); ++wi) {
    const Wall& wall = model_.walls[wi];
    for (Face face : {Face::In, Face::Out}) {
      if (face_boundary(wall, face) != kExterior) continue;
      const double t_s = state_.t[registry_.surface_node(wi, face)];
      a.losses_w += face_h_conv(wall, face) * wall.area * (t_s - t_ae);
      const bool sees_sky = face_tilt(wall, face) < 180.0 - 1e-9;
      a.losses_w +=
          face_h_rad(wall, face) * wall.area * (t_s - (sees_sky ? t_sky : t_ae));
    }
  }

  for (const Glazing& g : model_.glazings) {
    const bool in_ext = g.side_in == kExterior;
    const bool out_ext = g.side_out == kExterior;
    if (in_ext == out_ext) continue;
    const int zone = in_ext ? g.side_out : g.side_in;
    a.losses_w += g.u_value * g.area * (zone_t[zone] - t_ae);
  }

  if (has_last_flows_) {
    for (int z = 0; z < zones; ++z) {
      const int idx = FlowMatrix::index_of(z);
      a.losses_w += kAirSpecificHeat * (last_flows_.at(idx, 0) * zone_t[z] -
                                        last_flows_.at(0, idx) * t_ae);
    }
  }
  return a;
}

double link_sensible_power(const BuildingModel& model, int link, double signed_flow,
                           const std::vector<double>& zone_t, double t_ae) {
  const AirLink& l = model.links[link];
  const double t_from = l.from == kExterior ? t_ae : zone_t[l.from];
  const double t_to = l.to == kExterior ? t_ae : zone_t[l.to];
  return kAirSpecificHeat * signed_flow * (t_from - t_to);
}

double zone_aeraulic_power(const BuildingModel& model, const FlowMatrix& flows,
                           const std::vector<double>& zone_t, double t_ae, int zone) {
  const int zones = static_cast<int>(model.zones.size());
  const int idx = FlowMatrix::index_of(zone);
  double power = 0.0;
  for (int src = kExterior; src < zones; ++src) {
    if (src == zone) continue;
    const double f = flows.at(FlowMatrix::index_of(src), idx);
    if (f <= 0.0) continue;
    const double t_src = src == kExterior ? t_ae : zone_t[src];
    power += kAirSpecificHeat * f * (t_src - zone_t[zone]);
  }
  return power;
}

} // namespace mzsim
