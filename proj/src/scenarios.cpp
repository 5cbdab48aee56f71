#include "mzsim/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mzsim/constants.hpp"
#include "mzsim/discretize.hpp"
#include "mzsim/solar.hpp"

namespace mzsim {

namespace {

const Material kWood{0.15, 600.0, 1600.0};
const Material kPolystyrene{0.04, 25.0, 1400.0};
const Material kSteel{50.0, 7800.0, 450.0};
const Material kConcrete{1.4, 2200.0, 880.0};
const Material kGlass{1.0, 2500.0, 750.0};

WallConstruction casing_sandwich() {
  WallConstruction c;
  c.layers = {{kWood, 0.01}, {kPolystyrene, 0.05}, {kWood, 0.01}};
  return c;
}

double sweep_mass_flow(const CollectorParams& p) {
  return p.flow_m3h * kAirDensity / 3600.0;
}

bool sun_on(const CollectorParams& p, double hour) {
  return hour >= p.sun_on_hour && hour < p.sun_off_hour;
}

} // namespace

BuildingModel build_collector(const CollectorParams& p) {
  BuildingModel m;

  Zone cavity;
  cavity.name = "cavity";
  cavity.volume = p.aperture_area_m2 * p.gap_thickness_m;
  cavity.mech_balanced_flow = sweep_mass_flow(p);
  m.zones.push_back(cavity);

  // Absorber plate suspended in the cavity, insulated at the back. The
  // idealized variant strips it to a massless fully absorbing sheet glued
  // to the air temperature.
  Wall absorber;
  absorber.name = "absorber";
  absorber.area = p.aperture_area_m2;
  absorber.tilt = 180.0;  // plate under the cavity, active face up
  absorber.side_in = 0;
  absorber.side_out = kExterior;
  absorber.h_ce = 0.0;
  absorber.h_re = 0.0;
  absorber.sw_absorptivity_out = 0.0;
  if (p.idealized) {
    absorber.construction.layers = {{Material{50.0, 0.0, 0.0}, 0.0005}};
    absorber.sw_absorptivity_in = 1.0;
    absorber.h_ci = 1000.0;
    absorber.h_ri = 0.0;
  } else {
    absorber.construction.layers = {{kSteel, 0.002}};
    absorber.sw_absorptivity_in = p.absorber_alpha;
    absorber.h_ci = 10.0;
  }
  m.walls.push_back(absorber);

  // Casing: four lateral strips lumped together, plus the base panel.
  const double side = std::sqrt(p.aperture_area_m2);
  Wall lateral;
  lateral.name = "lateral";
  lateral.area = 4.0 * side * p.gap_thickness_m;
  lateral.tilt = 90.0;
  lateral.side_in = 0;
  lateral.side_out = kExterior;
  lateral.sw_absorptivity_in = p.wall_alpha;
  lateral.sw_absorptivity_out = 0.0;

  Wall base;
  base.name = "base";
  base.area = p.aperture_area_m2;
  base.tilt = 180.0;
  base.side_in = 0;
  base.side_out = kExterior;
  base.sw_absorptivity_in = p.wall_alpha;
  base.sw_absorptivity_out = 0.0;

  if (p.idealized) {
    for (Wall* w : {&lateral, &base}) {
      w->construction.layers = {{Material{0.1, 0.0, 0.0}, 0.0005}};
      w->h_ce = 0.0;
      w->h_re = 0.0;
      w->h_ri = 0.0;
    }
  } else {
    lateral.construction = casing_sandwich();
    base.construction = casing_sandwich();
  }
  m.walls.push_back(lateral);
  m.walls.push_back(base);

  Glazing cover;
  cover.name = "cover";
  cover.area = p.aperture_area_m2;
  cover.tau0 = p.glazing_tau0;
  cover.u_value = p.glazing_u;
  cover.tilt = 0.0;
  cover.side_in = 0;
  cover.side_out = kExterior;
  m.glazings.push_back(cover);

  m.sw_mode = SwDistribution::TargetSurface;
  m.sw_target_wall = 0;
  return m;
}

std::vector<WeatherRecord> collector_weather(const CollectorParams& p, double dt_s,
                                             int days) {
  const double dt_h = dt_s / 3600.0;
  const auto per_day = static_cast<size_t>(std::llround(24.0 / dt_h));
  std::vector<WeatherRecord> out;
  out.reserve(per_day * days);
  for (size_t k = 0; k < per_day * static_cast<size_t>(days); ++k) {
    WeatherRecord r;
    r.time_h = static_cast<double>(k) * dt_h;
    r.t_ae = p.t_ambient_c;
    // All-diffuse flux makes the horizontal cover see exactly this value
    // whatever the sun position.
    r.i_dh = sun_on(p, std::fmod(r.time_h, 24.0)) ? p.irradiance_w_m2 : 0.0;
    r.rh_out = 0.5;
    out.push_back(r);
  }
  return out;
}

SimulationConfig collector_config(const CollectorParams& p, double dt_s,
                                  int warmup_days) {
  SimulationConfig c;
  c.dt_s = dt_s;
  c.warmup_days = warmup_days;
  c.latitude_deg = 45.0;
  c.start_day_of_year = 172;
  c.sky.mode = SkyMode::EqualAir;
  c.initial_temp_c = p.t_ambient_c;
  return c;
}

double collector_analytic_temperature(double t_s, const CollectorParams& p,
                                      double k_total) {
  if (!(k_total > 0.0))
    throw std::invalid_argument("loss conductance must be positive");
  const CollectorAnalytic a = collector_analytic(p, k_total);
  return p.t_ambient_c + (a.asymptote_c - p.t_ambient_c) *
                             (1.0 - std::exp(-t_s / a.time_constant_s));
}

CollectorAnalytic collector_analytic(const CollectorParams& p, double k_total) {
  if (!(k_total > 0.0))
    throw std::invalid_argument("loss conductance must be positive");
  CollectorAnalytic a;
  a.k_total_w_per_k = k_total;
  a.asymptote_c = p.t_ambient_c +
                  p.glazing_tau0 * p.irradiance_w_m2 * p.aperture_area_m2 / k_total;
  const double volume = p.aperture_area_m2 * p.gap_thickness_m;
  a.time_constant_s = kAirDensity * kAirSpecificHeat * volume / k_total;
  return a;
}

double collector_k_total(const BuildingModel& model) {
  double k = 0.0;
  for (const Glazing& g : model.glazings)
    if ((g.side_in == kExterior) != (g.side_out == kExterior))
      k += g.u_value * g.area;

  for (const Wall& w : model.walls) {
    Face ext_face;
    if (w.side_out == kExterior)
      ext_face = Face::Out;
    else if (w.side_in == kExterior)
      ext_face = Face::In;
    else
      continue;
    const double h_out = face_h_conv(w, ext_face) + face_h_rad(w, ext_face);
    if (h_out <= 0.0) continue;  // adiabatic back
    const Face in_face = ext_face == Face::Out ? Face::In : Face::Out;
    const double h_in = face_h_conv(w, in_face) + face_h_rad(w, in_face);
    double r = construction_resistance(w.construction) + 1.0 / h_out;
    if (h_in > 0.0) r += 1.0 / h_in;
    k += w.area / r;
  }

  for (const Zone& z : model.zones)
    k += (z.mech_balanced_flow + z.mech_extract_flow) * kAirSpecificHeat;
  return k;
}

CollectorMetrics collector_metrics(const CollectorParams& p,
                                   const OutputSeries& series) {
  if (series.rows.size() < 2)
    throw std::invalid_argument("collector series too short");
  const double dt_h = series.rows[1].time_h - series.rows[0].time_h;

  // Afternoon plateau: the last step that still has sun on its interval.
  const StepRecord* plateau = nullptr;
  for (const StepRecord& row : series.rows) {
    double start = std::fmod(row.time_h - dt_h, 24.0);
    if (start < 0.0) start += 24.0;
    if (sun_on(p, start)) plateau = &row;
  }
  if (!plateau) throw std::invalid_argument("collector series has no sun hours");

  CollectorMetrics m;
  m.outlet_minus_ambient_k = plateau->zone_t[0] - p.t_ambient_c;
  m.useful_power_w =
      sweep_mass_flow(p) * kAirSpecificHeat * m.outlet_minus_ambient_k;
  m.efficiency =
      m.useful_power_w / (p.irradiance_w_m2 * p.aperture_area_m2);
  return m;
}

CollectorMetrics run_collector(const CollectorParams& p, double dt_s, int days,
                               int warmup_days) {
  Engine engine(build_collector(p), collector_config(p, dt_s, warmup_days));
  const auto weather = collector_weather(p, dt_s, days + warmup_days);
  const OutputSeries series = engine.run(weather, days * 24.0);
  return collector_metrics(p, series);
}

// ---------------------------------------------------------------------------

Schedule hole_schedule(HoleMode mode) {
  Schedule s = constant_schedule(mode == HoleMode::Open ? 1.0 : 0.0);
  if (mode == HoleMode::NightClosed)
    for (int h = 8; h <= 20; ++h) s[h] = 1.0;  // open through early evening
  return s;
}

TrombeLayout trombe_layout() { return {}; }

BuildingModel build_trombe(const TrombeParams& p) {
  BuildingModel m;

  Zone room;
  room.name = "room";
  room.volume = p.room_floor_m2 * p.room_height_m;
  room.mech_balanced_flow = p.ach * room.volume * kAirDensity / 3600.0;
  room.vapor_gain = p.vapor_gain_kg_h / 3600.0;
  room.internal_gains = constant_schedule(p.occupant_gain_w);
  for (int h = 18; h <= 21; ++h) room.internal_gains[h] += p.lighting_gain_w;
  m.zones.push_back(room);

  Zone gap;
  gap.name = "gap";
  gap.volume = p.wall_area_m2 * p.gap_depth_m;
  m.zones.push_back(gap);

  const TrombeLayout lay = trombe_layout();

  // Massive dark wall between room and gap; five slices resolve the
  // diurnal wave through the slab.
  Wall storage;
  storage.name = "storage";
  storage.construction.layers = {{kConcrete, p.wall_thickness_m}};
  storage.construction.nodes_per_layer = 5;
  storage.area = p.wall_area_m2;
  storage.tilt = 90.0;
  storage.azimuth = p.facade_azimuth_deg;
  storage.side_in = lay.room_zone;
  storage.side_out = lay.gap_zone;
  storage.sw_absorptivity_out = 0.9;
  storage.h_ce = p.gap_h_c;
  m.walls.push_back(storage);

  // Room envelope: remaining facade area around the system, three more
  // vertical walls, a lightweight roof, and a slab on adiabatic ground.
  const double facade_w = std::sqrt(p.room_floor_m2);
  const double wall_area = facade_w * p.room_height_m;

  auto add_envelope = [&](const char* name, double area, double azimuth,
                          double tilt) {
    Wall w;
    w.name = name;
    w.construction = casing_sandwich();
    w.construction.nodes_per_layer = 2;
    w.area = area;
    w.tilt = tilt;
    w.azimuth = azimuth;
    w.side_in = lay.room_zone;
    w.side_out = kExterior;
    m.walls.push_back(w);
  };
  add_envelope("north_wall", wall_area - p.wall_area_m2, p.facade_azimuth_deg, 90.0);
  add_envelope("east_wall", wall_area, p.facade_azimuth_deg + 90.0, 90.0);
  add_envelope("west_wall", wall_area, p.facade_azimuth_deg + 270.0, 90.0);
  add_envelope("south_wall", wall_area, p.facade_azimuth_deg + 180.0, 90.0);
  add_envelope("roof", p.room_floor_m2, 0.0, 0.0);

  Wall floor;
  floor.name = "floor";
  floor.construction.layers = {{kConcrete, 0.10}};
  floor.construction.nodes_per_layer = 3;
  floor.area = p.room_floor_m2;
  floor.tilt = 180.0;
  floor.side_in = lay.room_zone;
  floor.side_out = kExterior;
  floor.h_ce = 0.0;
  floor.h_re = 0.0;
  m.walls.push_back(floor);

  // The cover is split into two parallel paths over the same aperture: the
  // glazing carries only the solar transmission (U = 0), while a thin glass
  // pane wall carries conduction, its own solar absorption, and the
  // radiative exchange between the hot storage face and the cold glass
  // through the gap radiant node. Folding that exchange into an air-to-air
  // U instead would cool the gap air with heat that never passed through it.
  Wall pane;
  pane.name = "pane";
  pane.construction.layers = {{kGlass, 0.006}};
  pane.construction.nodes_per_layer = 1;
  pane.area = p.wall_area_m2;
  pane.tilt = 90.0;
  pane.azimuth = p.facade_azimuth_deg;
  pane.side_in = lay.gap_zone;
  pane.side_out = kExterior;
  pane.h_ci = p.gap_h_c;
  pane.sw_absorptivity_in = 0.07;
  pane.sw_absorptivity_out = 0.07;
  m.walls.push_back(pane);

  Glazing cover;
  cover.name = "cover";
  cover.area = p.wall_area_m2;
  cover.tilt = 90.0;
  cover.azimuth = p.facade_azimuth_deg;
  cover.side_in = lay.gap_zone;
  cover.side_out = kExterior;
  cover.u_value = 0.0;
  cover.emissivity_out = 0.9;
  m.glazings.push_back(cover);

  const Schedule opening = hole_schedule(p.holes);
  AirLink low;
  low.name = "hole_low";
  low.kind = LinkKind::Opening;
  low.aperture = p.hole_area_m2;
  low.height = 0.1;
  low.from = lay.room_zone;
  low.to = lay.gap_zone;
  low.opening_schedule = opening;
  m.links.push_back(low);

  AirLink high = low;
  high.name = "hole_high";
  high.height = 1.9;
  high.from = lay.gap_zone;
  high.to = lay.room_zone;
  m.links.push_back(high);

  m.sw_mode = SwDistribution::TargetSurface;
  m.sw_target_wall = lay.storage_wall;
  return m;
}

std::vector<WeatherRecord> trombe_weather(const TrombeParams& p, double dt_s,
                                          int days) {
  const double dt_h = dt_s / 3600.0;
  const auto per_day = static_cast<size_t>(std::llround(24.0 / dt_h));

  // Raw clear-sky day shape, later scaled onto the facade target.
  std::vector<WeatherRecord> day(per_day);
  double facade_raw_kwh = 0.0;
  for (size_t k = 0; k < per_day; ++k) {
    WeatherRecord& r = day[k];
    const double hour = static_cast<double>(k) * dt_h;
    r.time_h = hour;
    r.t_ae = 15.0 + 5.0 * std::cos(2.0 * std::numbers::pi * (hour - 14.0) / 24.0);
    r.wind_speed = 0.5;
    r.wind_dir = 90.0;
    r.rh_out = 0.65;
    const SunPosition sun = sun_position(p.latitude_deg, p.start_day_of_year, hour);
    if (sun.zenith < 89.0) {
      const double cz = std::cos(sun.zenith * std::numbers::pi / 180.0);
      r.i_bh = cz;
      r.i_dh = 0.25 * cz;
    }
    const double inc = incident_irradiance(r, 90.0, p.facade_azimuth_deg, 0.3, sun)
                           .total();
    facade_raw_kwh += inc * dt_s / 3.6e6;
  }
  const double scale =
      facade_raw_kwh > 0.0 ? p.daily_global_target_kwh_m2 / facade_raw_kwh : 0.0;

  std::vector<WeatherRecord> out;
  out.reserve(per_day * days);
  for (int d = 0; d < days; ++d)
    for (size_t k = 0; k < per_day; ++k) {
      WeatherRecord r = day[k];
      r.time_h = (static_cast<double>(d) * 24.0) + r.time_h;
      r.i_bh *= scale;
      r.i_dh *= scale;
      out.push_back(r);
    }
  return out;
}

SimulationConfig trombe_config(const TrombeParams& p, double dt_s, int warmup_days) {
  SimulationConfig c;
  c.dt_s = dt_s;
  c.warmup_days = warmup_days;
  c.latitude_deg = p.latitude_deg;
  c.start_day_of_year = p.start_day_of_year;
  c.sky.mode = SkyMode::Offset;
  c.sky.offset_k = 6.0;
  c.initial_temp_c = 15.0;
  return c;
}

TrombeSeries run_trombe(const TrombeParams& p, double dt_s, int days,
                        int warmup_days) {
  const TrombeLayout lay = trombe_layout();
  Engine engine(build_trombe(p), trombe_config(p, dt_s, warmup_days));
  const auto weather = trombe_weather(p, dt_s, days + warmup_days);

  TrombeSeries s;
  s.output = engine.run(weather, days * 24.0);

  const double dt_h = dt_s / 3600.0;
  const auto per_day = static_cast<size_t>(std::llround(24.0 / dt_h));
  const size_t warm_steps = per_day * static_cast<size_t>(warmup_days);
  const BuildingModel& model = engine.model();

  s.conductive_w.reserve(s.output.rows.size());
  s.aeraulic_w.reserve(s.output.rows.size());
  s.incident_w_m2.reserve(s.output.rows.size());
  for (size_t k = 0; k < s.output.rows.size(); ++k) {
    const StepRecord& row = s.output.rows[k];
    s.conductive_w.push_back(row.wall_flux_in_w[lay.storage_wall]);

    double aer = 0.0;
    for (size_t li = 0; li < row.link_flow.size(); ++li) {
      const double f = row.link_flow[li];
      if (f == 0.0) continue;
      const int downstream = f > 0.0 ? model.links[li].to : model.links[li].from;
      if (downstream == lay.room_zone) aer += row.link_power_w[li];
    }
    s.aeraulic_w.push_back(aer);

    const size_t wk = warm_steps + k;
    const double sim_h = static_cast<double>(wk) * dt_h;
    const int day = p.start_day_of_year + static_cast<int>(sim_h / 24.0);
    const SunPosition sun =
        sun_position(p.latitude_deg, (day - 1) % 365 + 1, std::fmod(sim_h, 24.0));
    s.incident_w_m2.push_back(
        incident_irradiance(weather[wk % weather.size()], 90.0,
                            p.facade_azimuth_deg, model.albedo, sun)
            .total());
  }
  return s;
}

std::optional<double> trombe_efficiency(const TrombeParams& p,
                                        const TrombeSeries& s, double dt_s) {
  double incident_j_m2 = 0.0;
  double delivered_j = 0.0;
  for (size_t k = 0; k < s.conductive_w.size(); ++k) {
    incident_j_m2 += s.incident_w_m2[k] * dt_s;
    delivered_j += (s.conductive_w[k] + s.aeraulic_w[k]) * dt_s;
  }
  if (incident_j_m2 <= 0.0) return std::nullopt;
  return delivered_j / (incident_j_m2 * p.wall_area_m2);
}

TrombeMetrics trombe_metrics(const TrombeParams& p, const TrombeSeries& s,
                             double dt_s) {
  TrombeMetrics m;
  for (size_t k = 0; k < s.conductive_w.size(); ++k) {
    m.delivered_kwh += (s.conductive_w[k] + s.aeraulic_w[k]) * dt_s / 3.6e6;
    m.incident_kwh_m2 += s.incident_w_m2[k] * dt_s / 3.6e6;
  }
  if (m.incident_kwh_m2 > 0.0)
    m.efficiency = m.delivered_kwh / (m.incident_kwh_m2 * p.wall_area_m2);

  const double dt_h = dt_s / 3600.0;
  const int per_day = static_cast<int>(std::llround(24.0 / dt_h));
  if (per_day > 0 && s.conductive_w.size() >= static_cast<size_t>(per_day)) {
    std::vector<double> cond_day(per_day, 0.0);
    std::vector<double> aer_day(per_day, 0.0);
    for (size_t k = 0; k < s.conductive_w.size(); ++k) {
      cond_day[k % per_day] += s.conductive_w[k];
      aer_day[k % per_day] += s.aeraulic_w[k];
    }
    int cond_peak = 0;
    int aer_peak = 0;
    for (int i = 0; i < per_day; ++i) {
      if (cond_day[i] > cond_day[cond_peak]) cond_peak = i;
      if (aer_day[i] > aer_day[aer_peak]) aer_peak = i;
    }
    m.peak_lag_h = ((cond_peak - aer_peak + per_day) % per_day) * dt_h;
    m.xcorr_lag_h = cross_correlation_lag(aer_day, cond_day, per_day) * dt_h;
  }
  return m;
}

int cross_correlation_lag(const std::vector<double>& a, const std::vector<double>& b,
                          int period) {
  const int n = static_cast<int>(std::min(a.size(), b.size()));
  if (n == 0 || period <= 0) return 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (int i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;

  int best_lag = 0;
  double best = -1e300;
  for (int lag = 0; lag < period; ++lag) {
    double c = 0.0;
    for (int i = 0; i < n; ++i)
      c += (a[i] - mean_a) * (b[(i + lag) % n] - mean_b);
    if (c > best) {
      best = c;
      best_lag = lag;
    }
  }
  return best_lag;
}

} // namespace mzsim
