#pragma once

#include <filesystem>
#include <istream>
#include <vector>

namespace mzsim {

// One timestep of boundary conditions.
struct WeatherRecord {
  double time_h = 0.0;     // hours since simulation start
  double t_ae = 20.0;      // outside dry-bulb, degC
  double wind_speed = 0.0; // m/s
  double wind_dir = 0.0;   // deg, direction the wind comes from
  double i_bh = 0.0;       // direct (beam) irradiance on the horizontal, W/m2
  double i_dh = 0.0;       // diffuse horizontal irradiance, W/m2
  double rh_out = 0.5;     // relative humidity, 0..1
};

enum class SkyMode { EqualAir, Offset };

struct SkyModel {
  SkyMode mode = SkyMode::EqualAir;
  double offset_k = 6.0;  // K, T_sky = T_ae - offset in Offset mode
};

double sky_temperature(double t_ae, const SkyModel& model);

// Reads the CSV (header: time_h,t_ae_c,wind_ms,wind_dir_deg,i_bh_wm2,
// i_dh_wm2,rh_out) and resamples to a uniform grid of `timestep_s`.
// Sub-row steps are linearly interpolated; the trailing partial interval
// holds the last row. The covered span is t_last - t_first plus one final
// row interval, so an hourly N-row file yields N*3600/timestep records.
// Throws ParseError naming the offending row on a non-monotone time
// column, a missing field, or a negative irradiance.
std::vector<WeatherRecord> load_weather(const std::filesystem::path& path,
                                        double timestep_s);
std::vector<WeatherRecord> parse_weather_csv(std::istream& in, double timestep_s,
                                             const std::string& source_name = "weather");

void write_weather_csv(std::ostream& out, const std::vector<WeatherRecord>& records);

} // namespace mzsim
