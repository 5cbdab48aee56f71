#include "mzsim/weather.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "mzsim/errors.hpp"

namespace mzsim {

namespace {

constexpr const char* kHeader =
    "time_h,t_ae_c,wind_ms,wind_dir_deg,i_bh_wm2,i_dh_wm2,rh_out";

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw ParseError(source + ": line " + std::to_string(line) + ": " + msg);
}

double parse_field(const std::string& source, int line, const std::string& field,
                   const char* column) {
  try {
    size_t used = 0;
    double v = std::stod(field, &used);
    while (used < field.size() &&
           (field[used] == ' ' || field[used] == '\t' || field[used] == '\r'))
      ++used;
    if (used != field.size())
      fail(source, line, std::string("trailing characters in column ") + column);
    return v;
  } catch (const std::invalid_argument&) {
    fail(source, line, std::string("cannot parse column ") + column + " from '" +
                           field + "'");
  } catch (const std::out_of_range&) {
    fail(source, line, std::string("value out of range in column ") + column);
  }
}

double lerp(double a, double b, double f) { return a + (b - a) * f; }

WeatherRecord interpolate(const WeatherRecord& a, const WeatherRecord& b, double f) {
  WeatherRecord r;
  r.time_h = lerp(a.time_h, b.time_h, f);
  r.t_ae = lerp(a.t_ae, b.t_ae, f);
  r.wind_speed = lerp(a.wind_speed, b.wind_speed, f);
  r.wind_dir = lerp(a.wind_dir, b.wind_dir, f);
  r.i_bh = lerp(a.i_bh, b.i_bh, f);
  r.i_dh = lerp(a.i_dh, b.i_dh, f);
  r.rh_out = lerp(a.rh_out, b.rh_out, f);
  return r;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

} // namespace

double sky_temperature(double t_ae, const SkyModel& model) {
  return model.mode == SkyMode::EqualAir ? t_ae : t_ae - model.offset_k;
}

std::vector<WeatherRecord> parse_weather_csv(std::istream& in, double timestep_s,
                                             const std::string& source_name) {
  if (!(timestep_s > 0.0))
    throw std::invalid_argument("weather timestep must be positive");

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) fail(source_name, 1, "empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    fail(source_name, 1, std::string("expected header '") + kHeader + "'");

  std::vector<WeatherRecord> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      fail(source_name, line_no,
           "expected 7 fields, got " + std::to_string(fields.size()));

    WeatherRecord r;
    r.time_h = parse_field(source_name, line_no, fields[0], "time_h");
    r.t_ae = parse_field(source_name, line_no, fields[1], "t_ae_c");
    r.wind_speed = parse_field(source_name, line_no, fields[2], "wind_ms");
    r.wind_dir = parse_field(source_name, line_no, fields[3], "wind_dir_deg");
    r.i_bh = parse_field(source_name, line_no, fields[4], "i_bh_wm2");
    r.i_dh = parse_field(source_name, line_no, fields[5], "i_dh_wm2");
    r.rh_out = parse_field(source_name, line_no, fields[6], "rh_out");

    if (r.i_bh < 0.0 || r.i_dh < 0.0)
      fail(source_name, line_no, "negative irradiance");
    if (r.wind_speed < 0.0) fail(source_name, line_no, "negative wind speed");
    if (r.rh_out < 0.0 || r.rh_out > 1.0)
      fail(source_name, line_no, "relative humidity outside [0,1]");
    if (!rows.empty() && !(r.time_h > rows.back().time_h))
      fail(source_name, line_no, "time column must be strictly increasing");
    rows.push_back(r);
  }
  if (rows.empty()) fail(source_name, line_no, "no data rows");

  if (rows.size() == 1) return rows;

  const double spacing_h = rows[1].time_h - rows[0].time_h;
  for (size_t i = 2; i < rows.size(); ++i) {
    double d = rows[i].time_h - rows[i - 1].time_h;
    if (std::abs(d - spacing_h) > 1e-6 * spacing_h)
      fail(source_name, static_cast<int>(i) + 2, "rows are not evenly spaced");
  }

  const double dt_h = timestep_s / 3600.0;
  const double span_h = spacing_h * static_cast<double>(rows.size());
  const auto count = static_cast<size_t>(span_h / dt_h + 0.5);

  std::vector<WeatherRecord> out;
  out.reserve(count);
  for (size_t k = 0; k < count; ++k) {
    const double t = rows[0].time_h + static_cast<double>(k) * dt_h;
    const double pos = (t - rows[0].time_h) / spacing_h;
    const auto i = static_cast<size_t>(pos);
    WeatherRecord r;
    if (i + 1 >= rows.size()) {
      r = rows.back();  // trailing interval holds the final row
      r.time_h = t;
    } else {
      r = interpolate(rows[i], rows[i + 1], pos - static_cast<double>(i));
      r.time_h = t;
    }
    out.push_back(r);
  }
  return out;
}

std::vector<WeatherRecord> load_weather(const std::filesystem::path& path,
                                        double timestep_s) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open weather file '" + path.string() + "'");
  return parse_weather_csv(in, timestep_s, path.filename().string());
}

void write_weather_csv(std::ostream& out, const std::vector<WeatherRecord>& records) {
  out << kHeader << "\n";
  for (const WeatherRecord& r : records) {
    out << fmt(r.time_h) << ',' << fmt(r.t_ae) << ',' << fmt(r.wind_speed) << ','
        << fmt(r.wind_dir) << ',' << fmt(r.i_bh) << ',' << fmt(r.i_dh) << ','
        << fmt(r.rh_out) << "\n";
  }
}

} // namespace mzsim
