#include "mzsim/solar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mzsim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double clamp01(double v) { return std::clamp(v, -1.0, 1.0); }

} // namespace

SunPosition sun_position(double latitude_deg, int day_of_year, double hour) {
  const double decl =
      23.45 * std::sin(kDegToRad * 360.0 * (284.0 + day_of_year) / 365.0);
  const double hour_angle = 15.0 * (hour - 12.0);

  const double phi = latitude_deg * kDegToRad;
  const double delta = decl * kDegToRad;
  const double h = hour_angle * kDegToRad;

  const double cos_z =
      std::sin(phi) * std::sin(delta) + std::cos(phi) * std::cos(delta) * std::cos(h);
  const double zenith = std::acos(clamp01(cos_z)) / kDegToRad;

  // Compass azimuth of the sun from the horizontal projection of its
  // direction vector (east positive, pole-facing component signed).
  const double sin_z = std::sqrt(std::max(0.0, 1.0 - cos_z * cos_z));
  double azimuth = 0.0;
  if (sin_z > 1e-9) {
    const double east = std::cos(delta) * std::sin(h);
    const double north =
        std::cos(phi) * std::sin(delta) - std::sin(phi) * std::cos(delta) * std::cos(h);
    azimuth = std::atan2(east, north) / kDegToRad;
    if (azimuth < 0.0) azimuth += 360.0;
  }
  return {zenith, azimuth};
}

double incidence_angle(double tilt_deg, double azimuth_deg, const SunPosition& sun) {
  const double z = sun.zenith * kDegToRad;
  const double beta = tilt_deg * kDegToRad;
  const double gamma = (sun.azimuth - azimuth_deg) * kDegToRad;
  const double cos_theta =
      std::cos(z) * std::cos(beta) + std::sin(z) * std::sin(beta) * std::cos(gamma);
  return std::acos(clamp01(cos_theta)) / kDegToRad;
}

IrradianceSplit incident_irradiance(const WeatherRecord& rec, double tilt_deg,
                                    double azimuth_deg, double albedo,
                                    const SunPosition& sun) {
  IrradianceSplit split;
  const double cos_tilt = std::cos(tilt_deg * kDegToRad);
  split.diffuse = rec.i_dh * 0.5 * (1.0 + cos_tilt);
  split.reflected = (rec.i_bh + rec.i_dh) * albedo * 0.5 * (1.0 - cos_tilt);

  if (sun.zenith < 89.0 && rec.i_bh > 0.0) {
    const double cos_z = std::cos(sun.zenith * kDegToRad);
    const double theta = incidence_angle(tilt_deg, azimuth_deg, sun);
    const double cos_theta = std::cos(theta * kDegToRad);
    split.beam = rec.i_bh * std::max(0.0, cos_theta / cos_z);
  }
  return split;
}

double glazing_transmission(double incident, double tau0, double incidence_angle_deg,
                            AngularModel model) {
  if (incident <= 0.0) return 0.0;
  if (model == AngularModel::Constant) return tau0 * incident;

  if (incidence_angle_deg >= 90.0) return 0.0;
  const double cos_theta = std::cos(incidence_angle_deg * kDegToRad);
  const double modifier = 1.0 - 0.2 * (1.0 / cos_theta - 1.0);
  return std::clamp(tau0 * incident * modifier, 0.0, tau0 * incident);
}

double ShortwaveSplit::absorbed_total() const {
  double sum = 0.0;
  for (const SurfaceFlux& f : absorbed) sum += f.power_w;
  return sum;
}

ShortwaveSplit distribute_shortwave(const BuildingModel& model, int zone,
                                    double flux_w) {
  ShortwaveSplit split;
  if (flux_w <= 0.0) return split;

  // Pick the first-bounce target face inside the zone.
  int target_wall = -1;
  Face target_face = Face::In;
  if (model.sw_mode == SwDistribution::TargetSurface) {
    target_wall = model.sw_target_wall;
    if (target_wall < 0 || target_wall >= static_cast<int>(model.walls.size()))
      throw std::invalid_argument("shortwave target wall is not set");
    const Wall& w = model.walls[target_wall];
    if (w.side_in == zone)
      target_face = Face::In;
    else if (w.side_out == zone)
      target_face = Face::Out;
    else
      throw std::invalid_argument("shortwave target wall does not face zone '" +
                                  model.zones[zone].name + "'");
  } else {
    // The floor: the face in this zone closest to horizontal-up.
    double best_tilt = 1e9;
    for (int wi = 0; wi < static_cast<int>(model.walls.size()); ++wi) {
      for (Face face : {Face::In, Face::Out}) {
        if (face_boundary(model.walls[wi], face) != zone) continue;
        // An upward face has tilt near 0 in face coordinates.
        double t = face_tilt(model.walls[wi], face);
        if (t < best_tilt) {
          best_tilt = t;
          target_wall = wi;
          target_face = face;
        }
      }
    }
    if (target_wall < 0)
      throw std::invalid_argument("zone '" + model.zones[zone].name +
                                  "' has no wall face to receive shortwave");
  }

  const Wall& target = model.walls[target_wall];
  const double alpha_t = face_absorptivity(target, target_face);
  split.absorbed.push_back({target_wall, target_face, alpha_t * flux_w});
  double remainder = (1.0 - alpha_t) * flux_w;
  if (remainder <= 0.0) return split;

  // First reflection: area-weighted over the zone's other wall faces.
  double other_area = 0.0;
  for (int wi = 0; wi < static_cast<int>(model.walls.size()); ++wi)
    for (Face face : {Face::In, Face::Out}) {
      if (face_boundary(model.walls[wi], face) != zone) continue;
      if (wi == target_wall && face == target_face) continue;
      other_area += model.walls[wi].area;
    }

  if (other_area <= 0.0) {
    split.discarded_w = remainder;
    return split;
  }

  for (int wi = 0; wi < static_cast<int>(model.walls.size()); ++wi)
    for (Face face : {Face::In, Face::Out}) {
      if (face_boundary(model.walls[wi], face) != zone) continue;
      if (wi == target_wall && face == target_face) continue;
      const double share = remainder * model.walls[wi].area / other_area;
      const double alpha = face_absorptivity(model.walls[wi], face);
      split.absorbed.push_back({wi, face, alpha * share});
      split.discarded_w += (1.0 - alpha) * share;
    }
  return split;
}

} // namespace mzsim
