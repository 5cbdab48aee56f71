#pragma once

#include <vector>

#include "mzsim/building.hpp"
#include "mzsim/weather.hpp"

namespace mzsim {

// Solar direction, both in degrees. Zenith > 90 means the sun is down.
// Azimuth is compass convention: 0 = north, 90 = east, clockwise.
struct SunPosition {
  double zenith;
  double azimuth;
};

SunPosition sun_position(double latitude_deg, int day_of_year, double hour);

// Angle between the sun direction and a surface normal, degrees.
// Surface orientation follows the Wall convention (tilt from vertical-up,
// azimuth clockwise from north).
double incidence_angle(double tilt_deg, double azimuth_deg, const SunPosition& sun);

struct IrradianceSplit {
  double beam = 0.0;
  double diffuse = 0.0;
  double reflected = 0.0;
  double total() const { return beam + diffuse + reflected; }
};

// Beam projection + isotropic diffuse + isotropic ground reflection.
IrradianceSplit incident_irradiance(const WeatherRecord& rec, double tilt_deg,
                                    double azimuth_deg, double albedo,
                                    const SunPosition& sun);

// Transmitted flux density through a glazing, W/m2.
double glazing_transmission(double incident, double tau0, double incidence_angle_deg,
                            AngularModel model);

// Shortwave power absorbed at one wall face, W (already times area).
struct SurfaceFlux {
  int wall = 0;
  Face face = Face::In;
  double power_w = 0.0;
};

struct ShortwaveSplit {
  std::vector<SurfaceFlux> absorbed;
  double discarded_w = 0.0;

  double absorbed_total() const;
};

// Distributes `flux_w` of transmitted shortwave inside `zone`: the target
// surface (the floor, or the model's designated wall) absorbs its share,
// the first reflection spreads area-weighted over the remaining surfaces,
// and the second reflection is discarded. Throws std::invalid_argument if
// the required target surface is missing.
ShortwaveSplit distribute_shortwave(const BuildingModel& model, int zone, double flux_w);

} // namespace mzsim
