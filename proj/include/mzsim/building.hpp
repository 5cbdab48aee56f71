#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mzsim/constants.hpp"

namespace mzsim {

// 24 hourly values indexed by hour-of-day.
using Schedule = std::array<double, 24>;

inline Schedule constant_schedule(double value) {
  Schedule s{};
  s.fill(value);
  return s;
}

struct Material {
  double conductivity;   // W/(m K)
  double density;        // kg/m3
  double specific_heat;  // J/(kg K)
};

struct Layer {
  Material material;
  double thickness;      // m
};

// Layers listed inside -> outside.
struct WallConstruction {
  std::vector<Layer> layers;
  int nodes_per_layer = 1;
};

enum class Face { In, Out };

// Opaque envelope element. `tilt` is the angle of the outside-face normal
// from vertical-up: 0 = horizontal facing up (roof), 90 = vertical,
// 180 = horizontal facing down (suspended floor). `azimuth` is the compass
// direction of the outside-face normal, degrees clockwise from north.
struct Wall {
  std::string name;
  WallConstruction construction;
  double area = 1.0;               // m2
  double tilt = 90.0;              // deg
  double azimuth = 0.0;            // deg
  int side_in = kExterior;         // zone index or kExterior
  int side_out = kExterior;
  double sw_absorptivity_in = 0.3;
  double sw_absorptivity_out = 0.3;
  double h_ci = 3.0;               // W/(m2 K), inside convective film
  double h_ce = 15.0;              // outside convective film
  double h_ri = 5.0;               // inside linearized radiative coefficient
  double h_re = 5.0;               // outside linearized radiative coefficient
};

enum class AngularModel { Constant, CosineModifier };

// Massless transparent element, modeled as a U·A conductance between its
// two boundaries plus solar transmission into side_in.
struct Glazing {
  std::string name;
  double area = 1.0;         // m2
  double tau0 = 0.85;        // normal-incidence transmittance
  double u_value = 5.8;      // W/(m2 K)
  double tilt = 90.0;        // deg, outside-face normal (see Wall)
  double azimuth = 0.0;      // deg
  int side_in = kExterior;
  int side_out = kExterior;
  double emissivity_out = 0.9;
  AngularModel angular = AngularModel::Constant;
};

struct Zone {
  std::string name;
  double volume = 1.0;                         // m3
  std::optional<double> air_capacitance;       // J/K, default rho*c*V
  Schedule internal_gains = constant_schedule(0.0);  // W
  double mech_extract_flow = 0.0;   // kg/s, extract fan; makeup through links
  double mech_balanced_flow = 0.0;  // kg/s, balanced supply+extract at T_ae
  double vapor_gain = 0.0;          // kg/s water vapor released in the zone
  double reference_height = 0.0;    // m, zone floor above the site datum

  double effective_air_capacitance() const {
    return air_capacitance.value_or(kAirDensity * kAirSpecificHeat * volume);
  }
};

enum class LinkKind { Crack, Opening };

// Small opening between two air volumes. `height` is measured above the
// floor of the anchoring zone (`from` when interior, otherwise `to`).
struct AirLink {
  std::string name;
  LinkKind kind = LinkKind::Opening;
  double cd = 0.6;
  double exponent = 0.65;            // flow exponent n, cracks only
  double aperture = 0.0;             // m2
  double height = 0.0;               // m above zone floor
  int from = kExterior;
  int to = kExterior;
  double facade_azimuth = 0.0;       // deg, exterior side only (wind)
  std::optional<double> cp_override; // wind pressure coefficient
  Schedule opening_schedule = constant_schedule(1.0);
};

enum class SwDistribution { Floor, TargetSurface };

struct BuildingModel {
  std::vector<Zone> zones;
  std::vector<Wall> walls;
  std::vector<Glazing> glazings;
  std::vector<AirLink> links;
  double albedo = 0.3;
  SwDistribution sw_mode = SwDistribution::Floor;
  int sw_target_wall = -1;  // wall index, TargetSurface mode only
};

struct Violation {
  std::string component;  // e.g. "walls[2]"
  std::string message;
};

// Checks every type invariant and reference; returns one entry per problem.
// An empty list means the model is usable by the engine.
std::vector<Violation> validate_building(const BuildingModel& model);

// Orientation of one face of a wall. The inside face points opposite the
// outside face: tilt flips about horizontal and azimuth rotates 180 deg.
double face_tilt(const Wall& wall, Face face);
double face_azimuth(const Wall& wall, Face face);

// Boundary reference of a face.
int face_boundary(const Wall& wall, Face face);

// Convective/radiative film coefficients and absorptivity of a face.
double face_h_conv(const Wall& wall, Face face);
double face_h_rad(const Wall& wall, Face face);
double face_absorptivity(const Wall& wall, Face face);

} // namespace mzsim
