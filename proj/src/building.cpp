#include "mzsim/building.hpp"

#include <cmath>
#include <set>
#include <string>

#include "mzsim/constants.hpp"

namespace mzsim {

namespace {

bool valid_side(const BuildingModel& model, int side) {
  return side >= kExterior && side < static_cast<int>(model.zones.size());
}

void check_unique(std::vector<Violation>& out, const char* component,
                  const std::string& name, std::set<std::string>& seen) {
  if (name.empty()) {
    out.push_back({component, "unnamed entry"});
  } else if (!seen.insert(name).second) {
    out.push_back({component, "duplicate name '" + name + "'"});
  }
}

} // namespace

double face_tilt(const Wall& wall, Face face) {
  return face == Face::Out ? wall.tilt : 180.0 - wall.tilt;
}

double face_azimuth(const Wall& wall, Face face) {
  double az = face == Face::Out ? wall.azimuth : wall.azimuth + 180.0;
  return std::fmod(std::fmod(az, 360.0) + 360.0, 360.0);
}

int face_boundary(const Wall& wall, Face face) {
  return face == Face::In ? wall.side_in : wall.side_out;
}

double face_h_conv(const Wall& wall, Face face) {
  return face == Face::In ? wall.h_ci : wall.h_ce;
}

double face_h_rad(const Wall& wall, Face face) {
  return face == Face::In ? wall.h_ri : wall.h_re;
}

double face_absorptivity(const Wall& wall, Face face) {
  return face == Face::In ? wall.sw_absorptivity_in : wall.sw_absorptivity_out;
}

std::vector<Violation> validate_building(const BuildingModel& model) {
  std::vector<Violation> out;
  if (model.zones.empty()) out.push_back({"building", "no zones defined"});
  if (model.albedo < 0.0 || model.albedo > 1.0)
    out.push_back({"building", "albedo outside [0,1]"});

  std::set<std::string> zone_names;
  for (const Zone& z : model.zones) {
    check_unique(out, "zone", z.name, zone_names);
    const std::string label = "zone '" + z.name + "'";
    if (!(z.volume > 0.0)) out.push_back({label, "volume must be positive"});
    if (z.air_capacitance && !(*z.air_capacitance > 0.0))
      out.push_back({label, "air capacitance must be positive"});
    if (z.mech_extract_flow < 0.0)
      out.push_back({label, "mechanical extract flow must be nonnegative"});
    if (z.mech_balanced_flow < 0.0)
      out.push_back({label, "balanced mechanical flow must be nonnegative"});
    if (z.vapor_gain < 0.0) out.push_back({label, "vapour gain must be nonnegative"});
    for (double g : z.internal_gains)
      if (g < 0.0) {
        out.push_back({label, "internal gains must be nonnegative"});
        break;
      }
  }

  std::set<std::string> wall_names;
  for (const Wall& w : model.walls) {
    check_unique(out, "wall", w.name, wall_names);
    const std::string label = "wall '" + w.name + "'";
    if (!(w.area > 0.0)) out.push_back({label, "area must be positive"});
    if (w.tilt < 0.0 || w.tilt > 180.0)
      out.push_back({label, "tilt outside [0,180]"});
    if (!valid_side(model, w.side_in) || !valid_side(model, w.side_out))
      out.push_back({label, "side refers to an unknown zone"});
    if (w.side_in == kExterior && w.side_out == kExterior)
      out.push_back({label, "both sides exterior"});
    if (w.side_in != kExterior && w.side_in == w.side_out)
      out.push_back({label, "both sides face the same zone"});
    if (w.construction.layers.empty())
      out.push_back({label, "construction has no layers"});
    if (w.construction.nodes_per_layer < 1)
      out.push_back({label, "nodes per layer must be at least 1"});
    for (const Layer& l : w.construction.layers) {
      if (!(l.thickness > 0.0)) out.push_back({label, "layer thickness must be positive"});
      if (!(l.material.conductivity > 0.0))
        out.push_back({label, "layer conductivity must be positive"});
      if (l.material.density < 0.0 || l.material.specific_heat < 0.0)
        out.push_back({label, "layer heat capacity must be nonnegative"});
    }
    if (w.h_ci < 0.0 || w.h_ce < 0.0 || w.h_ri < 0.0 || w.h_re < 0.0)
      out.push_back({label, "film coefficients must be nonnegative"});
    if (w.sw_absorptivity_in < 0.0 || w.sw_absorptivity_in > 1.0 ||
        w.sw_absorptivity_out < 0.0 || w.sw_absorptivity_out > 1.0)
      out.push_back({label, "shortwave absorptivity outside [0,1]"});
  }

  std::set<std::string> glazing_names;
  for (const Glazing& g : model.glazings) {
    check_unique(out, "glazing", g.name, glazing_names);
    const std::string label = "glazing '" + g.name + "'";
    if (!(g.area > 0.0)) out.push_back({label, "area must be positive"});
    if (g.tau0 < 0.0 || g.tau0 > 1.0)
      out.push_back({label, "transmittance outside [0,1]"});
    if (g.u_value < 0.0) out.push_back({label, "U-value must be nonnegative"});
    if (g.tilt < 0.0 || g.tilt > 180.0)
      out.push_back({label, "tilt outside [0,180]"});
    if (!valid_side(model, g.side_in) || !valid_side(model, g.side_out))
      out.push_back({label, "side refers to an unknown zone"});
    if (g.side_in == kExterior && g.side_out == kExterior)
      out.push_back({label, "both sides exterior"});
    if (g.side_in != kExterior && g.side_in == g.side_out)
      out.push_back({label, "both sides face the same zone"});
  }

  std::set<std::string> link_names;
  for (const AirLink& l : model.links) {
    check_unique(out, "link", l.name, link_names);
    const std::string label = "link '" + l.name + "'";
    if (l.aperture < 0.0) out.push_back({label, "aperture must be nonnegative"});
    if (!(l.cd > 0.0)) out.push_back({label, "discharge coefficient must be positive"});
    if (l.kind == LinkKind::Crack && (l.exponent < 0.5 || l.exponent > 1.0))
      out.push_back({label, "flow exponent outside [0.5,1]"});
    if (!valid_side(model, l.from) || !valid_side(model, l.to))
      out.push_back({label, "endpoint refers to an unknown zone"});
    if (l.from == l.to) out.push_back({label, "endpoints coincide"});
    for (double f : l.opening_schedule)
      if (f < 0.0 || f > 1.0) {
        out.push_back({label, "opening schedule outside [0,1]"});
        break;
      }
  }

  if (model.sw_mode == SwDistribution::TargetSurface &&
      (model.sw_target_wall < 0 ||
       model.sw_target_wall >= static_cast<int>(model.walls.size())))
    out.push_back({"building", "shortwave target wall is not a valid wall index"});

  return out;
}

} // namespace mzsim
