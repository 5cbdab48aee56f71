#include "mzsim/building_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mzsim/constants.hpp"
#include "mzsim/errors.hpp"

namespace mzsim {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& source, const std::string& where,
                       const std::string& msg) {
  throw ParseError(source + ": " + where + ": " + msg);
}

void check_keys(const Json& obj, const std::string& source, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end())
      fail(source, where, "unknown key '" + item.key() + "'");
  }
}

double require_number(const Json& obj, const std::string& source,
                      const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(source, where, std::string("missing '") + key + "'");
  if (!obj[key].is_number())
    fail(source, where, std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

double number_or(const Json& obj, const std::string& source, const std::string& where,
                 const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    fail(source, where, std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

std::string require_string(const Json& obj, const std::string& source,
                           const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(source, where, std::string("missing '") + key + "'");
  if (!obj[key].is_string())
    fail(source, where, std::string("'") + key + "' must be a string");
  return obj[key].get<std::string>();
}

Schedule parse_schedule(const Json& v, const std::string& source,
                        const std::string& where, const char* key) {
  if (v.is_number()) return constant_schedule(v.get<double>());
  if (v.is_array()) {
    if (v.size() != 24)
      fail(source, where, std::string("'") + key + "' must list 24 hourly values");
    Schedule s;
    for (int h = 0; h < 24; ++h) {
      if (!v[h].is_number())
        fail(source, where, std::string("'") + key + "' entries must be numbers");
      s[h] = v[h].get<double>();
    }
    return s;
  }
  fail(source, where, std::string("'") + key + "' must be a number or 24-entry array");
}

// Unknown names resolve to an out-of-range index so that validation, not
// parsing, reports them.
int resolve_side(const std::string& name, const std::map<std::string, int>& zones) {
  if (name == "exterior") return kExterior;
  auto it = zones.find(name);
  return it == zones.end() ? -2 : it->second;
}

Json schedule_json(const Schedule& s) {
  const bool flat = std::all_of(s.begin(), s.end(), [&](double v) { return v == s[0]; });
  if (flat) return s[0];
  return Json(s);
}

std::string side_name(const BuildingModel& m, int side) {
  return side == kExterior ? "exterior" : m.zones[side].name;
}

} // namespace

BuildingModel parse_building(std::istream& in, const std::string& source_name) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(source_name + ": " + e.what());
  }
  if (!j.is_object()) fail(source_name, "top level", "expected an object");
  check_keys(j, source_name, "top level",
             {"zones", "walls", "glazings", "links", "albedo", "sw_distribution",
              "sw_target_wall"});

  BuildingModel m;
  if (!j.contains("zones") || !j["zones"].is_array())
    fail(source_name, "top level", "missing 'zones' array");

  std::map<std::string, int> zone_index;
  for (const Json& jz : j["zones"]) {
    const std::string where = "zones[" + std::to_string(m.zones.size()) + "]";
    if (!jz.is_object()) fail(source_name, where, "expected an object");
    check_keys(jz, source_name, where,
               {"name", "volume", "air_capacitance", "internal_gains",
                "mech_extract_flow", "mech_balanced_flow", "vapor_gain",
                "reference_height"});
    Zone z;
    z.name = require_string(jz, source_name, where, "name");
    z.volume = require_number(jz, source_name, where, "volume");
    if (jz.contains("air_capacitance"))
      z.air_capacitance = require_number(jz, source_name, where, "air_capacitance");
    if (jz.contains("internal_gains"))
      z.internal_gains =
          parse_schedule(jz["internal_gains"], source_name, where, "internal_gains");
    z.mech_extract_flow = number_or(jz, source_name, where, "mech_extract_flow", 0.0);
    z.mech_balanced_flow =
        number_or(jz, source_name, where, "mech_balanced_flow", 0.0);
    z.vapor_gain = number_or(jz, source_name, where, "vapor_gain", 0.0);
    z.reference_height = number_or(jz, source_name, where, "reference_height", 0.0);
    zone_index.emplace(z.name, static_cast<int>(m.zones.size()));
    m.zones.push_back(std::move(z));
  }

  if (j.contains("walls")) {
    if (!j["walls"].is_array()) fail(source_name, "walls", "expected an array");
    for (const Json& jw : j["walls"]) {
      const std::string where = "walls[" + std::to_string(m.walls.size()) + "]";
      if (!jw.is_object()) fail(source_name, where, "expected an object");
      check_keys(jw, source_name, where,
                 {"name", "layers", "nodes_per_layer", "area", "tilt", "azimuth",
                  "side_in", "side_out", "sw_absorptivity_in", "sw_absorptivity_out",
                  "h_ci", "h_ce", "h_ri", "h_re"});
      Wall w;
      w.name = require_string(jw, source_name, where, "name");
      if (!jw.contains("layers") || !jw["layers"].is_array())
        fail(source_name, where, "missing 'layers' array");
      for (const Json& jl : jw["layers"]) {
        const std::string lw = where + ".layers";
        if (!jl.is_object()) fail(source_name, lw, "expected an object");
        check_keys(jl, source_name, lw,
                   {"conductivity", "density", "specific_heat", "thickness"});
        Layer layer;
        layer.material.conductivity = require_number(jl, source_name, lw, "conductivity");
        layer.material.density = require_number(jl, source_name, lw, "density");
        layer.material.specific_heat =
            require_number(jl, source_name, lw, "specific_heat");
        layer.thickness = require_number(jl, source_name, lw, "thickness");
        w.construction.layers.push_back(layer);
      }
      w.construction.nodes_per_layer = static_cast<int>(
          number_or(jw, source_name, where, "nodes_per_layer", 1.0));
      w.area = number_or(jw, source_name, where, "area", 1.0);
      w.tilt = number_or(jw, source_name, where, "tilt", 90.0);
      w.azimuth = number_or(jw, source_name, where, "azimuth", 0.0);
      w.side_in =
          resolve_side(require_string(jw, source_name, where, "side_in"), zone_index);
      w.side_out =
          resolve_side(require_string(jw, source_name, where, "side_out"), zone_index);
      w.sw_absorptivity_in =
          number_or(jw, source_name, where, "sw_absorptivity_in", 0.3);
      w.sw_absorptivity_out =
          number_or(jw, source_name, where, "sw_absorptivity_out", 0.3);
      w.h_ci = number_or(jw, source_name, where, "h_ci", 3.0);
      w.h_ce = number_or(jw, source_name, where, "h_ce", 15.0);
      w.h_ri = number_or(jw, source_name, where, "h_ri", 5.0);
      w.h_re = number_or(jw, source_name, where, "h_re", 5.0);
      m.walls.push_back(std::move(w));
    }
  }

  if (j.contains("glazings")) {
    if (!j["glazings"].is_array()) fail(source_name, "glazings", "expected an array");
    for (const Json& jg : j["glazings"]) {
      const std::string where = "glazings[" + std::to_string(m.glazings.size()) + "]";
      if (!jg.is_object()) fail(source_name, where, "expected an object");
      check_keys(jg, source_name, where,
                 {"name", "area", "tau0", "u_value", "tilt", "azimuth", "side_in",
                  "side_out", "emissivity_out", "angular"});
      Glazing g;
      g.name = require_string(jg, source_name, where, "name");
      g.area = number_or(jg, source_name, where, "area", 1.0);
      g.tau0 = number_or(jg, source_name, where, "tau0", 0.85);
      g.u_value = number_or(jg, source_name, where, "u_value", 5.8);
      g.tilt = number_or(jg, source_name, where, "tilt", 90.0);
      g.azimuth = number_or(jg, source_name, where, "azimuth", 0.0);
      g.side_in =
          resolve_side(require_string(jg, source_name, where, "side_in"), zone_index);
      g.side_out =
          resolve_side(require_string(jg, source_name, where, "side_out"), zone_index);
      g.emissivity_out = number_or(jg, source_name, where, "emissivity_out", 0.9);
      if (jg.contains("angular")) {
        const std::string a = require_string(jg, source_name, where, "angular");
        if (a == "constant")
          g.angular = AngularModel::Constant;
        else if (a == "cosine_modifier")
          g.angular = AngularModel::CosineModifier;
        else
          fail(source_name, where, "unknown angular model '" + a + "'");
      }
      m.glazings.push_back(std::move(g));
    }
  }

  if (j.contains("links")) {
    if (!j["links"].is_array()) fail(source_name, "links", "expected an array");
    for (const Json& jl : j["links"]) {
      const std::string where = "links[" + std::to_string(m.links.size()) + "]";
      if (!jl.is_object()) fail(source_name, where, "expected an object");
      check_keys(jl, source_name, where,
                 {"name", "kind", "cd", "exponent", "aperture", "height", "from",
                  "to", "facade_azimuth", "cp_override", "opening_schedule"});
      AirLink l;
      l.name = require_string(jl, source_name, where, "name");
      if (jl.contains("kind")) {
        const std::string k = require_string(jl, source_name, where, "kind");
        if (k == "crack")
          l.kind = LinkKind::Crack;
        else if (k == "opening")
          l.kind = LinkKind::Opening;
        else
          fail(source_name, where, "unknown link kind '" + k + "'");
      }
      l.cd = number_or(jl, source_name, where, "cd", 0.6);
      l.exponent = number_or(jl, source_name, where, "exponent", 0.65);
      l.aperture = number_or(jl, source_name, where, "aperture", 0.0);
      l.height = number_or(jl, source_name, where, "height", 0.0);
      l.from = resolve_side(require_string(jl, source_name, where, "from"), zone_index);
      l.to = resolve_side(require_string(jl, source_name, where, "to"), zone_index);
      l.facade_azimuth = number_or(jl, source_name, where, "facade_azimuth", 0.0);
      if (jl.contains("cp_override"))
        l.cp_override = require_number(jl, source_name, where, "cp_override");
      if (jl.contains("opening_schedule"))
        l.opening_schedule = parse_schedule(jl["opening_schedule"], source_name, where,
                                            "opening_schedule");
      m.links.push_back(std::move(l));
    }
  }

  m.albedo = number_or(j, source_name, "top level", "albedo", 0.3);
  if (j.contains("sw_distribution")) {
    const std::string d = require_string(j, source_name, "top level", "sw_distribution");
    if (d == "floor")
      m.sw_mode = SwDistribution::Floor;
    else if (d == "target_surface")
      m.sw_mode = SwDistribution::TargetSurface;
    else
      fail(source_name, "top level", "unknown sw_distribution '" + d + "'");
  }
  if (j.contains("sw_target_wall")) {
    const std::string t = require_string(j, source_name, "top level", "sw_target_wall");
    m.sw_target_wall = -1;
    for (size_t wi = 0; wi < m.walls.size(); ++wi)
      if (m.walls[wi].name == t) m.sw_target_wall = static_cast<int>(wi);
    if (m.sw_target_wall < 0)
      fail(source_name, "top level", "sw_target_wall '" + t + "' is not a wall");
  }
  return m;
}

BuildingModel load_building(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open building file '" + path + "'");
  const auto slash = path.find_last_of('/');
  return parse_building(in, slash == std::string::npos ? path : path.substr(slash + 1));
}

void write_building(std::ostream& out, const BuildingModel& m) {
  Json j;
  j["zones"] = Json::array();
  for (const Zone& z : m.zones) {
    Json jz;
    jz["name"] = z.name;
    jz["volume"] = z.volume;
    if (z.air_capacitance) jz["air_capacitance"] = *z.air_capacitance;
    jz["internal_gains"] = schedule_json(z.internal_gains);
    jz["mech_extract_flow"] = z.mech_extract_flow;
    jz["mech_balanced_flow"] = z.mech_balanced_flow;
    jz["vapor_gain"] = z.vapor_gain;
    jz["reference_height"] = z.reference_height;
    j["zones"].push_back(jz);
  }
  j["walls"] = Json::array();
  for (const Wall& w : m.walls) {
    Json jw;
    jw["name"] = w.name;
    jw["layers"] = Json::array();
    for (const Layer& l : w.construction.layers) {
      Json jl;
      jl["conductivity"] = l.material.conductivity;
      jl["density"] = l.material.density;
      jl["specific_heat"] = l.material.specific_heat;
      jl["thickness"] = l.thickness;
      jw["layers"].push_back(jl);
    }
    jw["nodes_per_layer"] = w.construction.nodes_per_layer;
    jw["area"] = w.area;
    jw["tilt"] = w.tilt;
    jw["azimuth"] = w.azimuth;
    jw["side_in"] = side_name(m, w.side_in);
    jw["side_out"] = side_name(m, w.side_out);
    jw["sw_absorptivity_in"] = w.sw_absorptivity_in;
    jw["sw_absorptivity_out"] = w.sw_absorptivity_out;
    jw["h_ci"] = w.h_ci;
    jw["h_ce"] = w.h_ce;
    jw["h_ri"] = w.h_ri;
    jw["h_re"] = w.h_re;
    j["walls"].push_back(jw);
  }
  j["glazings"] = Json::array();
  for (const Glazing& g : m.glazings) {
    Json jg;
    jg["name"] = g.name;
    jg["area"] = g.area;
    jg["tau0"] = g.tau0;
    jg["u_value"] = g.u_value;
    jg["tilt"] = g.tilt;
    jg["azimuth"] = g.azimuth;
    jg["side_in"] = side_name(m, g.side_in);
    jg["side_out"] = side_name(m, g.side_out);
    jg["emissivity_out"] = g.emissivity_out;
    jg["angular"] =
        g.angular == AngularModel::Constant ? "constant" : "cosine_modifier";
    j["glazings"].push_back(jg);
  }
  j["links"] = Json::array();
  for (const AirLink& l : m.links) {
    Json jl;
    jl["name"] = l.name;
    jl["kind"] = l.kind == LinkKind::Crack ? "crack" : "opening";
    jl["cd"] = l.cd;
    if (l.kind == LinkKind::Crack) jl["exponent"] = l.exponent;
    jl["aperture"] = l.aperture;
    jl["height"] = l.height;
    jl["from"] = side_name(m, l.from);
    jl["to"] = side_name(m, l.to);
    jl["facade_azimuth"] = l.facade_azimuth;
    if (l.cp_override) jl["cp_override"] = *l.cp_override;
    jl["opening_schedule"] = schedule_json(l.opening_schedule);
    j["links"].push_back(jl);
  }
  j["albedo"] = m.albedo;
  j["sw_distribution"] =
      m.sw_mode == SwDistribution::Floor ? "floor" : "target_surface";
  if (m.sw_mode == SwDistribution::TargetSurface && m.sw_target_wall >= 0 &&
      m.sw_target_wall < static_cast<int>(m.walls.size()))
    j["sw_target_wall"] = m.walls[m.sw_target_wall].name;

  out << j.dump(2) << "\n";
}

void save_building(const std::string& path, const BuildingModel& model) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write building file '" + path + "'");
  write_building(out, model);
}

} // namespace mzsim
