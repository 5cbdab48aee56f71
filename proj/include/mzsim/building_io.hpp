#pragma once

#include <iosfwd>
#include <string>

#include "mzsim/building.hpp"

namespace mzsim {

// JSON round-trip of a building description. Unknown keys are rejected;
// parse errors name the offending component. Schema top level: zones,
// walls, glazings, links, albedo, sw_distribution, sw_target_wall.
BuildingModel load_building(const std::string& path);
BuildingModel parse_building(std::istream& in, const std::string& source_name);

void save_building(const std::string& path, const BuildingModel& model);
void write_building(std::ostream& out, const BuildingModel& model);

} // namespace mzsim
