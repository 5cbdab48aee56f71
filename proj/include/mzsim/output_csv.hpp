#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mzsim/engine.hpp"

namespace mzsim {

// Deterministic CSV serialization: %.10g everywhere, LF line ends, no
// timestamps or locale-dependent formatting.
std::string format_number(double v);

// Writes time_h and t_ae_c plus the selected column groups (zone_t,
// zone_r, surface_t, wall_flux, link_flow, link_power, diagnostics).
// An empty selection writes everything. Unknown group names throw
// std::invalid_argument.
void write_output_csv(std::ostream& out, const OutputSeries& series,
                      const std::vector<std::string>& selection = {});

} // namespace mzsim
