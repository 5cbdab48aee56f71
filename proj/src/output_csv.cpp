#include "mzsim/output_csv.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mzsim {

namespace {

const char* const kGroups[] = {"zone_t",    "zone_r",     "surface_t",  "wall_flux",
                               "link_flow", "link_power", "diagnostics"};

bool selected(const std::vector<std::string>& selection, const char* group) {
  if (selection.empty()) return true;
  return std::find(selection.begin(), selection.end(), group) != selection.end();
}

} // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_output_csv(std::ostream& out, const OutputSeries& series,
                      const std::vector<std::string>& selection) {
  for (const std::string& s : selection)
    if (std::none_of(std::begin(kGroups), std::end(kGroups),
                     [&](const char* g) { return s == g; }))
      throw std::invalid_argument("unknown output group '" + s + "'");

  out << "time_h,t_ae_c";
  if (selected(selection, "zone_t"))
    for (const std::string& z : series.zone_names) out << ",t_" << z << "_c";
  if (selected(selection, "zone_r"))
    for (const std::string& z : series.zone_names) out << ",r_" << z << "_kgkg";
  if (selected(selection, "surface_t"))
    for (const std::string& w : series.wall_names)
      out << ",ts_in_" << w << "_c,ts_out_" << w << "_c";
  if (selected(selection, "wall_flux"))
    for (const std::string& w : series.wall_names) out << ",flux_in_" << w << "_w";
  if (selected(selection, "link_flow"))
    for (const std::string& l : series.link_names) out << ",flow_" << l << "_kgs";
  if (selected(selection, "link_power"))
    for (const std::string& l : series.link_names) out << ",power_" << l << "_w";
  if (selected(selection, "diagnostics"))
    out << ",radiant_residual_w,airflow_iters,coupling_iters";
  out << "\n";

  for (const StepRecord& row : series.rows) {
    out << format_number(row.time_h) << ',' << format_number(row.t_ae);
    if (selected(selection, "zone_t"))
      for (double v : row.zone_t) out << ',' << format_number(v);
    if (selected(selection, "zone_r"))
      for (double v : row.zone_r) out << ',' << format_number(v);
    if (selected(selection, "surface_t"))
      for (size_t w = 0; w < row.surface_t_in.size(); ++w)
        out << ',' << format_number(row.surface_t_in[w]) << ','
            << format_number(row.surface_t_out[w]);
    if (selected(selection, "wall_flux"))
      for (double v : row.wall_flux_in_w) out << ',' << format_number(v);
    if (selected(selection, "link_flow"))
      for (double v : row.link_flow) out << ',' << format_number(v);
    if (selected(selection, "link_power"))
      for (double v : row.link_power_w) out << ',' << format_number(v);
    if (selected(selection, "diagnostics"))
      out << ',' << format_number(row.radiant_residual_w) << ','
          << row.airflow_iterations << ',' << row.coupling_iterations;
    out << "\n";
  }
}

} // namespace mzsim
