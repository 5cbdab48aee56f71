#pragma once

#include <vector>

#include "mzsim/airflow.hpp"
#include "mzsim/building.hpp"

namespace mzsim {

// Humidity ratio per zone, kg water vapour per kg dry air.
struct MoistureState {
  std::vector<double> r;
};

// Saturation vapour pressure over liquid water, Pa (Magnus form).
double saturation_pressure(double t_c);

// Humidity ratio from relative humidity (0..1) at temperature t_c.
double humidity_ratio(double t_c, double rh);

// Relative humidity (0..1) from humidity ratio at temperature t_c.
double relative_humidity(double t_c, double r);

// One implicit-Euler step of the zone vapour balance:
//   1.2 V_i dr_i/dt = sum_k m[k,i] (r_k - r_i) + vapour gain_i.
// Incoming flows use the upstream humidity (exterior uses r_out); the
// matching outflow leaves at the zone's own humidity. Negative results
// are clamped to zero with a warning on stderr.
MoistureState step_moisture(const BuildingModel& model, const MoistureState& state,
                            const FlowMatrix& flows, double r_out, double dt_s);

// Total vapour mass held by the zone air, kg (conservation audits).
double vapour_mass(const BuildingModel& model, const MoistureState& state);

} // namespace mzsim
