#pragma once

#include <iosfwd>
#include <vector>

#include "mzsim/building.hpp"
#include "mzsim/weather.hpp"

namespace mzsim {

// Signed interzonal mass flows, (N+1)x(N+1) with row/column 0 = exterior.
// Entry (i,j) is the flow from node i to node j, kg/s, always >= 0; a
// single link contributes to one direction only, but opposite entries can
// both be nonzero when different links carry opposite flows.
class FlowMatrix {
public:
  FlowMatrix() = default;
  explicit FlowMatrix(int zone_count)
      : n_(zone_count + 1), m_(static_cast<size_t>(n_) * n_, 0.0) {}

  int size() const { return n_; }
  int zone_count() const { return n_ - 1; }

  static int index_of(int zone_or_exterior) { return zone_or_exterior + 1; }

  double at(int i, int j) const { return m_[static_cast<size_t>(i) * n_ + j]; }
  double& at(int i, int j) { return m_[static_cast<size_t>(i) * n_ + j]; }

  // Accumulates a signed link flow (positive from -> to).
  void add_flow(int from_index, int to_index, double kg_s);

  double total_into(int index) const;
  double total_out_of(int index) const;

private:
  int n_ = 0;
  std::vector<double> m_;
};

// Ideal-gas dry air density at standard pressure, kg/m3.
double air_density(double t_c);

struct LinkEnvironment {
  double p_from = 0.0;      // Pa, reference pressure on the from side
  double p_to = 0.0;
  double t_from = 20.0;     // degC, air on the from side
  double t_to = 20.0;
  double wind_speed = 0.0;  // m/s
  double wind_dir = 0.0;    // deg
  double elevation = 0.0;   // m, link height above the site datum
};

// Stack + wind pressure difference across the link, Pa, positive pushing
// from -> to. The wind term applies on an exterior endpoint only.
double link_dp(const AirLink& link, const LinkEnvironment& env);

// Wind pressure coefficient from the facade-to-wind angle:
// +0.6 windward (within 60 deg), -0.3 leeward (beyond 120 deg),
// -0.5 parallel, unless the link carries an override.
double wind_pressure_coefficient(const AirLink& link, double wind_dir_deg);

// Signed mass flow through the link for a given pressure difference.
// Crack: m = sign(dp) * Cd * S*f * |dp|^n  (Cd carries empirical units).
// Opening: m = sign(dp) * Cd * S*f * sqrt(2 * rho_upwind * |dp|).
double link_flow(const AirLink& link, double dp, double rho_upwind,
                 double opening_fraction);

struct PressureState {
  std::vector<double> p;  // Pa per zone, relative to the exterior datum
};

struct IterationTraceRow {
  int iteration;
  double residual_norm;
  double relaxation;
};

struct AirflowSolution {
  PressureState pressures;
  FlowMatrix flows;
  std::vector<double> link_flows;  // signed per model link, zero when closed
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<IterationTraceRow> trace;
};

// Solves the zone-pressure mass balance with under-relaxed Newton-Raphson
// (omega = 0.75, halved while a step would increase the residual norm,
// forward-difference Jacobian). Zones with no active link are pinned to
// p = 0; their mechanical flows appear in the matrix as balanced pairs.
// Throws AirflowSolverError after 200 iterations without convergence.
AirflowSolution solve_pressures(const BuildingModel& model,
                                const std::vector<double>& zone_temps,
                                const WeatherRecord& weather, double hour_of_day);

// Residual of the converged balance for one zone, kg/s (diagnostics).
double zone_mass_residual(const BuildingModel& model, const FlowMatrix& flows, int zone);

void write_trace_csv(std::ostream& out, const std::vector<IterationTraceRow>& trace);

} // namespace mzsim
