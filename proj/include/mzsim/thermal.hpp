#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mzsim/airflow.hpp"
#include "mzsim/building.hpp"
#include "mzsim/discretize.hpp"
#include "mzsim/solar.hpp"
#include "mzsim/weather.hpp"

namespace mzsim {

// Flat index space over every temperature unknown: for each wall its node
// chain (inside surface first, outside surface last), then one air node
// per zone, then one radiant mean node per zone. Surface and radiant
// nodes are massless; their rows are algebraic balances.
class NodeRegistry {
public:
  explicit NodeRegistry(const BuildingModel& model);

  int count() const { return count_; }

  int wall_node(int wall, int node) const { return wall_first_[wall] + node; }
  int surface_node(int wall, Face face) const;
  int air_node(int zone) const { return air_first_ + zone; }
  int radiant_node(int zone) const { return radiant_first_ + zone; }

  const WallChain& chain(int wall) const { return chains_[wall]; }

  // Human-readable node label for diagnostics, e.g. "wall south.out",
  // "zone room.air", "zone room.radiant".
  std::string node_name(const BuildingModel& model, int index) const;

private:
  std::vector<int> wall_first_;
  std::vector<WallChain> chains_;
  int air_first_ = 0;
  int radiant_first_ = 0;
  int count_ = 0;
};

struct ThermalState {
  Eigen::VectorXd t;  // degC per node
  double time_h = 0.0;
};

// Uniform initial state (walls, air and radiant nodes all at t_c).
ThermalState uniform_state(const NodeRegistry& reg, double t_c, double time_h = 0.0);

// Linear nodal system C dT/dt = A T + b. Rows with zero capacitance are
// algebraic: 0 = A T + b holds exactly at the new time level.
struct NodalSystem {
  Eigen::VectorXd capacitance;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

struct ThermalInputs {
  WeatherRecord weather;
  double t_sky = 0.0;
  FlowMatrix flows;                     // interzonal + exterior air exchange
  std::vector<SurfaceFlux> surface_fluxes;
  std::vector<double> zone_gains_w;     // convective gains per zone
};

NodalSystem assemble(const BuildingModel& model, const NodeRegistry& reg,
                     const ThermalInputs& inputs);

// One implicit-Euler step: (C/dt - A) T_new = (C/dt) T_old + b.
// Throws SingularSystemError naming a suspect node if the matrix has no
// unique solution.
ThermalState step_thermal(const BuildingModel& model, const NodeRegistry& reg,
                          const NodalSystem& system, const ThermalState& state,
                          double dt_s);

// Conductive flux into the wall at the given face, W, positive entering
// the wall from that side's surface node.
double wall_conductive_flux(const NodeRegistry& reg, const ThermalState& state,
                            const BuildingModel& model, int wall, Face face);

// Residual of the radiant-mean balance for one zone at the current state,
// W (sum of h_ri A_j (T_sj - T_rm) over the zone's faces).
double radiant_balance_residual(const BuildingModel& model, const NodeRegistry& reg,
                                const ThermalState& state, int zone);

} // namespace mzsim
