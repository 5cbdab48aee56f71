#pragma once

#include <vector>

#include "mzsim/building.hpp"

namespace mzsim {

// One-dimensional node chain for wall conduction, per unit area.
// Node 0 is the inside surface, node size()-1 the outside surface; both are
// massless unless a sub-millimeter layer was merged into them. Interior
// nodes sit at slice centers, nodes_per_layer slices per layer.
struct WallChain {
  std::vector<double> capacitance;  // J/(K m2), one per node
  std::vector<double> conductance;  // W/(K m2), between node i and i+1

  int node_count() const { return static_cast<int>(capacitance.size()); }
  int surface_in() const { return 0; }
  int surface_out() const { return node_count() - 1; }

  double total_capacitance() const;  // sum over nodes
  double total_resistance() const;   // series sum, m2 K / W
};

// Builds the chain. Throws std::invalid_argument on a non-positive
// thickness or an empty layer list.
WallChain discretize_wall(const WallConstruction& construction);

// Series conduction resistance sum(e_i / k_i), m2 K / W.
double construction_resistance(const WallConstruction& construction);

// Air-to-air transmittance 1/U = 1/h_ci + sum(e/k) + 1/h_ce.
// A zero film coefficient drops that film term.
double wall_u_value(const Wall& wall);

} // namespace mzsim
