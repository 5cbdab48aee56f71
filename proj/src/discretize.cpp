#include "mzsim/discretize.hpp"

#include <numeric>
#include <stdexcept>

namespace mzsim {

namespace {

// Layers thinner than this carry negligible mass and would produce stiff
// near-zero-capacitance nodes; they are folded into the neighbouring node
// as pure series resistance.
constexpr double kThinLayerM = 1e-3;

} // namespace

double WallChain::total_capacitance() const {
  return std::accumulate(capacitance.begin(), capacitance.end(), 0.0);
}

double WallChain::total_resistance() const {
  double r = 0.0;
  for (double g : conductance) r += 1.0 / g;
  return r;
}

double construction_resistance(const WallConstruction& construction) {
  double r = 0.0;
  for (const Layer& l : construction.layers)
    r += l.thickness / l.material.conductivity;
  return r;
}

double wall_u_value(const Wall& wall) {
  double r = construction_resistance(wall.construction);
  if (wall.h_ci > 0.0) r += 1.0 / wall.h_ci;
  if (wall.h_ce > 0.0) r += 1.0 / wall.h_ce;
  return 1.0 / r;
}

WallChain discretize_wall(const WallConstruction& construction) {
  if (construction.layers.empty())
    throw std::invalid_argument("wall construction has no layers");
  if (construction.nodes_per_layer < 1)
    throw std::invalid_argument("nodes per layer must be at least 1");

  WallChain chain;
  chain.capacitance.push_back(0.0);  // inside surface

  // Resistance accumulated since the last node, and capacitance from thin
  // layers waiting for the next mass node.
  double pending_r = 0.0;
  double pending_c = 0.0;

  for (const Layer& l : construction.layers) {
    if (!(l.thickness > 0.0))
      throw std::invalid_argument("layer thickness must be positive");
    if (!(l.material.conductivity > 0.0))
      throw std::invalid_argument("layer conductivity must be positive");

    if (l.thickness < kThinLayerM) {
      double c = l.material.density * l.material.specific_heat * l.thickness;
      if (chain.node_count() > 1 && pending_r == 0.0) {
        // Directly after a mass node: fold into it.
        chain.capacitance.back() += c;
      } else {
        pending_c += c;
      }
      pending_r += l.thickness / l.material.conductivity;
      continue;
    }

    const double slice_e = l.thickness / construction.nodes_per_layer;
    const double slice_c = l.material.density * l.material.specific_heat * slice_e;
    const double half_r = 0.5 * slice_e / l.material.conductivity;
    for (int i = 0; i < construction.nodes_per_layer; ++i) {
      chain.conductance.push_back(1.0 / (pending_r + half_r));
      chain.capacitance.push_back(slice_c + pending_c);
      pending_c = 0.0;
      pending_r = half_r;
    }
  }

  // Close the chain at the outside surface.
  chain.capacitance.push_back(pending_c);
  pending_c = 0.0;
  if (pending_r == 0.0)
    throw std::invalid_argument("wall construction has zero thickness");
  chain.conductance.push_back(1.0 / pending_r);
  return chain;
}

} // namespace mzsim
