#include "mzsim/thermal.hpp"

#include <cmath>

#include "mzsim/constants.hpp"
#include "mzsim/errors.hpp"

namespace mzsim {

NodeRegistry::NodeRegistry(const BuildingModel& model) {
  int next = 0;
  for (const Wall& w : model.walls) {
    chains_.push_back(discretize_wall(w.construction));
    wall_first_.push_back(next);
    next += chains_.back().node_count();
  }
  air_first_ = next;
  next += static_cast<int>(model.zones.size());
  radiant_first_ = next;
  next += static_cast<int>(model.zones.size());
  count_ = next;
}

int NodeRegistry::surface_node(int wall, Face face) const {
  const WallChain& c = chains_[wall];
  return wall_first_[wall] + (face == Face::In ? c.surface_in() : c.surface_out());
}

std::string NodeRegistry::node_name(const BuildingModel& model, int index) const {
  if (index >= radiant_first_)
    return "zone " + model.zones[index - radiant_first_].name + ".radiant";
  if (index >= air_first_)
    return "zone " + model.zones[index - air_first_].name + ".air";
  for (size_t w = 0; w < wall_first_.size(); ++w) {
    const int first = wall_first_[w];
    const int count = chains_[w].node_count();
    if (index < first + count) {
      const int local = index - first;
      if (local == chains_[w].surface_in()) return "wall " + model.walls[w].name + ".in";
      if (local == chains_[w].surface_out())
        return "wall " + model.walls[w].name + ".out";
      return "wall " + model.walls[w].name + ".n" + std::to_string(local);
    }
  }
  return "node " + std::to_string(index);
}

ThermalState uniform_state(const NodeRegistry& reg, double t_c, double time_h) {
  ThermalState s;
  s.t = Eigen::VectorXd::Constant(reg.count(), t_c);
  s.time_h = time_h;
  return s;
}

namespace {

// Couples node i to node j with conductance k (W/K).
void couple(NodalSystem& sys, int i, int j, double k) {
  sys.a(i, i) -= k;
  sys.a(i, j) += k;
}

// Couples node i to a prescribed temperature with conductance k.
void couple_fixed(NodalSystem& sys, int i, double k, double t_fixed) {
  sys.a(i, i) -= k;
  sys.b(i) += k * t_fixed;
}

} // namespace

NodalSystem assemble(const BuildingModel& model, const NodeRegistry& reg,
                     const ThermalInputs& inputs) {
  const int n = reg.count();
  const int zones = static_cast<int>(model.zones.size());
  NodalSystem sys;
  sys.capacitance = Eigen::VectorXd::Zero(n);
  sys.a = Eigen::MatrixXd::Zero(n, n);
  sys.b = Eigen::VectorXd::Zero(n);

  const double t_ae = inputs.weather.t_ae;

  // Wall chains: capacitances, internal conduction, and both surface
  // balances (film exchange with the bordering air and radiant nodes, or
  // with the outside air and sky).
  for (int wi = 0; wi < static_cast<int>(model.walls.size()); ++wi) {
    const Wall& wall = model.walls[wi];
    const WallChain& chain = reg.chain(wi);
    const double area = wall.area;

    for (int node = 0; node < chain.node_count(); ++node)
      sys.capacitance[reg.wall_node(wi, node)] = chain.capacitance[node] * area;
    for (int node = 0; node + 1 < chain.node_count(); ++node) {
      const double k = chain.conductance[node] * area;
      const int a = reg.wall_node(wi, node);
      const int b = reg.wall_node(wi, node + 1);
      couple(sys, a, b, k);
      couple(sys, b, a, k);
    }

    for (Face face : {Face::In, Face::Out}) {
      const int surf = reg.surface_node(wi, face);
      const int boundary = face_boundary(wall, face);
      const double h_c = face_h_conv(wall, face) * area;
      const double h_r = face_h_rad(wall, face) * area;

      if (boundary == kExterior) {
        if (h_c > 0.0) couple_fixed(sys, surf, h_c, t_ae);
        if (h_r > 0.0) {
          // Downward-looking faces see the ground, not the sky vault.
          const bool sees_sky = face_tilt(wall, face) < 180.0 - 1e-9;
          couple_fixed(sys, surf, h_r, sees_sky ? inputs.t_sky : t_ae);
        }
      } else {
        if (h_c > 0.0) {
          couple(sys, surf, reg.air_node(boundary), h_c);
          // The matching air-side term keeps the exchange energy-neutral.
          couple(sys, reg.air_node(boundary), surf, h_c);
        }
        if (h_r > 0.0) {
          couple(sys, surf, reg.radiant_node(boundary), h_r);
          couple(sys, reg.radiant_node(boundary), surf, h_r);
        }
      }
    }
  }

  // Absorbed shortwave lands on surface nodes as a source term.
  for (const SurfaceFlux& f : inputs.surface_fluxes)
    sys.b[reg.surface_node(f.wall, f.face)] += f.power_w;

  // Glazings: a massless air-to-air conductance.
  for (const Glazing& g : model.glazings) {
    const double ua = g.u_value * g.area;
    if (ua <= 0.0) continue;
    const bool in_ext = g.side_in == kExterior;
    const bool out_ext = g.side_out == kExterior;
    if (in_ext && out_ext) continue;
    if (!in_ext && !out_ext) {
      couple(sys, reg.air_node(g.side_in), reg.air_node(g.side_out), ua);
      couple(sys, reg.air_node(g.side_out), reg.air_node(g.side_in), ua);
    } else {
      const int zone = in_ext ? g.side_out : g.side_in;
      couple_fixed(sys, reg.air_node(zone), ua, t_ae);
    }
  }

  // Zone air: thermal mass, advection from incoming flows, gains.
  for (int z = 0; z < zones; ++z) {
    const int air = reg.air_node(z);
    sys.capacitance[air] = model.zones[z].effective_air_capacitance();
    if (z < static_cast<int>(inputs.zone_gains_w.size()))
      sys.b[air] += inputs.zone_gains_w[z];

    if (inputs.flows.size() > 0) {
      const int idx = FlowMatrix::index_of(z);
      for (int src = kExterior; src < zones; ++src) {
        if (src == z) continue;
        const double f = inputs.flows.at(FlowMatrix::index_of(src), idx);
        if (f <= 0.0) continue;
        const double cap_rate = kAirSpecificHeat * f;
        if (src == kExterior)
          couple_fixed(sys, air, cap_rate, t_ae);
        else
          couple(sys, air, reg.air_node(src), cap_rate);
      }
    }
  }

  // Radiant mean nodes: zero-sum exchange balance over the zone's faces,
  // or a direct tie to the zone air when nothing radiates there.
  for (int z = 0; z < zones; ++z) {
    const int rm = reg.radiant_node(z);
    if (sys.a(rm, rm) == 0.0) couple(sys, rm, reg.air_node(z), 1.0);
  }

  return sys;
}

ThermalState step_thermal(const BuildingModel& model, const NodeRegistry& reg,
                          const NodalSystem& system, const ThermalState& state,
                          double dt_s) {
  const int n = reg.count();
  Eigen::MatrixXd m = -system.a;
  Eigen::VectorXd rhs = system.b;
  for (int i = 0; i < n; ++i) {
    const double c_dt = system.capacitance[i] / dt_s;
    m(i, i) += c_dt;
    rhs[i] += c_dt * state.t[i];
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) {
    // Point at the node dominating the null space; usually a surface with
    // every film coefficient zeroed out.
    std::string suspect = "unknown node";
    Eigen::MatrixXd kernel = lu.kernel();
    if (kernel.cols() > 0) {
      int worst = 0;
      kernel.col(0).cwiseAbs().maxCoeff(&worst);
      suspect = reg.node_name(model, worst);
    }
    throw SingularSystemError("thermal system is singular near " + suspect);
  }

  ThermalState next;
  next.t = lu.solve(rhs);
  next.time_h = state.time_h + dt_s / 3600.0;
  return next;
}

double wall_conductive_flux(const NodeRegistry& reg, const ThermalState& state,
                            const BuildingModel& model, int wall, Face face) {
  const WallChain& chain = reg.chain(wall);
  const double area = model.walls[wall].area;
  if (face == Face::In) {
    const double k = chain.conductance.front() * area;
    return k * (state.t[reg.wall_node(wall, 0)] - state.t[reg.wall_node(wall, 1)]);
  }
  const int last = chain.surface_out();
  const double k = chain.conductance.back() * area;
  return k * (state.t[reg.wall_node(wall, last)] -
              state.t[reg.wall_node(wall, last - 1)]);
}

double radiant_balance_residual(const BuildingModel& model, const NodeRegistry& reg,
                                const ThermalState& state, int zone) {
  double sum = 0.0;
  const double t_rm = state.t[reg.radiant_node(zone)];
  for (int wi = 0; wi < static_cast<int>(model.walls.size()); ++wi)
    for (Face face : {Face::In, Face::Out}) {
      const Wall& w = model.walls[wi];
      if (face_boundary(w, face) != zone) continue;
      const double h = face_h_rad(w, face);
      if (h <= 0.0) continue;
      sum += h * w.area * (state.t[reg.surface_node(wi, face)] - t_rm);
    }
  return sum;
}

} // namespace mzsim
