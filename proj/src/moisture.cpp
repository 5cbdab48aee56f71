#include "mzsim/moisture.hpp"

#include <cmath>
#include <iostream>

#include <Eigen/Dense>

#include "mzsim/constants.hpp"
#include "mzsim/errors.hpp"

namespace mzsim {

double saturation_pressure(double t_c) {
  // Magnus correlation over liquid water, Pa.
  return 610.94 * std::exp(17.625 * t_c / (t_c + 243.04));
}

double humidity_ratio(double t_c, double rh) {
  const double p_v = rh * saturation_pressure(t_c);
  return 0.622 * p_v / (101325.0 - p_v);
}

double relative_humidity(double t_c, double r) {
  const double p_v = 101325.0 * r / (0.622 + r);
  return p_v / saturation_pressure(t_c);
}

MoistureState step_moisture(const BuildingModel& model, const MoistureState& state,
                            const FlowMatrix& flows, double r_out, double dt_s) {
  const int n = static_cast<int>(model.zones.size());

  // Implicit Euler on C dr/dt = A r + b with a fixed dry-air capacitance
  // 1.2 V per zone, so advection in and out cancels exactly in the mass
  // audit regardless of zone temperature.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int z = 0; z < n; ++z) {
    const double c = kAirDensity * model.zones[z].volume;
    const int idx = FlowMatrix::index_of(z);
    m(z, z) = c / dt_s + flows.total_out_of(idx);
    rhs[z] = c / dt_s * state.r[z] + model.zones[z].vapor_gain;
    for (int other = 0; other < n; ++other) {
      if (other == z) continue;
      const double f = flows.at(FlowMatrix::index_of(other), idx);
      if (f > 0.0) m(z, other) -= f;
    }
    const double f_ext = flows.at(0, idx);
    if (f_ext > 0.0) rhs[z] += f_ext * r_out;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible())
    throw SingularSystemError("moisture balance matrix is singular");
  Eigen::VectorXd r_new = lu.solve(rhs);

  MoistureState out;
  out.r.resize(n);
  for (int z = 0; z < n; ++z) {
    double v = r_new[z];
    if (v < 0.0) {
      std::cerr << "warning: humidity ratio clamped to zero in zone '"
                << model.zones[z].name << "'\n";
      v = 0.0;
    }
    out.r[z] = v;
  }
  return out;
}

double vapour_mass(const BuildingModel& model, const MoistureState& state) {
  double mass = 0.0;
  for (size_t z = 0; z < model.zones.size(); ++z)
    mass += kAirDensity * model.zones[z].volume * state.r[z];
  return mass;
}

} // namespace mzsim
