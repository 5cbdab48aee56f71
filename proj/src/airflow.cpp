#include "mzsim/airflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <Eigen/Dense>

#include "mzsim/constants.hpp"
#include "mzsim/errors.hpp"

namespace mzsim {

void FlowMatrix::add_flow(int from_index, int to_index, double kg_s) {
  if (kg_s >= 0.0)
    at(from_index, to_index) += kg_s;
  else
    at(to_index, from_index) -= kg_s;
}

double FlowMatrix::total_into(int index) const {
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) sum += at(i, index);
  return sum;
}

double FlowMatrix::total_out_of(int index) const {
  double sum = 0.0;
  for (int j = 0; j < n_; ++j) sum += at(index, j);
  return sum;
}

double air_density(double t_c) { return 353.05 / (t_c + kKelvinOffset); }

double wind_pressure_coefficient(const AirLink& link, double wind_dir_deg) {
  if (link.cp_override) return *link.cp_override;
  double diff = std::fmod(std::abs(wind_dir_deg - link.facade_azimuth), 360.0);
  if (diff > 180.0) diff = 360.0 - diff;
  if (diff <= 60.0) return 0.6;    // wind blows onto the facade
  if (diff >= 120.0) return -0.3;  // facade in the wake
  return -0.5;                     // wind sweeps along the facade
}

double link_dp(const AirLink& link, const LinkEnvironment& env) {
  const double rho_from = air_density(env.t_from);
  const double rho_to = air_density(env.t_to);
  const double z = env.elevation;

  double dp = (env.p_from - rho_from * kGravity * z) -
              (env.p_to - rho_to * kGravity * z);

  if (link.from == kExterior || link.to == kExterior) {
    const double t_ext = link.from == kExterior ? env.t_from : env.t_to;
    const double cp = wind_pressure_coefficient(link, env.wind_dir);
    const double p_wind =
        cp * 0.5 * air_density(t_ext) * env.wind_speed * env.wind_speed;
    dp += link.from == kExterior ? p_wind : -p_wind;
  }
  return dp;
}

double link_flow(const AirLink& link, double dp, double rho_upwind,
                 double opening_fraction) {
  const double area = link.aperture * opening_fraction;
  if (area <= 0.0 || dp == 0.0) return 0.0;
  const double mag = std::abs(dp);
  const double sign = dp > 0.0 ? 1.0 : -1.0;
  if (link.kind == LinkKind::Crack)
    return sign * link.cd * area * std::pow(mag, link.exponent);
  return sign * link.cd * area * std::sqrt(2.0 * rho_upwind * mag);
}

namespace {

constexpr double kResidualTol = 1e-8;  // kg/s
constexpr double kFdStep = 1e-4;       // Pa
constexpr int kMaxIterations = 200;

int schedule_hour(double hour_of_day) {
  double h = std::fmod(hour_of_day, 24.0);
  if (h < 0.0) h += 24.0;
  int i = static_cast<int>(h);
  return std::min(i, 23);
}

struct Network {
  std::vector<int> links;        // active link indices
  std::vector<double> fraction;  // schedule fraction per active link
  std::vector<int> unknown_of_zone;
  std::vector<int> zone_of_unknown;
  std::vector<char> gauge;       // per unknown: pressure pinned, not balanced
};

Network build_network(const BuildingModel& model, double hour_of_day) {
  const int n = static_cast<int>(model.zones.size());
  Network net;
  net.unknown_of_zone.assign(n, -1);
  const int hour = schedule_hour(hour_of_day);

  for (int li = 0; li < static_cast<int>(model.links.size()); ++li) {
    const AirLink& l = model.links[li];
    const double f = l.opening_schedule[hour];
    if (l.aperture * f <= 0.0) continue;
    net.links.push_back(li);
    net.fraction.push_back(f);
  }

  // Connected components over active links; components with no exterior
  // endpoint have an undetermined pressure level and get one gauge zone.
  std::vector<int> component(n, -1);
  std::vector<char> vented;
  for (int z = 0; z < n; ++z) {
    if (component[z] >= 0) continue;
    bool touches_link = false;
    for (size_t k = 0; k < net.links.size(); ++k) {
      const AirLink& l = model.links[net.links[k]];
      if (l.from == z || l.to == z) {
        touches_link = true;
        break;
      }
    }
    if (!touches_link) continue;

    const int c = static_cast<int>(vented.size());
    vented.push_back(0);
    std::vector<int> stack{z};
    component[z] = c;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (size_t k = 0; k < net.links.size(); ++k) {
        const AirLink& l = model.links[net.links[k]];
        if (l.from != cur && l.to != cur) continue;
        const int other = l.from == cur ? l.to : l.from;
        if (other == kExterior) {
          vented[c] = 1;
        } else if (component[other] < 0) {
          component[other] = c;
          stack.push_back(other);
        }
      }
    }
  }

  for (int z = 0; z < n; ++z) {
    if (component[z] < 0) continue;
    net.unknown_of_zone[z] = static_cast<int>(net.zone_of_unknown.size());
    net.zone_of_unknown.push_back(z);
    net.gauge.push_back(0);
  }

  // A sealed component cannot push fan extract anywhere; refuse it rather
  // than iterate to a guaranteed non-solution.
  std::vector<char> gauged(vented.size(), 0);
  std::vector<double> sealed_extract(vented.size(), 0.0);
  for (int z = 0; z < n; ++z) {
    const int c = component[z];
    if (c < 0 || vented[c]) continue;
    sealed_extract[c] += model.zones[z].mech_extract_flow;
    if (!gauged[c]) {
      gauged[c] = 1;
      net.gauge[net.unknown_of_zone[z]] = 1;
    }
  }
  for (size_t c = 0; c < vented.size(); ++c)
    if (!vented[c] && sealed_extract[c] > 0.0)
      throw AirflowSolverError(
          "mechanical extract in a zone group with no path to the exterior",
          sealed_extract[c]);

  return net;
}

struct LinkEval {
  double flow = 0.0;  // signed, positive from -> to
};

LinkEval eval_link(const BuildingModel& model, const AirLink& link, double fraction,
                   const std::vector<double>& p,
                   const std::vector<double>& zone_temps,
                   const WeatherRecord& weather) {
  LinkEnvironment env;
  env.wind_speed = weather.wind_speed;
  env.wind_dir = weather.wind_dir;
  if (link.from == kExterior) {
    env.p_from = 0.0;
    env.t_from = weather.t_ae;
  } else {
    env.p_from = p[link.from];
    env.t_from = zone_temps[link.from];
  }
  if (link.to == kExterior) {
    env.p_to = 0.0;
    env.t_to = weather.t_ae;
  } else {
    env.p_to = p[link.to];
    env.t_to = zone_temps[link.to];
  }
  const int anchor = link.from != kExterior ? link.from : link.to;
  env.elevation = model.zones[anchor].reference_height + link.height;

  const double dp = link_dp(link, env);
  const double rho_up =
      dp >= 0.0 ? air_density(env.t_from) : air_density(env.t_to);
  return {link_flow(link, dp, rho_up, fraction)};
}

} // namespace

AirflowSolution solve_pressures(const BuildingModel& model,
                                const std::vector<double>& zone_temps,
                                const WeatherRecord& weather, double hour_of_day) {
  const int n = static_cast<int>(model.zones.size());
  const Network net = build_network(model, hour_of_day);
  const int u = static_cast<int>(net.zone_of_unknown.size());

  std::vector<double> p_full(n, 0.0);
  auto residual = [&](const Eigen::VectorXd& pu) {
    for (int k = 0; k < u; ++k) p_full[net.zone_of_unknown[k]] = pu[k];
    Eigen::VectorXd r = Eigen::VectorXd::Zero(u);
    for (size_t k = 0; k < net.links.size(); ++k) {
      const AirLink& l = model.links[net.links[k]];
      const double flow =
          eval_link(model, l, net.fraction[k], p_full, zone_temps, weather).flow;
      if (l.from != kExterior) {
        const int uf = net.unknown_of_zone[l.from];
        if (!net.gauge[uf]) r[uf] -= flow;
      }
      if (l.to != kExterior) {
        const int ut = net.unknown_of_zone[l.to];
        if (!net.gauge[ut]) r[ut] += flow;
      }
    }
    for (int k = 0; k < u; ++k) {
      if (net.gauge[k])
        r[k] = pu[k];
      else
        r[k] -= model.zones[net.zone_of_unknown[k]].mech_extract_flow;
    }
    return r;
  };

  AirflowSolution sol;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(u);
  Eigen::VectorXd r = residual(p);
  double rn = u > 0 ? r.cwiseAbs().maxCoeff() : 0.0;

  int iter = 0;
  while (rn >= kResidualTol) {
    if (iter >= kMaxIterations)
      throw AirflowSolverError("pressure balance did not converge after " +
                                   std::to_string(kMaxIterations) + " iterations",
                               rn);
    ++iter;

    Eigen::MatrixXd jac(u, u);
    for (int j = 0; j < u; ++j) {
      Eigen::VectorXd pj = p;
      pj[j] += kFdStep;
      jac.col(j) = (residual(pj) - r) / kFdStep;
    }
    Eigen::VectorXd step = jac.fullPivLu().solve(-r);
    if (!step.allFinite())
      throw AirflowSolverError("pressure network produced a singular Jacobian", rn);

    // Backtracking under-relaxation: halve the step while it makes the
    // residual worse.
    double omega = 0.75;
    Eigen::VectorXd p_trial;
    Eigen::VectorXd r_trial;
    double rn_trial;
    while (true) {
      p_trial = p + omega * step;
      r_trial = residual(p_trial);
      rn_trial = r_trial.cwiseAbs().maxCoeff();
      if (rn_trial < rn || omega < 1e-6) break;
      omega *= 0.5;
    }
    p = p_trial;
    r = r_trial;
    rn = rn_trial;
    sol.trace.push_back({iter, rn, omega});
  }

  for (int k = 0; k < u; ++k) p_full[net.zone_of_unknown[k]] = p[k];
  sol.pressures.p = p_full;
  sol.iterations = iter;
  sol.residual_norm = rn;

  FlowMatrix flows(n);
  sol.link_flows.assign(model.links.size(), 0.0);
  for (size_t k = 0; k < net.links.size(); ++k) {
    const AirLink& l = model.links[net.links[k]];
    const double flow =
        eval_link(model, l, net.fraction[k], p_full, zone_temps, weather).flow;
    sol.link_flows[net.links[k]] = flow;
    flows.add_flow(FlowMatrix::index_of(l.from), FlowMatrix::index_of(l.to), flow);
  }
  for (int z = 0; z < n; ++z) {
    const Zone& zone = model.zones[z];
    const int idx = FlowMatrix::index_of(z);
    if (zone.mech_extract_flow > 0.0) {
      flows.at(idx, 0) += zone.mech_extract_flow;
      // Without any open path the extract cannot draw makeup air through
      // the network; treat the fan as balanced so mass stays conserved.
      if (net.unknown_of_zone[z] < 0) flows.at(0, idx) += zone.mech_extract_flow;
    }
    if (zone.mech_balanced_flow > 0.0) {
      flows.at(idx, 0) += zone.mech_balanced_flow;
      flows.at(0, idx) += zone.mech_balanced_flow;
    }
  }
  sol.flows = flows;
  return sol;
}

double zone_mass_residual(const BuildingModel&, const FlowMatrix& flows, int zone) {
  const int idx = FlowMatrix::index_of(zone);
  return flows.total_into(idx) - flows.total_out_of(idx);
}

void write_trace_csv(std::ostream& out, const std::vector<IterationTraceRow>& trace) {
  out << "iteration,residual_kg_s,relaxation\n";
  char buf[96];
  for (const IterationTraceRow& row : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g\n", row.iteration,
                  row.residual_norm, row.relaxation);
    out << buf;
  }
}

} // namespace mzsim
