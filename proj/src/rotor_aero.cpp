#include "geomech/rotor_aero.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "geomech/errors.hpp"

namespace geomech {

namespace {

double tip_speed(const AirState& air, const RotorGeometry& geom) {
  if (!(air.omega_rotor > 0.0)) {
    throw ZeroRotorSpeed("rotor speed must be > 0, got " + std::to_string(air.omega_rotor));
  }
  return air.omega_rotor * geom.radius;
}

double loading(const RotorGeometry& g, double lambda) { return g.theta0 / 6.0 - g.theta_tw / 8.0 - lambda / 4.0; }

}  // namespace

double RotorGeometry::solidity() const { return n_blades * chord / (std::numbers::pi * radius); }

double RotorGeometry::disk_area() const { return std::numbers::pi * radius * radius; }

void RotorGeometry::validate() const {
  if (n_blades < 1) throw InputError("rotor needs at least one blade");
  if (!(chord > 0.0)) throw InputError("rotor chord must be > 0");
  if (!(radius > 0.0)) throw InputError("rotor radius must be > 0");
  if (!(lift_slope > 0.0)) throw InputError("lift slope must be > 0");
  if (!(theta0 > 0.0)) throw InputError("root pitch theta0 must be > 0");
  if (!std::isfinite(theta_tw)) throw InputError("twist must be finite");
  if (!(cd_bar > 0.0)) throw InputError("profile drag coefficient must be > 0");
  const double s = solidity();
  if (!(s > 0.0 && s < 1.0)) throw InputError("rotor solidity must lie in (0, 1), got " + std::to_string(s));
}

void AirState::validate() const {
  if (!(rho > 0.0)) throw InputError("air density must be > 0");
  if (!std::isfinite(V_horiz) || !std::isfinite(z_dot) || !std::isfinite(weight_supported)) {
    throw InputError("air state must be finite");
  }
}

double induced_velocity(const AirState& air, const RotorGeometry& geom) {
  const double half_v2 = 0.5 * air.V_horiz * air.V_horiz;
  const double hover = air.weight_supported / (2.0 * air.rho * geom.disk_area());
  return std::sqrt(half_v2 + std::sqrt(half_v2 * half_v2 + hover * hover));
}

double inflow_ratio(const AirState& air, const RotorGeometry& geom, double nu1) {
  return (nu1 - air.z_dot) / tip_speed(air, geom);
}

double advance_ratio(const AirState& air, const RotorGeometry& geom) { return air.V_horiz / tip_speed(air, geom); }

double thrust_coefficient(const RotorGeometry& g, double lambda, double mu) {
  const double mu2 = mu * mu;
  return g.solidity() * g.lift_slope *
         ((1.0 / 6.0 + 0.25 * mu2) * g.theta0 - (1.0 + mu2) * g.theta_tw / 8.0 - lambda / 4.0);
}

double hub_force_coefficient(const RotorGeometry& g, double lambda, double mu) {
  return g.solidity() * g.lift_slope *
         (mu * g.cd_bar / (4.0 * g.lift_slope) + 0.25 * lambda * mu * (g.theta0 - 0.5 * g.theta_tw));
}

double side_force_coefficient(const RotorGeometry&, double, double) { return 0.0; }

double torque_coefficient(const RotorGeometry& g, double lambda, double mu) {
  return g.solidity() * g.lift_slope *
         ((1.0 + mu * mu) * g.cd_bar / (8.0 * g.lift_slope) + lambda * loading(g, lambda));
}

double roll_moment_coefficient(const RotorGeometry& g, double lambda, double mu) {
  return -g.solidity() * g.lift_slope * mu * (g.theta0 / 6.0 - g.theta_tw / 8.0 - lambda / 8.0);
}

double pitch_moment_coefficient(const RotorGeometry&, double, double) { return 0.0; }

RotorWrench rotor_wrench(const RotorGeometry& geom, const AirState& air, double lambda, double mu) {
  const double u = tip_speed(air, geom);
  const double force_scale = air.rho * geom.disk_area() * u * u;
  const double moment_scale = force_scale * geom.radius;
  RotorWrench w;
  w.thrust = thrust_coefficient(geom, lambda, mu) * force_scale;
  w.h_force = hub_force_coefficient(geom, lambda, mu) * force_scale;
  w.y_force = side_force_coefficient(geom, lambda, mu) * force_scale;
  w.torque_shaft = torque_coefficient(geom, lambda, mu) * moment_scale;
  w.roll_moment = roll_moment_coefficient(geom, lambda, mu) * moment_scale;
  w.pitch_moment = pitch_moment_coefficient(geom, lambda, mu) * moment_scale;
  return w;
}

RotorWrench rotor_wrench(const RotorGeometry& geom, const AirState& air) {
  const double nu1 = induced_velocity(air, geom);
  return rotor_wrench(geom, air, inflow_ratio(air, geom, nu1), advance_ratio(air, geom));
}

InflowSolution solve_coupled_inflow(const RotorGeometry& geom, const AirState& air, const InflowOptions& opts) {
  AirState a = air;
  const double mu = advance_ratio(a, geom);
  for (int it = 1; it <= opts.max_iters; ++it) {
    const double nu1 = induced_velocity(a, geom);
    const double lambda = inflow_ratio(a, geom, nu1);
    const RotorWrench w = rotor_wrench(geom, a, lambda, mu);
    const double gap = w.thrust - a.weight_supported;
    if (std::abs(gap) <= opts.tolerance * std::max(1.0, std::abs(a.weight_supported))) {
      return InflowSolution{w, a.weight_supported, nu1, lambda, mu, it};
    }
    a.weight_supported += opts.damping * gap;
  }
  throw NoConvergence("coupled inflow iteration did not converge in " + std::to_string(opts.max_iters) +
                      " iterations");
}

double hover_rotor_speed(const RotorGeometry& g, double rho, double thrust) {
  if (!(thrust > 0.0)) throw InputError("hover thrust must be > 0");
  // T = rho A sigma a [c2 u^2 - nu1 u / 4] with u = Omega R.
  const double nu1 = std::sqrt(thrust / (2.0 * rho * g.disk_area()));
  const double c2 = g.theta0 / 6.0 - g.theta_tw / 8.0;
  if (!(c2 > 0.0)) throw InputError("blade pitch produces no thrust in hover");
  const double c1 = 0.25 * nu1;
  const double rhs = thrust / (rho * g.disk_area() * g.solidity() * g.lift_slope);
  const double u = (c1 + std::sqrt(c1 * c1 + 4.0 * c2 * rhs)) / (2.0 * c2);
  return u / g.radius;
}

double hover_torque_ratio(const RotorGeometry& g, double rho, double thrust) {
  AirState air;
  air.rho = rho;
  air.omega_rotor = hover_rotor_speed(g, rho, thrust);
  air.weight_supported = thrust;
  const RotorWrench w = rotor_wrench(g, air);
  return w.torque_shaft / w.thrust;
}

void AeroConfig::validate() const {
  geometry.validate();
  if (!(rho > 0.0)) throw InputError("air density must be > 0");
  if (!(min_rotor_speed > 0.0)) throw InputError("minimum rotor speed must be > 0");
  if (!(inflow.tolerance > 0.0) || inflow.max_iters < 1 || !(inflow.damping > 0.0 && inflow.damping <= 1.0)) {
    throw InputError("inflow iteration options out of range");
  }
}

VehicleAero vehicle_aero(const AeroConfig& cfg, const Mixer& mixer, const Vec4& commanded_thrusts,
                         const QuadrotorState& state, double weight) {
  VehicleAero out;
  const Vec3 v_body = state.R.transpose() * state.v;
  const Vec3 in_plane(v_body.x(), v_body.y(), 0.0);
  const Vec3 advance = in_plane.norm() > 1e-12 ? Vec3(in_plane.normalized()) : Vec3::Zero();

  AirState air;
  air.rho = cfg.rho;
  air.V_horiz = std::hypot(state.v.x(), state.v.y());
  air.z_dot = state.v.z();

  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
  for (int i = 0; i < 4; ++i) {
    const double cmd = commanded_thrusts(i);
    air.omega_rotor = cmd > 0.0 ? std::max(hover_rotor_speed(cfg.geometry, cfg.rho, cmd), cfg.min_rotor_speed)
                                : cfg.min_rotor_speed;
    air.weight_supported = 0.25 * weight;
    RotorWrench w;
    if (cfg.coupled_inflow) {
      const InflowSolution sol = solve_coupled_inflow(cfg.geometry, air, cfg.inflow);
      w = sol.wrench;
      out.inflow_iterations = std::max(out.inflow_iterations, sol.iterations);
    } else {
      w = rotor_wrench(cfg.geometry, air);
    }
    out.rotor_speed(i) = air.omega_rotor;
    out.thrust(i) = w.thrust;

    const double s = Mixer::kSpin[i];
    const Vec3 f_i = w.thrust * Vec3::UnitZ() - w.h_force * advance;
    force += f_i;
    moment += mixer.hub(i).cross(f_i) + s * w.roll_moment * advance - s * w.torque_shaft * Vec3::UnitZ();
  }
  out.wrench.force_body = force;
  out.wrench.moment_body = moment;
  return out;
}

}  // namespace geomech
