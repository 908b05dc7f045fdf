#pragma once

#include "geomech/quadrotor_tracking.hpp"
#include "geomech/rigid_body.hpp"

namespace geomech {

// Rotor loads from momentum theory (induced velocity) combined with blade
// element theory (small-angle, linear lift, linear twist, rigid blades).

inline constexpr double kSeaLevelAirDensity = 1.225;  // kg/m^3
inline constexpr double kDefaultLiftSlope = 5.7;      // 1/rad

struct RotorGeometry {
  int n_blades = 2;
  double chord = 0.02;     // m
  double radius = 0.15;    // m
  double lift_slope = kDefaultLiftSlope;
  double theta0 = 0.3;     // rad, root pitch
  double theta_tw = 0.1;   // rad, linear twist: theta = theta0 - theta_tw r/R
  double cd_bar = 0.01;    // mean profile drag coefficient

  /// sigma = N c / (pi R)
  double solidity() const;
  double disk_area() const;
  void validate() const;
};

struct AirState {
  double rho = kSeaLevelAirDensity;
  double V_horiz = 0.0;           // m/s
  double z_dot = 0.0;             // m/s, z-up
  double omega_rotor = 0.0;       // rad/s
  double weight_supported = 0.0;  // N

  void validate() const;
};

struct RotorWrench {
  double thrust = 0.0;
  double h_force = 0.0;
  double y_force = 0.0;
  double torque_shaft = 0.0;
  double roll_moment = 0.0;
  double pitch_moment = 0.0;
};

double induced_velocity(const AirState& air, const RotorGeometry& geom);
double inflow_ratio(const AirState& air, const RotorGeometry& geom, double nu1);
double advance_ratio(const AirState& air, const RotorGeometry& geom);

double thrust_coefficient(const RotorGeometry& geom, double lambda, double mu);
double hub_force_coefficient(const RotorGeometry& geom, double lambda, double mu);
double side_force_coefficient(const RotorGeometry& geom, double lambda, double mu);
double torque_coefficient(const RotorGeometry& geom, double lambda, double mu);
double roll_moment_coefficient(const RotorGeometry& geom, double lambda, double mu);
double pitch_moment_coefficient(const RotorGeometry& geom, double lambda, double mu);

/// Loads with the inflow computed from air.weight_supported.
RotorWrench rotor_wrench(const RotorGeometry& geom, const AirState& air);
RotorWrench rotor_wrench(const RotorGeometry& geom, const AirState& air, double lambda, double mu);

struct InflowOptions {
  double tolerance = 1e-8;  // on |T - W| / max(1, |W|)
  int max_iters = 100;
  double damping = 0.5;
};

struct InflowSolution {
  RotorWrench wrench;
  double supported = 0.0;  // W at convergence
  double nu1 = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  int iterations = 0;
};

/// Fixed point W = T(W): the rotor's own thrust feeds the induced velocity.
/// air.weight_supported is the starting guess. Throws NoConvergence.
InflowSolution solve_coupled_inflow(const RotorGeometry& geom, const AirState& air,
                                    const InflowOptions& opts = {});

/// Rotor speed that produces `thrust` in hover (V = z_dot = 0, W = thrust).
double hover_rotor_speed(const RotorGeometry& geom, double rho, double thrust);

/// Reaction-torque-to-thrust ratio C_Q R / C_T in hover at the given thrust.
double hover_torque_ratio(const RotorGeometry& geom, double rho, double thrust);

struct AeroConfig {
  RotorGeometry geometry;
  double rho = kSeaLevelAirDensity;
  bool coupled_inflow = true;
  InflowOptions inflow;
  double min_rotor_speed = 1.0;  // rad/s, floor for non-positive thrust commands

  void validate() const;
};

struct VehicleAero {
  BodyWrench wrench;        // total rotor force and moment, body frame
  Vec4 rotor_speed = Vec4::Zero();
  Vec4 thrust = Vec4::Zero();
  int inflow_iterations = 0;  // worst rotor
};

/// Converts commanded rotor thrusts into rotor speeds with the hover model,
/// then evaluates each rotor in the current flight condition and sums the
/// loads about the centre of mass.
VehicleAero vehicle_aero(const AeroConfig& cfg, const Mixer& mixer, const Vec4& commanded_thrusts,
                         const QuadrotorState& state, double weight);

}  // namespace geomech
