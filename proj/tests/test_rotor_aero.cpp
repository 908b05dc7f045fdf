#include <cmath>
#include <numbers>

#include "doctest.h"
#include "geomech/errors.hpp"
#include "geomech/rotor_aero.hpp"
#include "oracles/blade_quadrature.hpp"

using namespace geomech;

namespace {

oracle::BladeCase blade_case(const RotorGeometry& g, double rho, double omega, double lambda, double mu) {
  return {g.n_blades, g.chord, g.radius, g.lift_slope, g.theta0, g.theta_tw, g.cd_bar, rho, omega, lambda, mu};
}

bool close(double a, double b, double rel, double floor) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) || std::abs(a - b) <= floor;
}

}  // namespace

TEST_CASE("induced velocity") {
  const RotorGeometry g;
  AirState air;
  air.weight_supported = 10.645;
  CHECK(induced_velocity(air, g) == doctest::Approx(std::sqrt(10.645 / (2 * 1.225 * g.disk_area()))).epsilon(1e-14));
  air.weight_supported = 0.0;
  air.V_horiz = 3.0;
  CHECK(induced_velocity(air, g) == doctest::Approx(3.0).epsilon(1e-14));

  RotorGeometry big;
  big.radius = 0.315;
  AirState vehicle;
  vehicle.weight_supported = 4.34 * 9.81 / 4;
  const double hover = vehicle.weight_supported / (2 * 1.225 * std::numbers::pi * 0.315 * 0.315);
  CHECK(induced_velocity(vehicle, big) == doctest::Approx(std::sqrt(hover)).epsilon(1e-14));
  // The closed form is the root of nu^4 - V^2 nu^2 = (W / 2 rho A)^2.
  for (double v = 0.5; v < 20.0; v += 0.5) {
    vehicle.V_horiz = v;
    const double nu = induced_velocity(vehicle, big);
    const double nu2 = nu * nu;
    CHECK(nu2 * nu2 - v * v * nu2 == doctest::Approx(hover * hover).epsilon(1e-10));
  }
}

TEST_CASE("inflow and advance ratios") {
  RotorGeometry g;
  g.radius = 0.5;
  AirState air;
  air.omega_rotor = 100;
  air.z_dot = 5;
  CHECK(inflow_ratio(air, g, 5.0) == 0.0);
  air.z_dot = 0;
  CHECK(inflow_ratio(air, g, 5.0) == doctest::Approx(0.1));
  air.z_dot = 7;
  CHECK(inflow_ratio(air, g, 5.0) < 0.0);
  CHECK(advance_ratio(air, g) == 0.0);
  air.V_horiz = 10;
  CHECK(advance_ratio(air, g) == doctest::Approx(0.2));
  air.omega_rotor = 0.0;
  CHECK_THROWS_AS(advance_ratio(air, g), ZeroRotorSpeed);
  CHECK_THROWS_AS(inflow_ratio(air, g, 1.0), ZeroRotorSpeed);
}

TEST_CASE("coefficient examples") {
  RotorGeometry g;
  const double sa = g.solidity() * g.lift_slope;
  CHECK(thrust_coefficient(g, 0.05, 0.0) == doctest::Approx(sa * (g.theta0 / 6 - g.theta_tw / 8 - 0.05 / 4)));
  RotorGeometry flat = g;
  flat.theta0 = 0;
  flat.theta_tw = 0;
  CHECK(thrust_coefficient(flat, 0.0, 0.2) == 0.0);
  CHECK(hub_force_coefficient(g, 0.05, 0.0) == 0.0);
  CHECK(hub_force_coefficient(g, 0.0, 0.2) == doctest::Approx(0.2 * g.cd_bar * g.solidity() / 4));
  CHECK(torque_coefficient(g, 0.0, 0.0) == doctest::Approx(g.solidity() * g.cd_bar / 8));
  CHECK(roll_moment_coefficient(g, 0.05, 0.0) == 0.0);
  CHECK(roll_moment_coefficient(g, 0.0, 0.2) < 0.0);
  RotorGeometry twice = g;
  twice.cd_bar = 2 * g.cd_bar;
  const double q0 = torque_coefficient(g, 0.04, 0.1) - g.solidity() * g.lift_slope * 0.04 * (g.theta0 / 6 - g.theta_tw / 8 - 0.01);
  const double q1 = torque_coefficient(twice, 0.04, 0.1) - g.solidity() * g.lift_slope * 0.04 * (g.theta0 / 6 - g.theta_tw / 8 - 0.01);
  CHECK(q1 == doctest::Approx(2 * q0).epsilon(1e-12));
  CHECK(side_force_coefficient(g, 0.1, 0.3) == 0.0);
  CHECK(pitch_moment_coefficient(g, 0.1, 0.3) == 0.0);
}

TEST_CASE("closed-form coefficients equal quadrature of the section loads") {
  RotorGeometry g;
  const double rho = 1.1, omega = 700.0;
  const double u = omega * g.radius;
  const double fs = rho * g.disk_area() * u * u;
  int cases = 0;
  for (double th0 : {0.0, 0.1, 0.3}) {
    for (double tw : {0.0, 0.05, 0.1}) {
      for (double lam : {0.0, 0.07, 0.15}) {
        for (double mu : {0.0, 0.15, 0.3}) {
          g.theta0 = th0;
          g.theta_tw = tw;
          const oracle::BladeLoads q = oracle::blade_element_loads(blade_case(g, rho, omega, lam, mu));
          CHECK(close(thrust_coefficient(g, lam, mu), q.thrust / fs, 1e-10, 1e-15));
          CHECK(close(hub_force_coefficient(g, lam, mu), q.h_force / fs, 1e-10, 1e-15));
          CHECK(close(torque_coefficient(g, lam, mu), q.torque / (fs * g.radius), 1e-10, 1e-15));
          CHECK(close(roll_moment_coefficient(g, lam, mu), q.roll / (fs * g.radius), 1e-10, 1e-15));
          CHECK(std::abs(q.y_force / fs) < 1e-12);
          CHECK(std::abs(q.pitch / (fs * g.radius)) < 1e-12);
          ++cases;
        }
      }
    }
  }
  CHECK(cases == 81);
}

TEST_CASE("dimensional wrench and scaling") {
  RotorGeometry g;
  AirState air;
  air.omega_rotor = 600;
  air.V_horiz = 4.0;
  air.z_dot = 0.5;
  air.weight_supported = 9.0;
  const RotorWrench w = rotor_wrench(g, air);
  CHECK(w.y_force == 0.0);
  CHECK(w.pitch_moment == 0.0);

  const double lam = 0.05, mu = 0.1;
  const RotorWrench a = rotor_wrench(g, air, lam, mu);
  AirState dense = air;
  dense.rho *= 3.0;
  const RotorWrench b = rotor_wrench(g, dense, lam, mu);
  CHECK(b.thrust == doctest::Approx(3 * a.thrust).epsilon(1e-15));
  CHECK(b.torque_shaft == doctest::Approx(3 * a.torque_shaft).epsilon(1e-15));
  AirState fast = air;
  fast.omega_rotor *= 2.0;
  const RotorWrench c = rotor_wrench(g, fast, lam, mu);
  CHECK(c.thrust == doctest::Approx(4 * a.thrust).epsilon(1e-15));
  CHECK(c.h_force == doctest::Approx(4 * a.h_force).epsilon(1e-15));

  // Dimensional blade-element thrust N rho a c (Omega R)^2 R [...] equals C_T rho A (Omega R)^2.
  const double u = air.omega_rotor * g.radius;
  const double bracket = (1.0 / 6 + mu * mu / 4) * g.theta0 - (1 + mu * mu) * g.theta_tw / 8 - lam / 4;
  const double dimensional = g.n_blades * air.rho * g.lift_slope * g.chord * u * u * g.radius * bracket;
  CHECK(a.thrust == doctest::Approx(dimensional).epsilon(1e-14));

  RotorGeometry flat = g;
  flat.theta0 = 0;
  flat.theta_tw = 0;
  const RotorWrench d = rotor_wrench(flat, air, 0.0, mu);
  CHECK(d.thrust == 0.0);
  CHECK(d.roll_moment == 0.0);
  CHECK(d.torque_shaft > 0.0);

  air.omega_rotor = 0.0;
  CHECK_THROWS_AS(rotor_wrench(g, air), ZeroRotorSpeed);
}

TEST_CASE("coupled inflow converges to a self-consistent thrust") {
  RotorGeometry g;
  AirState air;
  air.omega_rotor = hover_rotor_speed(g, air.rho, 10.0);
  air.weight_supported = 10.0;
  const InflowSolution hover = solve_coupled_inflow(g, air);
  CHECK(hover.wrench.thrust == doctest::Approx(10.0).epsilon(1e-7));
  CHECK(hover.iterations <= 2);

  air.V_horiz = 3.0;
  air.z_dot = -0.5;
  air.weight_supported = 7.0;
  const InflowSolution fwd = solve_coupled_inflow(g, air);
  CHECK(std::abs(fwd.wrench.thrust - fwd.supported) <= 1e-8 * std::max(1.0, fwd.supported));
  AirState check = air;
  check.weight_supported = fwd.supported;
  CHECK(std::abs(rotor_wrench(g, check).thrust - fwd.supported) <= 1e-8 * std::max(1.0, fwd.supported));

  InflowOptions one;
  one.max_iters = 1;
  air.weight_supported = 1.0;
  CHECK_THROWS_AS(solve_coupled_inflow(g, air, one), NoConvergence);
}

TEST_CASE("hover inversion") {
  RotorGeometry g;
  for (double t : {1.0, 10.645, 25.0}) {
    AirState air;
    air.omega_rotor = hover_rotor_speed(g, air.rho, t);
    air.weight_supported = t;
    CHECK(rotor_wrench(g, air).thrust == doctest::Approx(t).epsilon(1e-12));
  }
  CHECK(hover_torque_ratio(g, 1.225, 10.0) > 0.0);
  CHECK_THROWS_AS(hover_rotor_speed(g, 1.225, 0.0), InputError);
}

TEST_CASE("vehicle aero in hover reproduces the commanded wrench") {
  AeroConfig cfg;
  const double weight = 4.34 * 9.81;
  const Mixer mixer(0.315, hover_torque_ratio(cfg.geometry, cfg.rho, weight / 4));
  QuadrotorState s;
  const VehicleAero a = vehicle_aero(cfg, mixer, mixer.rotor_thrusts(weight, Vec3::Zero()), s, weight);
  CHECK(a.wrench.force_body.z() == doctest::Approx(weight).epsilon(1e-8));
  CHECK(a.wrench.force_body.head<2>().norm() < 1e-12);
  CHECK(a.wrench.moment_body.norm() < 1e-8);

  // Forward flight: hub force opposes the in-plane velocity.
  s.v = Vec3(3, 0, 0);
  const VehicleAero f = vehicle_aero(cfg, mixer, mixer.rotor_thrusts(weight, Vec3::Zero()), s, weight);
  CHECK(f.wrench.force_body.x() < 0.0);
  CHECK(std::abs(f.wrench.force_body.y()) < 1e-12);

  // Non-positive commands fall back to the floor speed.
  const VehicleAero z = vehicle_aero(cfg, mixer, Vec4(-1, 0, 1, 1), QuadrotorState{}, weight);
  CHECK(z.rotor_speed(0) == cfg.min_rotor_speed);
  CHECK(z.rotor_speed(1) == cfg.min_rotor_speed);
}
