#pragma once

#include "geomech/attitude_controller.hpp"
#include "geomech/quadrotor_tracking.hpp"

namespace geomech {

/// angle(t) = c0 + c1 t + c2 t^2
struct Quadratic {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double value(double t) const { return c0 + (c1 + c2 * t) * t; }
  double rate(double t) const { return c1 + 2.0 * c2 * t; }
  double accel() const { return 2.0 * c2; }
};

/// Roll, pitch and yaw histories for a 3-2-1 (yaw, then pitch, then roll)
/// Euler sequence: R_d = Rz(yaw) Ry(pitch) Rx(roll).
struct EulerCoeffs {
  Quadratic roll;
  Quadratic pitch;
  Quadratic yaw;
};

struct EulerSample {
  AttitudeReference ref;
  bool gimbal_proximity = false;  // |pitch| within 1e-6 of pi/2
};

EulerSample euler_321_reference(double t, const EulerCoeffs& coeffs);

/// r_d = center + amplitude .* (sin wt, cos wt, sin wt), componentwise.
struct CircleCoeffs {
  Vec3 center = Vec3::Zero();
  Vec3 amplitude = Vec3::Constant(4.0);
  double frequency = 0.5;  // rad/s
  Vec3 b1d = Vec3::UnitX();
};

TrajectoryReference circle_reference(double t, const CircleCoeffs& coeffs);

}  // namespace geomech
