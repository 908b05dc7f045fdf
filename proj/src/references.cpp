#include "geomech/references.hpp"

#include <cmath>
#include <numbers>

namespace geomech {

EulerSample euler_321_reference(double t, const EulerCoeffs& coeffs) {
  const double phi = coeffs.roll.value(t);
  const double theta = coeffs.pitch.value(t);
  const double psi = coeffs.yaw.value(t);
  const double dphi = coeffs.roll.rate(t);
  const double dtheta = coeffs.pitch.rate(t);
  const double dpsi = coeffs.yaw.rate(t);
  const double ddphi = coeffs.roll.accel();
  const double ddtheta = coeffs.pitch.accel();
  const double ddpsi = coeffs.yaw.accel();

  const double sf = std::sin(phi), cf = std::cos(phi);
  const double st = std::sin(theta), ct = std::cos(theta);

  EulerSample out;
  out.ref.R_d = rot_z(psi) * rot_y(theta) * rot_x(phi);
  out.ref.Omega_d = Vec3(dphi - dpsi * st,
                         dtheta * cf + dpsi * sf * ct,
                         -dtheta * sf + dpsi * cf * ct);
  out.ref.Omega_d_dot = Vec3(
      ddphi - ddpsi * st - dpsi * dtheta * ct,
      ddtheta * cf - dtheta * dphi * sf + ddpsi * sf * ct + dpsi * dphi * cf * ct - dpsi * dtheta * sf * st,
      -ddtheta * sf - dtheta * dphi * cf + ddpsi * cf * ct - dpsi * dphi * sf * ct - dpsi * dtheta * cf * st);
  out.gimbal_proximity = std::abs(std::abs(std::remainder(theta, 2.0 * std::numbers::pi)) - std::numbers::pi / 2) < 1e-6;
  return out;
}

TrajectoryReference circle_reference(double t, const CircleCoeffs& coeffs) {
  const double w = coeffs.frequency;
  const double s = std::sin(w * t);
  const double c = std::cos(w * t);
  const Vec3& a = coeffs.amplitude;
  TrajectoryReference ref;
  ref.r_d = coeffs.center + a.cwiseProduct(Vec3(s, c, s));
  ref.v_d = w * a.cwiseProduct(Vec3(c, -s, c));
  ref.a_d = -w * w * a.cwiseProduct(Vec3(s, c, s));
  ref.b_1d = coeffs.b1d;
  return ref;
}

}  // namespace geomech
