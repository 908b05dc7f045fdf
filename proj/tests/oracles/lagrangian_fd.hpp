#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "oracles/polar.hpp"

namespace oracle {

// Midpoint discrete Lagrangian built from Eigen's angle-axis conversions and
// the eigen-based polar factor, so it shares no code with the integrator.
inline double discrete_lagrangian(const Eigen::Matrix3d& tk, const Eigen::Matrix3d& tk1, double dt,
                                  const Eigen::Matrix3d& j) {
  const Eigen::Matrix3d mid = polar_rotation(tk + tk1);
  const Eigen::AngleAxisd aa(Eigen::Matrix3d(tk1 * tk.transpose()));
  const Eigen::Vector3d psi = aa.angle() * aa.axis();
  const Eigen::Vector3d w = mid.transpose() * psi / dt;
  return dt * 0.5 * w.dot(j * w);
}

inline Eigen::Matrix3d space_perturb(const Eigen::Matrix3d& t, int axis, double h) {
  return Eigen::AngleAxisd(h, Eigen::Vector3d::Unit(axis)).toRotationMatrix() * t;
}

// Gradient of L_d in its first (slot 0) or second (slot 1) argument under
// space-frame variations dT = hat(dtheta) T, by central differences.
inline Eigen::Vector3d lagrangian_gradient(const Eigen::Matrix3d& tk, const Eigen::Matrix3d& tk1, double dt,
                                           const Eigen::Matrix3d& j, int slot, double h = 1e-6) {
  Eigen::Vector3d g;
  for (int i = 0; i < 3; ++i) {
    if (slot == 0) {
      g(i) = (discrete_lagrangian(space_perturb(tk, i, h), tk1, dt, j) -
              discrete_lagrangian(space_perturb(tk, i, -h), tk1, dt, j)) / (2 * h);
    } else {
      g(i) = (discrete_lagrangian(tk, space_perturb(tk1, i, h), dt, j) -
              discrete_lagrangian(tk, space_perturb(tk1, i, -h), dt, j)) / (2 * h);
    }
  }
  return g;
}

}  // namespace oracle
