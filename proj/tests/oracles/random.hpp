#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <random>

namespace oracle {

using Rng = std::mt19937_64;

inline Eigen::Vector3d random_vec(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  return scale * Eigen::Vector3d(n(rng), n(rng), n(rng));
}

inline Eigen::Vector3d random_unit(Rng& rng) { return random_vec(rng).normalized(); }

// Uniform on SO(3) via a normalized Gaussian quaternion.
inline Eigen::Matrix3d random_rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace oracle
