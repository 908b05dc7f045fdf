#include "geomech/so3.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <string>

#include "geomech/errors.hpp"

namespace geomech {

namespace {

constexpr double kSmallAngle = 1e-4;
constexpr double kSkewTolerance = 1e-6;
constexpr double kMeanSingularFloor = 1e-8;
constexpr double kNearPi = 3.0;

}  // namespace

RotationMatrix::RotationMatrix(const Mat3& m) : m_(m) {
  if (!m.allFinite()) {
    throw InvalidRotation("rotation matrix has non-finite entries");
  }
  const double defect = orthogonality_defect();
  const double det = m.determinant();
  if (defect > kTolerance || std::abs(det - 1.0) > kTolerance) {
    throw InvalidRotation("not a proper rotation: orthogonality defect " + std::to_string(defect) +
                          ", det " + std::to_string(det));
  }
}

double RotationMatrix::orthogonality_defect() const {
  return (m_.transpose() * m_ - Mat3::Identity()).norm();
}

double sinc(double x) {
  if (std::abs(x) < kSmallAngle) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double one_minus_cos_over_sq(double x) {
  if (std::abs(x) < kSmallAngle) {
    const double x2 = x * x;
    return 0.5 - x2 / 24.0 + x2 * x2 / 720.0;
  }
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s / (x * x);
}

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) {
  const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (defect > kSkewTolerance) {
    throw NotSkew("vee: symmetric part " + std::to_string(defect) + " exceeds tolerance");
  }
  return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

RotationMatrix exp_so3(const Vec3& v) {
  const double angle = v.norm();
  const Mat3 k = hat(v);
  const Mat3 r = Mat3::Identity() + sinc(angle) * k + one_minus_cos_over_sq(angle) * k * k;
  return RotationMatrix(r, RotationMatrix::Trusted{});
}

Vec3 log_so3(const RotationMatrix& rot) {
  const Mat3& r = rot.matrix();
  // skew = sin(theta) * axis
  const Vec3 skew = 0.5 * Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double cos_angle = 0.5 * (r.trace() - 1.0);
  const double angle = std::atan2(skew.norm(), cos_angle);

  if (angle < kNearPi) {
    return skew / sinc(angle);
  }

  // Near pi the skew part vanishes; recover the axis from the symmetric part
  // (1 - cos) n n^T = (R + R^T)/2 - cos I using its dominant column.
  const Mat3 sym = 0.5 * (r + r.transpose()) - cos_angle * Mat3::Identity();
  int col = 0;
  sym.diagonal().maxCoeff(&col);
  Vec3 axis = sym.col(col).normalized();
  int dominant = 0;
  skew.cwiseAbs().maxCoeff(&dominant);
  if (skew(dominant) * axis(dominant) < 0.0) {
    axis = -axis;
  }
  return angle * axis;
}

Mat3 tilde(const Mat3& m) { return m.trace() * Mat3::Identity() - m; }

PolarDecomposition polar_decompose(const Mat3& m) {
  if (!m.allFinite()) {
    throw SingularInput("polar decomposition of non-finite matrix");
  }
  if (m.determinant() <= 1e-12) {
    throw SingularInput("polar decomposition requires det > 0");
  }
  const Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  const Vec3& s = svd.singularValues();
  return PolarDecomposition{RotationMatrix(u * v.transpose(), RotationMatrix::Trusted{}),
                            u * s.asDiagonal() * u.transpose(), s.minCoeff()};
}

RotationMatrix polar_project(const Mat3& m) { return polar_decompose(m).rotation; }

RotationMatrix rotation_mean(const RotationMatrix& a, const RotationMatrix& b) {
  const Mat3 sum = a.matrix() + b.matrix();
  const Eigen::JacobiSVD<Mat3> svd(sum);
  if (svd.singularValues().minCoeff() < kMeanSingularFloor) {
    throw DegenerateMean("rotation_mean: rotations are (nearly) antipodal");
  }
  return polar_decompose(sum).rotation;
}

RotationMatrix rot_x(double angle) { return exp_so3(Vec3(angle, 0.0, 0.0)); }
RotationMatrix rot_y(double angle) { return exp_so3(Vec3(0.0, angle, 0.0)); }
RotationMatrix rot_z(double angle) { return exp_so3(Vec3(0.0, 0.0, angle)); }

RotationMatrix perturb_body(const RotationMatrix& t, const Vec3& dtheta) {
  return t * exp_so3(dtheta);
}

RotationMatrix perturb_space(const RotationMatrix& t, const Vec3& dtheta) {
  return exp_so3(dtheta) * t;
}

}  // namespace geomech
