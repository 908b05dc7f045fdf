#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace geomech {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Proper rotation matrix (element of SO(3)).
///
/// The public constructor refuses matrices whose orthogonality defect
/// ||m^T m - I||_F or determinant error exceeds kTolerance. Group closure
/// operations (products, transpose, exp) build results directly; the only
/// sanctioned way to repair a drifting matrix is polar_project().
class RotationMatrix {
 public:
  static constexpr double kTolerance = 1e-9;

  RotationMatrix() : m_(Mat3::Identity()) {}
  explicit RotationMatrix(const Mat3& m);

  static RotationMatrix identity() { return RotationMatrix(); }

  const Mat3& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  Vec3 col(int j) const { return m_.col(j); }

  RotationMatrix transpose() const { return RotationMatrix(m_.transpose(), Trusted{}); }
  RotationMatrix operator*(const RotationMatrix& other) const {
    return RotationMatrix(m_ * other.m_, Trusted{});
  }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  /// ||m^T m - I||_F
  double orthogonality_defect() const;

 private:
  struct Trusted {};
  RotationMatrix(const Mat3& m, Trusted) : m_(m) {}

  friend RotationMatrix exp_so3(const Vec3& v);
  friend RotationMatrix polar_project(const Mat3& m);
  friend struct PolarDecomposition polar_decompose(const Mat3& m);

  Mat3 m_;
};

Mat3 hat(const Vec3& v);

/// Inverse of hat(). Returns the vector of the skew part of `m`; throws
/// NotSkew when the symmetric part exceeds 1e-6 (max-abs).
Vec3 vee(const Mat3& m);

/// Rodrigues exponential.
RotationMatrix exp_so3(const Vec3& v);

/// Rotation vector with norm in [0, pi].
Vec3 log_so3(const RotationMatrix& r);

/// Tr(A) I - A
Mat3 tilde(const Mat3& m);

struct PolarDecomposition {
  RotationMatrix rotation;
  Mat3 stretch;               // symmetric positive semi-definite left factor
  double min_singular_value;  // of the decomposed matrix
};

/// Left polar decomposition m = stretch * rotation. Requires det(m) > 0.
PolarDecomposition polar_decompose(const Mat3& m);

/// Nearest rotation in the Frobenius norm. Throws SingularInput if det <= 1e-12.
RotationMatrix polar_project(const Mat3& m);

/// Mean of two rotations: polar factor of (a + b). Throws DegenerateMean when
/// the smallest singular value of (a + b) is below 1e-8.
RotationMatrix rotation_mean(const RotationMatrix& a, const RotationMatrix& b);

RotationMatrix rot_x(double angle);
RotationMatrix rot_y(double angle);
RotationMatrix rot_z(double angle);

// Variation conventions. Body-frame perturbation T -> T exp(dtheta) matches
// the continuous equations of motion; space-frame perturbation
// T -> exp(dtheta) T is what the discrete integrator differentiates against.
RotationMatrix perturb_body(const RotationMatrix& t, const Vec3& dtheta);
RotationMatrix perturb_space(const RotationMatrix& t, const Vec3& dtheta);

// Analytic series factors, switched to Taylor expansions for |x| < 1e-4.
double sinc(double x);             // sin x / x
double one_minus_cos_over_sq(double x);  // (1 - cos x) / x^2

}  // namespace geomech
