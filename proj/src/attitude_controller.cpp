#include "geomech/attitude_controller.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "geomech/errors.hpp"

namespace geomech {

namespace {

constexpr double kAntipodalFloor = 1e-12;

// sqrt(1 + tr(R_d^T R)), refusing the 180 degree error set. Evaluated as
// 2 |cos(theta/2)| from the error angle so that it keeps full relative
// precision as theta approaches pi, where 1 + tr(E) cancels.
double root_one_plus_trace(const RotationMatrix& R, const RotationMatrix& R_d) {
  const Mat3 e = (R_d.transpose() * R).matrix();
  const double sin_angle = 0.5 * Vec3(e(2, 1) - e(1, 2), e(0, 2) - e(2, 0), e(1, 0) - e(0, 1)).norm();
  const double angle = std::atan2(sin_angle, 0.5 * (e.trace() - 1.0));
  const double half_cos = std::cos(0.5 * angle);
  const double s = 4.0 * half_cos * half_cos;
  if (s < kAntipodalFloor) {
    throw AntipodalError("attitude error is at 180 degrees; control law undefined");
  }
  return 2.0 * half_cos;
}

}  // namespace

bool is_symmetric_positive_definite(const Mat3& m) {
  if (!m.allFinite() || (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    return false;
  }
  return Eigen::SelfAdjointEigenSolver<Mat3>(m).eigenvalues().minCoeff() > 0.0;
}

AttitudeGains AttitudeGains::inertia_weighted(const InertiaTensor& J) {
  AttitudeGains g;
  g.P = J.matrix();
  g.F = J.matrix();
  return g;
}

void AttitudeGains::validate() const {
  if (!is_symmetric_positive_definite(P)) throw InputError("attitude gain P must be symmetric positive definite");
  if (!is_symmetric_positive_definite(F)) throw InputError("attitude gain F must be symmetric positive definite");
  if (!is_symmetric_positive_definite(S)) throw InputError("attitude gain S must be symmetric positive definite");
  if (!(k_R > 0.0)) throw InputError("attitude gain k_R must be > 0");
}

double attitude_error_psi(const RotationMatrix& R, const RotationMatrix& R_d) {
  return 2.0 - root_one_plus_trace(R, R_d);
}

Vec3 attitude_error_vector(const RotationMatrix& R, const RotationMatrix& R_d) {
  const double root = root_one_plus_trace(R, R_d);
  const Mat3 e = (R_d.transpose() * R).matrix();
  return vee(e - e.transpose()) / (2.0 * root);
}

Vec3 angular_velocity_error(const RotationMatrix& R, const Vec3& Omega, const AttitudeReference& ref) {
  return Omega - (R.transpose() * ref.R_d) * ref.Omega_d;
}

Vec3 omega_target(const RotationMatrix& R, const AttitudeReference& ref, const AttitudeGains& gains) {
  return -gains.P * attitude_error_vector(R, ref.R_d) + (R.transpose() * ref.R_d) * ref.Omega_d;
}

Mat3 beta_matrix(const RotationMatrix& R, const RotationMatrix& R_d) {
  const double root = root_one_plus_trace(R, R_d);
  const Vec3 e_r = attitude_error_vector(R, R_d);
  const Mat3 rt_rd = (R.transpose() * R_d).matrix();
  return (2.0 * e_r * e_r.transpose() + rt_rd.trace() * Mat3::Identity() - rt_rd) / (2.0 * root);
}

Vec3 control_torque(const RotationMatrix& R, const Vec3& Omega, const AttitudeReference& ref,
                    const InertiaTensor& J, const AttitudeGains& gains, TorqueForm form) {
  const Mat3& j = J.matrix();
  const Mat3 rt_rd = (R.transpose() * ref.R_d).matrix();
  const Vec3 e_omega = angular_velocity_error(R, Omega, ref);
  const Vec3 e_r_dot = beta_matrix(R, ref.R_d) * e_omega;
  const Vec3 beta_term = form == TorqueForm::kExact ? Vec3(gains.P * e_r_dot) : e_r_dot;
  return Omega.cross(j * Omega) + j * (rt_rd * ref.Omega_d_dot) -
         j * (hat(Omega) * (rt_rd * ref.Omega_d)) - j * beta_term -
         gains.F * (Omega - omega_target(R, ref, gains));
}

double attitude_lyapunov(const RotationMatrix& R, const Vec3& Omega, const AttitudeReference& ref,
                         const AttitudeGains& gains) {
  const Vec3 e = Omega - omega_target(R, ref, gains);
  return gains.k_R * attitude_error_psi(R, ref.R_d) + 0.5 * e.dot(gains.S * e);
}

}  // namespace geomech
