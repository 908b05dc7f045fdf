#pragma once

#include "geomech/rigid_body.hpp"
#include "geomech/so3.hpp"

namespace geomech {

// Geometric backstepping attitude tracking on SO(3), built on the error
// function psi(R, R_d) = 2 - sqrt(1 + tr(R_d^T R)).

struct AttitudeReference {
  RotationMatrix R_d;
  Vec3 Omega_d = Vec3::Zero();      // desired-body frame
  Vec3 Omega_d_dot = Vec3::Zero();
};

struct AttitudeGains {
  Mat3 P = Mat3::Identity();
  Mat3 F = Mat3::Identity();
  double k_R = 1.0;
  Mat3 S = Mat3::Identity();

  /// P = F = J, S = I, k_R = 1.
  static AttitudeGains inertia_weighted(const InertiaTensor& J);
  /// Throws InputError unless P, F, S are symmetric positive definite and k_R > 0.
  void validate() const;
};

/// Which expansion of J * d/dt(Omega_tar) enters the torque.
enum class TorqueForm {
  // J d/dt(Omega_tar) with d/dt(e_R) = beta e_Omega premultiplied by P.
  kExact,
  // The expanded law with the P factor on the beta term dropped.
  kExpandedLiteral,
};

double attitude_error_psi(const RotationMatrix& R, const RotationMatrix& R_d);
Vec3 attitude_error_vector(const RotationMatrix& R, const RotationMatrix& R_d);
Vec3 angular_velocity_error(const RotationMatrix& R, const Vec3& Omega, const AttitudeReference& ref);
Vec3 omega_target(const RotationMatrix& R, const AttitudeReference& ref, const AttitudeGains& gains);

/// d/dt e_R = beta e_Omega.
Mat3 beta_matrix(const RotationMatrix& R, const RotationMatrix& R_d);

Vec3 control_torque(const RotationMatrix& R, const Vec3& Omega, const AttitudeReference& ref,
                    const InertiaTensor& J, const AttitudeGains& gains,
                    TorqueForm form = TorqueForm::kExact);

/// V_a = k_R psi + 1/2 (Omega - Omega_tar)^T S (Omega - Omega_tar).
double attitude_lyapunov(const RotationMatrix& R, const Vec3& Omega, const AttitudeReference& ref,
                         const AttitudeGains& gains);

bool is_symmetric_positive_definite(const Mat3& m);

}  // namespace geomech
