#pragma once

#include <functional>

#include "geomech/so3.hpp"

namespace geomech {

inline constexpr double kStandardGravity = 9.81;

/// Symmetric positive-definite body-frame inertia (kg m^2) whose principal
/// moments satisfy the triangle inequalities.
class InertiaTensor {
 public:
  explicit InertiaTensor(const Mat3& j);
  static InertiaTensor diagonal(double jx, double jy, double jz);

  const Mat3& matrix() const { return j_; }
  const Mat3& inverse() const { return j_inv_; }

 private:
  Mat3 j_;
  Mat3 j_inv_;
};

struct RigidBodyState {
  RotationMatrix T;  // body -> inertial
  Vec3 omega = Vec3::Zero();  // body frame, rad/s
};

struct QuadrotorState {
  Vec3 r = Vec3::Zero();      // inertial position, m
  Vec3 v = Vec3::Zero();      // inertial velocity, m/s
  RotationMatrix R;
  Vec3 Omega = Vec3::Zero();  // body frame, rad/s
};

struct BodyWrench {
  Vec3 force_body = Vec3::Zero();
  Vec3 moment_body = Vec3::Zero();
};

struct QuadrotorParams {
  double m;          // kg
  InertiaTensor J;
  double d;          // arm length, m
  double g = kStandardGravity;

  QuadrotorParams(double mass, InertiaTensor inertia, double arm, double gravity = kStandardGravity);
  Vec3 gravity_vector() const { return Vec3(0.0, 0.0, -g); }
};

/// Optional attitude-potential contribution, returned as a body-frame moment.
using PotentialMoment = std::function<Vec3(const RotationMatrix&)>;

// Ambient-space representations used by explicit integrators. The attitude
// block is a plain matrix here because intermediate Runge-Kutta stages leave
// SO(3).
struct AttitudeVector {
  Mat3 T = Mat3::Identity();
  Vec3 omega = Vec3::Zero();
};

struct QuadrotorVector {
  Vec3 r = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 Omega = Vec3::Zero();
};

AttitudeVector operator+(const AttitudeVector& a, const AttitudeVector& b);
AttitudeVector operator*(double s, const AttitudeVector& a);
QuadrotorVector operator+(const QuadrotorVector& a, const QuadrotorVector& b);
QuadrotorVector operator*(double s, const QuadrotorVector& a);

AttitudeVector to_ambient(const RigidBodyState& s);
QuadrotorVector to_ambient(const QuadrotorState& s);

/// T' = T hat(omega); J omega' = M + M_potential - omega x J omega.
AttitudeVector attitude_rhs(const Mat3& T, const Vec3& omega, const InertiaTensor& J,
                            const Vec3& moment, const PotentialMoment& potential = {});
AttitudeVector attitude_rhs(const RigidBodyState& state, const InertiaTensor& J, const Vec3& moment,
                            const PotentialMoment& potential = {});

/// Full quadrotor rates with thrust f along body z plus an extra body wrench.
QuadrotorVector quadrotor_rhs(const QuadrotorVector& state, const QuadrotorParams& params, double f,
                              const Vec3& moment, const BodyWrench& extra = {});
QuadrotorVector quadrotor_rhs(const QuadrotorState& state, const QuadrotorParams& params, double f,
                              const Vec3& moment, const BodyWrench& extra = {});

double kinetic_energy(const RigidBodyState& state, const InertiaTensor& J);
double kinetic_energy(const Vec3& omega, const InertiaTensor& J);

/// Inertial-frame angular momentum T J omega.
Vec3 spatial_momentum(const RigidBodyState& state, const InertiaTensor& J);

using AttitudeRhs = std::function<AttitudeVector(double t, const AttitudeVector&)>;
using QuadrotorRhs = std::function<QuadrotorVector(double t, const QuadrotorVector&)>;

/// Classical fourth-order Runge-Kutta step in ambient coordinates, then the
/// attitude is projected back onto SO(3).
RigidBodyState rk4_step(const AttitudeRhs& rhs, const RigidBodyState& state, double t, double dt);
QuadrotorState rk4_step(const QuadrotorRhs& rhs, const QuadrotorState& state, double t, double dt);

template <class Y, class F>
Y rk4_combine(const F& rhs, const Y& y, double t, double dt) {
  const Y k1 = rhs(t, y);
  const Y k2 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k1);
  const Y k3 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k2);
  const Y k4 = rhs(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace geomech
