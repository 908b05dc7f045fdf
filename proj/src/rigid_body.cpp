#include "geomech/rigid_body.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <string>
#include <utility>

#include "geomech/errors.hpp"

namespace geomech {

InertiaTensor::InertiaTensor(const Mat3& j) : j_(j) {
  if (!j.allFinite()) {
    throw InvalidInertia("inertia has non-finite entries");
  }
  if ((j - j.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidInertia("inertia is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(j);
  const Vec3 l = eig.eigenvalues();
  if (l.minCoeff() <= 0.0) {
    throw InvalidInertia("inertia is not positive definite (min eigenvalue " +
                         std::to_string(l.minCoeff()) + ")");
  }
  for (int k = 0; k < 3; ++k) {
    if (l((k + 1) % 3) + l((k + 2) % 3) < l(k) - 1e-9) {
      throw InvalidInertia("principal moments violate the triangle inequality");
    }
  }
  j_inv_ = j.inverse();
}

InertiaTensor InertiaTensor::diagonal(double jx, double jy, double jz) {
  return InertiaTensor(Vec3(jx, jy, jz).asDiagonal().toDenseMatrix());
}

QuadrotorParams::QuadrotorParams(double mass, InertiaTensor inertia, double arm, double gravity)
    : m(mass), J(std::move(inertia)), d(arm), g(gravity) {
  if (!(m > 0.0) || !(d > 0.0) || !(g > 0.0)) {
    throw InputError("quadrotor parameters require m > 0, d > 0, g > 0");
  }
}

AttitudeVector operator+(const AttitudeVector& a, const AttitudeVector& b) {
  return {a.T + b.T, a.omega + b.omega};
}

AttitudeVector operator*(double s, const AttitudeVector& a) { return {s * a.T, s * a.omega}; }

QuadrotorVector operator+(const QuadrotorVector& a, const QuadrotorVector& b) {
  return {a.r + b.r, a.v + b.v, a.R + b.R, a.Omega + b.Omega};
}

QuadrotorVector operator*(double s, const QuadrotorVector& a) {
  return {s * a.r, s * a.v, s * a.R, s * a.Omega};
}

AttitudeVector to_ambient(const RigidBodyState& s) { return {s.T.matrix(), s.omega}; }

QuadrotorVector to_ambient(const QuadrotorState& s) { return {s.r, s.v, s.R.matrix(), s.Omega}; }

AttitudeVector attitude_rhs(const Mat3& T, const Vec3& omega, const InertiaTensor& J,
                            const Vec3& moment, const PotentialMoment& potential) {
  Vec3 total = moment - omega.cross(J.matrix() * omega);
  if (potential) {
    total += potential(polar_project(T));
  }
  return {T * hat(omega), J.inverse() * total};
}

AttitudeVector attitude_rhs(const RigidBodyState& state, const InertiaTensor& J, const Vec3& moment,
                            const PotentialMoment& potential) {
  return attitude_rhs(state.T.matrix(), state.omega, J, moment, potential);
}

QuadrotorVector quadrotor_rhs(const QuadrotorVector& s, const QuadrotorParams& p, double f,
                              const Vec3& moment, const BodyWrench& extra) {
  const Vec3 body_force = f * Vec3::UnitZ() + extra.force_body;
  const Mat3& jm = p.J.matrix();
  return {s.v, p.gravity_vector() + (s.R * body_force) / p.m, s.R * hat(s.Omega),
          p.J.inverse() * (moment + extra.moment_body - s.Omega.cross(jm * s.Omega))};
}

QuadrotorVector quadrotor_rhs(const QuadrotorState& state, const QuadrotorParams& params, double f,
                              const Vec3& moment, const BodyWrench& extra) {
  return quadrotor_rhs(to_ambient(state), params, f, moment, extra);
}

double kinetic_energy(const Vec3& omega, const InertiaTensor& J) {
  return 0.5 * omega.dot(J.matrix() * omega);
}

double kinetic_energy(const RigidBodyState& state, const InertiaTensor& J) {
  return kinetic_energy(state.omega, J);
}

Vec3 spatial_momentum(const RigidBodyState& state, const InertiaTensor& J) {
  return state.T * (J.matrix() * state.omega);
}

RigidBodyState rk4_step(const AttitudeRhs& rhs, const RigidBodyState& state, double t, double dt) {
  const AttitudeVector next = rk4_combine(rhs, to_ambient(state), t, dt);
  return {polar_project(next.T), next.omega};
}

QuadrotorState rk4_step(const QuadrotorRhs& rhs, const QuadrotorState& state, double t, double dt) {
  const QuadrotorVector next = rk4_combine(rhs, to_ambient(state), t, dt);
  return {next.r, next.v, polar_project(next.R), next.Omega};
}

}  // namespace geomech
