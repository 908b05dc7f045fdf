#include "geomech/quadrotor_tracking.hpp"

#include <Eigen/LU>
#include <cmath>

#include "geomech/errors.hpp"

namespace geomech {

namespace {

constexpr double kMinForce = 1e-8;
constexpr double kMinHeadingAngle = 1e-4;

}  // namespace

void PositionGains::validate() const {
  if (!is_symmetric_positive_definite(A)) throw InputError("position gain A must be symmetric positive definite");
  if (!is_symmetric_positive_definite(B)) throw InputError("position gain B must be symmetric positive definite");
  if (!is_symmetric_positive_definite(C)) throw InputError("position gain C must be symmetric positive definite");
  if (!is_symmetric_positive_definite(D)) throw InputError("position gain D must be symmetric positive definite");
}

PositionGains PositionGains::mass_scaled(double mass) {
  PositionGains g;
  g.D = mass * Mat3::Identity();
  return g;
}

AttitudeGains default_quadrotor_attitude_gains() {
  AttitudeGains g;
  g.P = 4.0 * Mat3::Identity();
  g.F = 4.0 * Mat3::Identity();
  return g;
}

Vec3 velocity_target(const Vec3& r, const TrajectoryReference& ref, const PositionGains& gains) {
  return ref.v_d - gains.B * (r - ref.r_d);
}

Vec3 velocity_target_rate(const Vec3& v, const TrajectoryReference& ref, const PositionGains& gains) {
  return ref.a_d - gains.B * (v - ref.v_d);
}

Vec3 force_command(const Vec3& r, const Vec3& v, const TrajectoryReference& ref, const QuadrotorParams& params,
                   const PositionGains& gains) {
  return params.m * velocity_target_rate(v, ref, gains) - params.m * params.gravity_vector() -
         gains.D * (v - velocity_target(r, ref, gains));
}

double thrust_scalar(const Vec3& force_cmd, const RotationMatrix& R) { return force_cmd.dot(R.col(2)); }

RotationMatrix commanded_attitude(const Vec3& force_cmd, const Vec3& b_1d) {
  const double norm = force_cmd.norm();
  if (!(norm > kMinForce)) {
    throw ZeroForce("commanded force is zero; thrust direction undefined");
  }
  const Vec3 b3 = force_cmd / norm;
  const Vec3 h = b_1d.normalized();
  const Vec3 cross = b3.cross(h);
  if (std::atan2(cross.norm(), b3.dot(h)) < kMinHeadingAngle ||
      std::atan2(cross.norm(), -b3.dot(h)) < kMinHeadingAngle) {
    throw DegenerateHeading("heading hint b_1d is parallel to the thrust direction");
  }
  const Vec3 b1 = (-b3.cross(cross)).normalized();
  const Vec3 b2 = b3.cross(b1);
  Mat3 m;
  m.col(0) = b1;
  m.col(1) = b2;
  m.col(2) = b3;
  return RotationMatrix(m);
}

double translational_lyapunov(const Vec3& r, const Vec3& v, const TrajectoryReference& ref,
                              const PositionGains& gains) {
  const Vec3 e_r = r - ref.r_d;
  const Vec3 e = v - velocity_target(r, ref, gains);
  return 0.5 * e_r.dot(gains.A * e_r) + 0.5 * e.dot(gains.C * e);
}

CommandDifferentiator::CommandDifferentiator(double dt) : dt_(dt) {
  if (!(dt > 0.0)) throw InputError("controller tick must be > 0");
}

CommandDifferentiator::Rates CommandDifferentiator::update(const RotationMatrix& R_c) {
  Rates out;
  if (last_R_) {
    out.Omega = log_so3(last_R_->transpose() * R_c) / dt_;
    if (last_Omega_) {
      out.Omega_dot = (out.Omega - *last_Omega_) / dt_;
    }
    last_Omega_ = out.Omega;
  }
  last_R_ = R_c;
  return out;
}

void CommandDifferentiator::reset() {
  last_R_.reset();
  last_Omega_.reset();
}

TrackingOutput tracking_step(const QuadrotorState& state, const TrajectoryReference& ref,
                             const QuadrotorParams& params, const PositionGains& gains,
                             const AttitudeGains& att_gains, CommandDifferentiator& diff, TorqueForm form) {
  TrackingOutput out;
  TrackingDiagnostics& d = out.diag;
  d.force_cmd = force_command(state.r, state.v, ref, params, gains);
  d.R_c = commanded_attitude(d.force_cmd, ref.b_1d);
  const CommandDifferentiator::Rates rates = diff.update(d.R_c);
  d.Omega_c = rates.Omega;
  d.Omega_c_dot = rates.Omega_dot;

  const AttitudeReference att{d.R_c, d.Omega_c, d.Omega_c_dot};
  out.f = thrust_scalar(d.force_cmd, state.R);
  out.q = control_torque(state.R, state.Omega, att, params.J, att_gains, form);

  d.e_r = state.r - ref.r_d;
  d.e_v = state.v - ref.v_d;
  d.e_R = attitude_error_vector(state.R, d.R_c);
  d.e_Omega = angular_velocity_error(state.R, state.Omega, att);
  d.psi = attitude_error_psi(state.R, d.R_c);
  d.translational_V = translational_lyapunov(state.r, state.v, ref, gains);
  d.negative_thrust = out.f < 0.0;
  return out;
}

Mixer::Mixer(double arm, double kappa) : d_(arm), kappa_(kappa) {
  if (!(arm > 0.0)) throw InputError("mixer arm length must be > 0");
  if (!(kappa > 0.0)) throw InputError("mixer torque-to-thrust ratio must be > 0");
  for (int i = 0; i < 4; ++i) {
    const Vec3 m = hub(i).cross(Vec3::UnitZ());
    map_(0, i) = 1.0;
    map_(1, i) = m.x();
    map_(2, i) = m.y();
    map_(3, i) = -kSpin[i] * kappa;
  }
  inverse_ = map_.inverse();
}

Vec3 Mixer::hub(int i) const {
  switch (i) {
    case 0: return Vec3(d_, 0.0, 0.0);
    case 1: return Vec3(0.0, d_, 0.0);
    case 2: return Vec3(-d_, 0.0, 0.0);
    case 3: return Vec3(0.0, -d_, 0.0);
    default: throw InputError("rotor index out of range");
  }
}

Vec4 Mixer::rotor_thrusts(double f, const Vec3& q) const {
  return inverse_ * Vec4(f, q.x(), q.y(), q.z());
}

std::pair<double, Vec3> Mixer::wrench(const Vec4& thrusts) const {
  const Vec4 w = map_ * thrusts;
  return {w(0), Vec3(w(1), w(2), w(3))};
}

}  // namespace geomech
