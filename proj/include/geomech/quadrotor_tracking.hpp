#pragma once

#include <Eigen/Core>
#include <optional>

#include "geomech/attitude_controller.hpp"
#include "geomech/rigid_body.hpp"
#include "geomech/so3.hpp"

namespace geomech {

using Vec4 = Eigen::Vector4d;

/// Translational backstepping weights. A and C only shape the Lyapunov
/// function; B and D enter the force command.
struct PositionGains {
  Mat3 A = Mat3::Identity();
  Mat3 B = 2.0 * Mat3::Identity();
  Mat3 C = Mat3::Identity();
  Mat3 D = 2.0 * Mat3::Identity();

  void validate() const;

  /// A = C = I, B = 2I, D = m I: one-second velocity loop for any mass.
  static PositionGains mass_scaled(double mass);
};

/// Inner-loop defaults for the quadrotor: P = F = 4I, S = I, k_R = 1.
AttitudeGains default_quadrotor_attitude_gains();

struct TrajectoryReference {
  Vec3 r_d = Vec3::Zero();
  Vec3 v_d = Vec3::Zero();
  Vec3 a_d = Vec3::Zero();
  Vec3 b_1d = Vec3::UnitX();
};

/// v_tar = v_d - B (r - r_d)
Vec3 velocity_target(const Vec3& r, const TrajectoryReference& ref, const PositionGains& gains);
/// d/dt v_tar = a_d - B (v - v_d)
Vec3 velocity_target_rate(const Vec3& v, const TrajectoryReference& ref, const PositionGains& gains);

/// Inertial force the thrust should deliver: m dv_tar - m G - D (v - v_tar).
Vec3 force_command(const Vec3& r, const Vec3& v, const TrajectoryReference& ref, const QuadrotorParams& params,
                   const PositionGains& gains);

/// Projection of the force command on the current body z-axis. Not clamped.
double thrust_scalar(const Vec3& force_cmd, const RotationMatrix& R);

/// R_c = [b1c, b3c x b1c, b3c] with b3c along the force command and b1c the
/// projection of b_1d onto the plane normal to b3c.
/// Throws ZeroForce or DegenerateHeading.
RotationMatrix commanded_attitude(const Vec3& force_cmd, const Vec3& b_1d);

/// 1/2 e_r.A e_r + 1/2 (v - v_tar).C (v - v_tar)
double translational_lyapunov(const Vec3& r, const Vec3& v, const TrajectoryReference& ref,
                              const PositionGains& gains);

/// Angular velocity and acceleration of the commanded attitude from its
/// samples at consecutive controller ticks, by backward differences.
class CommandDifferentiator {
 public:
  explicit CommandDifferentiator(double dt);

  struct Rates {
    Vec3 Omega = Vec3::Zero();
    Vec3 Omega_dot = Vec3::Zero();
  };

  Rates update(const RotationMatrix& R_c);
  void reset();

 private:
  double dt_;
  std::optional<RotationMatrix> last_R_;
  std::optional<Vec3> last_Omega_;
};

struct TrackingDiagnostics {
  Vec3 e_r = Vec3::Zero();
  Vec3 e_v = Vec3::Zero();       // v - v_d
  Vec3 e_R = Vec3::Zero();       // against R_c
  Vec3 e_Omega = Vec3::Zero();
  double psi = 0.0;
  RotationMatrix R_c;
  Vec3 Omega_c = Vec3::Zero();
  Vec3 Omega_c_dot = Vec3::Zero();
  Vec3 force_cmd = Vec3::Zero();
  double translational_V = 0.0;
  bool negative_thrust = false;
};

struct TrackingOutput {
  double f = 0.0;
  Vec3 q = Vec3::Zero();
  TrackingDiagnostics diag;
};

/// One controller tick: position loop -> (f, R_c), then the attitude loop with
/// R_d = R_c. `diff` carries R_c history between ticks.
TrackingOutput tracking_step(const QuadrotorState& state, const TrajectoryReference& ref,
                             const QuadrotorParams& params, const PositionGains& gains,
                             const AttitudeGains& att_gains, CommandDifferentiator& diff,
                             TorqueForm form = TorqueForm::kExact);

/// Plus-configuration allocation. Rotors sit at +x, +y, -x, -y at distance d;
/// rotors 1 and 3 spin counter-clockwise seen from above (+z), 2 and 4
/// clockwise. Rotor i produces thrust T_i along body z and a reaction torque
/// -s_i kappa T_i about body z, with s = (+1, -1, +1, -1).
class Mixer {
 public:
  Mixer(double arm, double kappa);

  static constexpr double kSpin[4] = {1.0, -1.0, 1.0, -1.0};

  Vec4 rotor_thrusts(double f, const Vec3& q) const;
  /// (f, q) produced by the given rotor thrusts.
  std::pair<double, Vec3> wrench(const Vec4& thrusts) const;
  /// Hub position of rotor i in the body frame.
  Vec3 hub(int i) const;

  double arm() const { return d_; }
  double kappa() const { return kappa_; }

 private:
  double d_;
  double kappa_;
  Eigen::Matrix4d map_;      // thrusts -> (f, q)
  Eigen::Matrix4d inverse_;
};

}  // namespace geomech
