#pragma once

#include <functional>
#include <vector>

#include "geomech/rigid_body.hpp"
#include "geomech/so3.hpp"

namespace geomech {

// Second-order forced Lie-group variational integrator for the rigid body on
// SO(3). The discrete Lagrangian is the midpoint rule
//
//   L_d(T_k, T_k+1) = dt * 1/2 w^T J w,   w = (1/dt) T_mid^T psi,
//
// where T_mid is the polar mean of (T_k, T_k+1) and psi the space-frame
// rotation vector of T_k+1 T_k^T. All variations are space-frame
// (dT = hat(dtheta) T), so the discrete momenta returned below are
// inertial-frame covectors; at a node they equal T J omega.

struct MidpointQuantities {
  RotationMatrix T_mid;
  Mat3 V;               // T_k + T_k+1 = V T_mid
  RotationMatrix R_rel; // T_k+1 T_k^T
  Vec3 psi;             // log of R_rel
  Vec3 omega_mid;       // body-frame midpoint angular velocity
  Mat3 Y_k;             // T_k T_mid^T
  Mat3 Y_k1;            // T_k+1 T_mid^T
  Mat3 F_mat;           // d/dpsi of sinc(|psi|) psi
  double dt;

  // Maps from node variations to the midpoint variation:
  // dtheta_mid = W_k dtheta_k + W_k1 dtheta_k+1, with W = tilde(V)^-1 tilde(Y).
  Mat3 W_k;
  Mat3 W_k1;
};

/// Throws DegenerateMean when T_k and T_k1 are (nearly) antipodal or the
/// relative rotation is too large for F_mat to be inverted (|psi| -> pi/2).
MidpointQuantities midpoint_quantities(const RotationMatrix& T_k, const RotationMatrix& T_k1, double dt);

/// -D1 L_d(T_k, T_k1)
Vec3 theta_minus(const MidpointQuantities& mids, const InertiaTensor& J);
Vec3 theta_minus(const RotationMatrix& T_k, const RotationMatrix& T_k1, double dt, const InertiaTensor& J);

/// D2 L_d(T_km1, T_k)
Vec3 theta_plus(const MidpointQuantities& mids, const InertiaTensor& J);
Vec3 theta_plus(const RotationMatrix& T_km1, const RotationMatrix& T_k, double dt, const InertiaTensor& J);

/// Discrete generalized forces at node k from inertial-frame midpoint moments.
/// `previous` is the interval [k-1, k] and `next` is [k, k+1].
struct DiscreteForces {
  Vec3 plus;   // M_{k-1/2} . tilde(V)^-1 tilde(Y_k) on [k-1, k]
  Vec3 minus;  // M_{k+1/2} . tilde(V)^-1 tilde(Y_k) on [k, k+1]
};

DiscreteForces discrete_forces(const Vec3& M_minus_half, const Vec3& M_plus_half,
                               const MidpointQuantities& previous, const MidpointQuantities& next);

struct IntegratorConfig {
  double dt = 0.01;
  double newton_tol = 1e-12;  // residual infinity norm
  int max_iters = 50;

  void validate() const;
};

/// Body-frame non-conservative moment evaluated at the interval midpoint.
using MomentFn = std::function<Vec3(double t, const RotationMatrix& T_mid, const Vec3& omega_mid)>;

struct StepResult {
  RotationMatrix T_next;
  Vec3 omega_next;
  int newton_iters;
  double residual;
};

/// One step of the flow map (T_k, omega_k) -> (T_k+1, omega_k+1) at time t.
/// An empty moment_fn means a free body.
StepResult vi_step(const RigidBodyState& state, double t, const MomentFn& moment_fn,
                   const InertiaTensor& J, const IntegratorConfig& cfg);

struct AttitudeTrajectory {
  std::vector<double> t;
  std::vector<RigidBodyState> states;
  std::vector<int> newton_iters;   // one entry per step (size = states - 1)
  std::vector<double> residuals;
};

AttitudeTrajectory simulate(const RigidBodyState& initial, const InertiaTensor& J,
                            const MomentFn& moment_fn, const IntegratorConfig& cfg, double t_final);

}  // namespace geomech
