#include "geomech/variational_integrator.hpp"

#include <Eigen/LU>
#include <cmath>
#include <string>

#include "geomech/errors.hpp"

namespace geomech {

namespace {

constexpr double kSmallAngle = 1e-4;
constexpr double kFdStep = 1e-7;
constexpr double kMinFPivot = 1e-6;

// F = ((x cos x - sin x)/x^3) psi psi^T + (sin x / x) I, x = |psi|.
Mat3 f_matrix(const Vec3& psi) {
  const double x = psi.norm();
  double radial;  // (x cos x - sin x) / x^3
  if (x < kSmallAngle) {
    const double x2 = x * x;
    radial = -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0;
  } else {
    radial = (x * std::cos(x) - std::sin(x)) / (x * x * x);
  }
  return radial * psi * psi.transpose() + sinc(x) * Mat3::Identity();
}

struct Evaluation {
  MidpointQuantities mids;
  Vec3 moment_space = Vec3::Zero();
  Vec3 residual = Vec3::Zero();
};

}  // namespace

MidpointQuantities midpoint_quantities(const RotationMatrix& T_k, const RotationMatrix& T_k1, double dt) {
  MidpointQuantities q;
  q.dt = dt;
  q.T_mid = rotation_mean(T_k, T_k1);
  q.V = (T_k.matrix() + T_k1.matrix()) * q.T_mid.matrix().transpose();
  q.V = 0.5 * (q.V + q.V.transpose());
  q.R_rel = T_k1 * T_k.transpose();
  q.psi = log_so3(q.R_rel);
  q.omega_mid = (q.T_mid.transpose() * q.psi) / dt;
  q.Y_k = T_k.matrix() * q.T_mid.matrix().transpose();
  q.Y_k1 = T_k1.matrix() * q.T_mid.matrix().transpose();
  q.F_mat = f_matrix(q.psi);
  // F has eigenvalues sinc(|psi|) (twice) and cos(|psi|).
  if (std::cos(q.psi.norm()) < kMinFPivot) {
    throw DegenerateMean("relative rotation of " + std::to_string(q.psi.norm()) +
                         " rad per step is too large; reduce dt");
  }
  const Mat3 v_tilde_inv = tilde(q.V).inverse();
  q.W_k = v_tilde_inv * tilde(q.Y_k);
  q.W_k1 = v_tilde_inv * tilde(q.Y_k1);
  return q;
}

Vec3 theta_minus(const MidpointQuantities& q, const InertiaTensor& J) {
  const Mat3 f_inv = q.F_mat.inverse();
  const Mat3& r = q.R_rel.matrix();
  const Mat3 a_k = hat(q.psi) * q.W_k - 0.5 * f_inv * tilde(r) * r;
  return -(a_k.transpose() * (q.T_mid * (J.matrix() * q.omega_mid)));
}

Vec3 theta_minus(const RotationMatrix& T_k, const RotationMatrix& T_k1, double dt, const InertiaTensor& J) {
  return theta_minus(midpoint_quantities(T_k, T_k1, dt), J);
}

Vec3 theta_plus(const MidpointQuantities& q, const InertiaTensor& J) {
  const Mat3 f_inv = q.F_mat.inverse();
  const Mat3 a_k1 = hat(q.psi) * q.W_k1 + 0.5 * f_inv * tilde(q.R_rel.matrix());
  return a_k1.transpose() * (q.T_mid * (J.matrix() * q.omega_mid));
}

Vec3 theta_plus(const RotationMatrix& T_km1, const RotationMatrix& T_k, double dt, const InertiaTensor& J) {
  return theta_plus(midpoint_quantities(T_km1, T_k, dt), J);
}

DiscreteForces discrete_forces(const Vec3& M_minus_half, const Vec3& M_plus_half,
                               const MidpointQuantities& previous, const MidpointQuantities& next) {
  return {previous.W_k1.transpose() * M_minus_half, next.W_k.transpose() * M_plus_half};
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw InputError("integrator dt must be > 0");
  if (!(newton_tol > 0.0)) throw InputError("integrator newton_tol must be > 0");
  if (max_iters < 1) throw InputError("integrator max_iters must be >= 1");
}

StepResult vi_step(const RigidBodyState& state, double t, const MomentFn& moment_fn,
                   const InertiaTensor& J, const IntegratorConfig& cfg) {
  cfg.validate();
  const double dt = cfg.dt;
  const RotationMatrix& T_k = state.T;
  const Vec3 p_k = T_k * (J.matrix() * state.omega);
  const double t_mid = t + 0.5 * dt;

  // Position-momentum form: find T_k+1 = exp(eta) T_k with
  //   theta_minus(T_k, T_k+1) - dt * F_minus = p_k.
  auto evaluate = [&](const Vec3& eta) {
    Evaluation e;
    e.mids = midpoint_quantities(T_k, exp_so3(eta) * T_k, dt);
    if (moment_fn) {
      e.moment_space = e.mids.T_mid * moment_fn(t_mid, e.mids.T_mid, e.mids.omega_mid);
    }
    e.residual = theta_minus(e.mids, J) - dt * (e.mids.W_k.transpose() * e.moment_space) - p_k;
    return e;
  };

  Vec3 eta = dt * (T_k * state.omega);
  Evaluation current = evaluate(eta);
  double norm = current.residual.lpNorm<Eigen::Infinity>();
  int iters = 0;
  while (norm >= cfg.newton_tol && iters < cfg.max_iters) {
    ++iters;
    Mat3 jac;
    for (int i = 0; i < 3; ++i) {
      Vec3 shifted = eta;
      shifted(i) += kFdStep;
      jac.col(i) = (evaluate(shifted).residual - current.residual) / kFdStep;
    }
    const Vec3 delta = jac.partialPivLu().solve(current.residual);

    double step = 1.0;
    Vec3 trial_eta = eta - delta;
    Evaluation trial = evaluate(trial_eta);
    double trial_norm = trial.residual.lpNorm<Eigen::Infinity>();
    for (int halvings = 0; trial_norm > norm && halvings < 30; ++halvings) {
      step *= 0.5;
      trial_eta = eta - step * delta;
      trial = evaluate(trial_eta);
      trial_norm = trial.residual.lpNorm<Eigen::Infinity>();
    }
    if (trial_norm > norm) {
      break;  // no descent along the Newton direction
    }
    eta = trial_eta;
    current = std::move(trial);
    norm = trial_norm;
  }
  if (!(norm < cfg.newton_tol)) {
    throw NoConvergence("vi_step: residual " + std::to_string(norm) + " after " +
                        std::to_string(iters) + " Newton iterations");
  }

  const MidpointQuantities& q = current.mids;
  const RotationMatrix T_next = exp_so3(eta) * T_k;
  const Vec3 p_next = theta_plus(q, J) + dt * (q.W_k1.transpose() * current.moment_space);
  const Vec3 omega_next = J.inverse() * (T_next.transpose() * p_next);
  return StepResult{T_next, omega_next, iters, norm};
}

AttitudeTrajectory simulate(const RigidBodyState& initial, const InertiaTensor& J,
                            const MomentFn& moment_fn, const IntegratorConfig& cfg, double t_final) {
  cfg.validate();
  if (!(t_final >= 0.0)) throw InputError("t_final must be >= 0");
  const long steps = std::lround(t_final / cfg.dt);

  AttitudeTrajectory out;
  out.t.reserve(steps + 1);
  out.states.reserve(steps + 1);
  out.newton_iters.reserve(steps);
  out.residuals.reserve(steps);
  out.t.push_back(0.0);
  out.states.push_back(initial);

  RigidBodyState s = initial;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    StepResult r = [&] {
      try {
        return vi_step(s, t, moment_fn, J, cfg);
      } catch (const NumericalError& e) {
        throw StepFailure(e.what(), k, t);
      }
    }();
    s = RigidBodyState{r.T_next, r.omega_next};
    out.t.push_back(static_cast<double>(k + 1) * cfg.dt);
    out.states.push_back(s);
    out.newton_iters.push_back(r.newton_iters);
    out.residuals.push_back(r.residual);
  }
  return out;
}

}  // namespace geomech
