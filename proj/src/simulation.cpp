#include "geomech/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geomech/errors.hpp"

namespace geomech {

namespace {

void append_matrix(std::vector<std::string>& cols, const std::string& prefix) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      cols.push_back(prefix + std::to_string(i) + std::to_string(j));
    }
  }
}

void append_vec(std::vector<std::string>& cols, const std::string& prefix) {
  cols.push_back(prefix + "_x");
  cols.push_back(prefix + "_y");
  cols.push_back(prefix + "_z");
}

void push(std::vector<double>& row, const Mat3& m) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) row.push_back(m(i, j));
  }
}

void push(std::vector<double>& row, const Vec3& v) { row.insert(row.end(), {v.x(), v.y(), v.z()}); }

long step_count(const Scenario& s) { return std::lround(s.t_final / s.dt); }

IntegratorConfig integrator_config(const Scenario& s) {
  IntegratorConfig cfg = s.newton;
  cfg.dt = s.dt;
  return cfg;
}

MomentFn constant_moment(const Vec3& m) {
  if (m.isZero(0.0)) return {};
  return [m](double, const RotationMatrix&, const Vec3&) { return m; };
}

// Runs `body` and rethrows numerical failures tagged with the step.
template <class F>
void guarded(long step, double t, F&& body) {
  try {
    body();
  } catch (const StepFailure&) {
    throw;
  } catch (const NumericalError& e) {
    throw StepFailure(e.what(), step, t);
  }
}

struct Drift {
  double h0 = 0.0;
  Vec3 pi0 = Vec3::Zero();
  double energy_max_rel = 0.0;
  double momentum_max = 0.0;
  double orth_max = 0.0;
  std::vector<double> energy;

  Drift(const RigidBodyState& s, const InertiaTensor& J) { add(s, J, true); }

  void add(const RigidBodyState& s, const InertiaTensor& J, bool first = false) {
    const double h = kinetic_energy(s, J);
    const Vec3 pi = spatial_momentum(s, J);
    if (first) {
      h0 = h;
      pi0 = pi;
    }
    energy.push_back(h);
    energy_max_rel = std::max(energy_max_rel, std::abs(h - h0) / scale());
    momentum_max = std::max(momentum_max, (pi - pi0).norm());
    orth_max = std::max(orth_max, s.T.orthogonality_defect());
  }

  double scale() const { return h0 > 0.0 ? h0 : 1.0; }
  double final_rel() const { return (energy.back() - h0) / scale(); }
};

RigidBodyState rk4_attitude(const RigidBodyState& s, double t, double dt, const InertiaTensor& J, const Vec3& moment) {
  const AttitudeRhs rhs = [&](double, const AttitudeVector& y) { return attitude_rhs(y.T, y.omega, J, moment); };
  return rk4_step(rhs, s, t, dt);
}

RunResult run_free_body(const Scenario& sc) {
  RunResult out;
  auto& cols = out.series.columns;
  cols = {"t"};
  append_matrix(cols, "T");
  append_vec(cols, "omega");
  cols.push_back("H");
  append_vec(cols, "Pi");
  cols.insert(cols.end(), {"orth_defect", "newton_iters", "residual"});

  const IntegratorConfig cfg = integrator_config(sc);
  const MomentFn moment = constant_moment(sc.body_moment);
  const long n = step_count(sc);
  RigidBodyState s = sc.attitude_initial;
  Drift drift(s, sc.J);
  double iters_total = 0.0;

  auto record = [&](double t, int iters, double residual) {
    std::vector<double> row{t};
    push(row, s.T.matrix());
    push(row, s.omega);
    row.push_back(kinetic_energy(s, sc.J));
    push(row, spatial_momentum(s, sc.J));
    row.insert(row.end(), {s.T.orthogonality_defect(), double(iters), residual});
    out.series.rows.push_back(std::move(row));
  };
  record(0.0, 0, 0.0);

  for (long k = 0; k < n; ++k) {
    const double t = k * sc.dt;
    int iters = 0;
    double residual = 0.0;
    guarded(k, t, [&] {
      if (sc.integrator == IntegratorKind::kVariational) {
        const StepResult r = vi_step(s, t, moment, sc.J, cfg);
        s = RigidBodyState{r.T_next, r.omega_next};
        iters = r.newton_iters;
        residual = r.residual;
      } else {
        s = rk4_attitude(s, t, sc.dt, sc.J, sc.body_moment);
      }
    });
    iters_total += iters;
    drift.add(s, sc.J);
    record((k + 1) * sc.dt, iters, residual);
  }

  MetricsSummary& m = out.metrics;
  m.energy_drift_max_rel = drift.energy_max_rel;
  m.momentum_drift_max = drift.momentum_max;
  m.orthogonality_defect_max = drift.orth_max;
  if (sc.integrator == IntegratorKind::kVariational && n > 0) m.newton_iters_mean = iters_total / n;
  m.extras = {{"energy_drift_final_rel", drift.final_rel()},
              {"energy_slope_rel_per_step", regression_slope(drift.energy) / drift.scale()}};
  return out;
}

RunResult run_attitude_track(const Scenario& sc) {
  RunResult out;
  auto& cols = out.series.columns;
  cols = {"t"};
  append_matrix(cols, "R");
  append_vec(cols, "Omega");
  append_matrix(cols, "Rd");
  append_vec(cols, "Omega_d");
  cols.insert(cols.end(), {"psi", "eR_norm", "eOmega_norm"});
  append_vec(cols, "eR");
  append_vec(cols, "eOmega");
  append_vec(cols, "q");
  cols.insert(cols.end(), {"V_a", "H"});
  append_vec(cols, "Pi");
  cols.insert(cols.end(), {"orth_defect", "newton_iters", "gimbal_proximity"});

  const InertiaTensor& J = sc.J;
  const AttitudeGains& gains = sc.attitude_gains;
  const IntegratorConfig cfg = integrator_config(sc);
  const long n = step_count(sc);
  RigidBodyState s = sc.attitude_initial;

  std::vector<double> times;
  std::vector<double> psi_hist;
  double v_prev = 0.0;
  double max_increase = -INFINITY;
  double orth_max = 0.0;
  double iters_total = 0.0;

  auto record = [&](double t, int iters) {
    const EulerSample ref = euler_321_reference(t, sc.euler);
    const double psi = attitude_error_psi(s.T, ref.ref.R_d);
    const Vec3 e_r = attitude_error_vector(s.T, ref.ref.R_d);
    const Vec3 e_o = angular_velocity_error(s.T, s.omega, ref.ref);
    const Vec3 q = control_torque(s.T, s.omega, ref.ref, J, gains, sc.torque_form);
    const double v_a = attitude_lyapunov(s.T, s.omega, ref.ref, gains);
    if (!times.empty()) max_increase = std::max(max_increase, v_a - v_prev);
    v_prev = v_a;
    times.push_back(t);
    psi_hist.push_back(psi);
    orth_max = std::max(orth_max, s.T.orthogonality_defect());

    std::vector<double> row{t};
    push(row, s.T.matrix());
    push(row, s.omega);
    push(row, ref.ref.R_d.matrix());
    push(row, ref.ref.Omega_d);
    row.insert(row.end(), {psi, e_r.norm(), e_o.norm()});
    push(row, e_r);
    push(row, e_o);
    push(row, q);
    row.insert(row.end(), {v_a, kinetic_energy(s, J)});
    push(row, spatial_momentum(s, J));
    row.insert(row.end(), {s.T.orthogonality_defect(), double(iters), ref.gimbal_proximity ? 1.0 : 0.0});
    out.series.rows.push_back(std::move(row));
  };

  const MomentFn vi_moment = [&](double t, const RotationMatrix& T_mid, const Vec3& omega_mid) {
    return control_torque(T_mid, omega_mid, euler_321_reference(t, sc.euler).ref, J, gains, sc.torque_form);
  };
  const AttitudeRhs rk_rhs = [&](double t, const AttitudeVector& y) {
    const RotationMatrix R = polar_project(y.T);
    const Vec3 q = control_torque(R, y.omega, euler_321_reference(t, sc.euler).ref, J, gains, sc.torque_form);
    return attitude_rhs(y.T, y.omega, J, q);
  };

  guarded(0, 0.0, [&] { record(0.0, 0); });
  for (long k = 0; k < n; ++k) {
    const double t = k * sc.dt;
    int iters = 0;
    guarded(k, t, [&] {
      if (sc.integrator == IntegratorKind::kVariational) {
        const StepResult r = vi_step(s, t, vi_moment, J, cfg);
        s = RigidBodyState{r.T_next, r.omega_next};
        iters = r.newton_iters;
      } else {
        s = rk4_step(rk_rhs, s, t, sc.dt);
      }
      record((k + 1) * sc.dt, iters);
    });
    iters_total += iters;
  }

  MetricsSummary& m = out.metrics;
  m.tracking = true;
  m.orthogonality_defect_max = orth_max;
  m.settling_time_5pct = settling_time(times, psi_hist);
  m.steady_state_error = steady_state_mean(psi_hist);
  if (sc.integrator == IntegratorKind::kVariational && n > 0) m.newton_iters_mean = iters_total / n;
  const std::vector<double>& last = out.series.rows.back();
  m.extras = {{"lyapunov_max_increase", n > 0 ? max_increase : 0.0},
              {"final_psi", last[out.series.column_index("psi")]},
              {"final_eOmega_norm", last[out.series.column_index("eOmega_norm")]}};
  return out;
}

RunResult run_quad_track(const Scenario& sc) {
  RunResult out;
  auto& cols = out.series.columns;
  cols = {"t"};
  append_vec(cols, "r");
  append_vec(cols, "v");
  append_matrix(cols, "R");
  append_vec(cols, "Omega");
  append_vec(cols, "r_d");
  append_vec(cols, "e_r");
  append_vec(cols, "e_v");
  cols.insert(cols.end(), {"psi", "eR_norm", "eOmega_norm", "er_norm", "ev_norm", "f"});
  append_vec(cols, "q");
  cols.insert(cols.end(), {"V_trans", "H"});
  append_vec(cols, "Pi");
  cols.insert(cols.end(), {"orth_defect", "negative_thrust"});
  if (sc.aero_enabled) {
    cols.insert(cols.end(), {"rotor_speed_1", "rotor_speed_2", "rotor_speed_3", "rotor_speed_4", "inflow_iters"});
  }

  const QuadrotorParams& p = sc.quad;
  const double weight = p.m * p.g;
  const long n = step_count(sc);
  QuadrotorState s = sc.quad_initial;
  CommandDifferentiator diff(sc.dt);
  std::optional<Mixer> mixer;
  if (sc.aero_enabled) {
    mixer.emplace(p.d, hover_torque_ratio(sc.aero.geometry, sc.aero.rho, 0.25 * weight));
  }

  std::vector<double> times;
  std::vector<double> er_hist;
  std::vector<Vec3> er_vec;
  double orth_max = 0.0;
  long negative = 0;
  int max_inflow = 0;

  for (long k = 0; k <= n; ++k) {
    const double t = k * sc.dt;
    guarded(k, t, [&] {
      const TrajectoryReference ref = circle_reference(t, sc.circle);
      const TrackingOutput ctl = tracking_step(s, ref, p, sc.position_gains, sc.attitude_gains, diff, sc.torque_form);
      const TrackingDiagnostics& d = ctl.diag;

      double f = ctl.f;
      Vec3 q = ctl.q;
      BodyWrench extra;
      VehicleAero aero;
      if (mixer) {
        aero = vehicle_aero(sc.aero, *mixer, mixer->rotor_thrusts(ctl.f, ctl.q), s, weight);
        extra = aero.wrench;
        f = 0.0;
        q = Vec3::Zero();
        max_inflow = std::max(max_inflow, aero.inflow_iterations);
      }

      times.push_back(t);
      er_hist.push_back(d.e_r.norm());
      er_vec.push_back(d.e_r);
      orth_max = std::max(orth_max, s.R.orthogonality_defect());
      negative += d.negative_thrust ? 1 : 0;

      std::vector<double> row{t};
      push(row, s.r);
      push(row, s.v);
      push(row, s.R.matrix());
      push(row, s.Omega);
      push(row, ref.r_d);
      push(row, d.e_r);
      push(row, d.e_v);
      row.insert(row.end(), {d.psi, d.e_R.norm(), d.e_Omega.norm(), d.e_r.norm(), d.e_v.norm(), ctl.f});
      push(row, ctl.q);
      const Vec3 pi = s.R * (p.J.matrix() * s.Omega);
      row.insert(row.end(), {d.translational_V, kinetic_energy(s.Omega, p.J)});
      push(row, pi);
      row.insert(row.end(), {s.R.orthogonality_defect(), d.negative_thrust ? 1.0 : 0.0});
      if (mixer) {
        row.insert(row.end(), {aero.rotor_speed(0), aero.rotor_speed(1), aero.rotor_speed(2), aero.rotor_speed(3),
                               double(aero.inflow_iterations)});
      }
      out.series.rows.push_back(std::move(row));

      if (k == n) return;
      const QuadrotorRhs rhs = [&](double, const QuadrotorVector& y) { return quadrotor_rhs(y, p, f, q, extra); };
      s = rk4_step(rhs, s, t, sc.dt);
    });
  }

  MetricsSummary& m = out.metrics;
  m.tracking = true;
  m.orthogonality_defect_max = orth_max;
  m.settling_time_5pct = settling_time(times, er_hist);
  m.steady_state_error = steady_state_mean(er_hist);
  const std::size_t from = er_vec.size() - er_vec.size() / 4;
  Vec3 axis_mean = Vec3::Zero();
  for (std::size_t i = from; i < er_vec.size(); ++i) axis_mean += er_vec[i].cwiseAbs();
  axis_mean /= double(std::max<std::size_t>(1, er_vec.size() - from));
  m.extras = {{"steady_state_abs_error_x", axis_mean.x()},
              {"steady_state_abs_error_y", axis_mean.y()},
              {"steady_state_abs_error_z", axis_mean.z()},
              {"negative_thrust_steps", double(negative)},
              {"max_inflow_iterations", double(max_inflow)}};
  return out;
}

RunResult run_integrator_compare(const Scenario& sc) {
  RunResult out;
  auto& cols = out.series.columns;
  cols = {"t", "vi_H", "rk4_H"};
  append_vec(cols, "vi_Pi");
  append_vec(cols, "rk4_Pi");
  cols.insert(cols.end(), {"vi_orth_defect", "rk4_orth_defect", "vi_newton_iters", "vi_rk4_attitude_gap"});
  const bool with_ref = sc.reference_dt > 0.0;
  if (with_ref) cols.insert(cols.end(), {"vi_attitude_error", "rk4_attitude_error"});

  const IntegratorConfig cfg = integrator_config(sc);
  const MomentFn moment = constant_moment(sc.body_moment);
  const long n = step_count(sc);
  const long sub = with_ref ? std::lround(sc.dt / sc.reference_dt) : 0;
  const double fine_dt = with_ref ? sc.dt / double(sub) : 0.0;

  RigidBodyState vi = sc.attitude_initial;
  RigidBodyState rk = sc.attitude_initial;
  RigidBodyState ref = sc.attitude_initial;
  Drift vi_drift(vi, sc.J);
  Drift rk_drift(rk, sc.J);
  double iters_total = 0.0;

  auto record = [&](double t, int iters) {
    std::vector<double> row{t, kinetic_energy(vi, sc.J), kinetic_energy(rk, sc.J)};
    push(row, spatial_momentum(vi, sc.J));
    push(row, spatial_momentum(rk, sc.J));
    row.insert(row.end(), {vi.T.orthogonality_defect(), rk.T.orthogonality_defect(), double(iters),
                           attitude_distance(vi.T, rk.T)});
    if (with_ref) row.insert(row.end(), {attitude_distance(vi.T, ref.T), attitude_distance(rk.T, ref.T)});
    out.series.rows.push_back(std::move(row));
  };
  record(0.0, 0);

  for (long k = 0; k < n; ++k) {
    const double t = k * sc.dt;
    int iters = 0;
    guarded(k, t, [&] {
      const StepResult r = vi_step(vi, t, moment, sc.J, cfg);
      vi = RigidBodyState{r.T_next, r.omega_next};
      iters = r.newton_iters;
      rk = rk4_attitude(rk, t, sc.dt, sc.J, sc.body_moment);
      for (long j = 0; j < sub; ++j) ref = rk4_attitude(ref, t + j * fine_dt, fine_dt, sc.J, sc.body_moment);
    });
    iters_total += iters;
    vi_drift.add(vi, sc.J);
    rk_drift.add(rk, sc.J);
    record((k + 1) * sc.dt, iters);
  }

  MetricsSummary& m = out.metrics;
  m.energy_drift_max_rel = vi_drift.energy_max_rel;
  m.momentum_drift_max = vi_drift.momentum_max;
  m.orthogonality_defect_max = vi_drift.orth_max;
  if (n > 0) m.newton_iters_mean = iters_total / n;
  m.extras = {{"vi_energy_drift_final_rel", vi_drift.final_rel()},
              {"vi_energy_slope_rel_per_step", regression_slope(vi_drift.energy) / vi_drift.scale()},
              {"rk4_energy_drift_max_rel", rk_drift.energy_max_rel},
              {"rk4_energy_drift_final_rel", rk_drift.final_rel()},
              {"rk4_momentum_drift_max", rk_drift.momentum_max},
              {"rk4_orthogonality_defect_max", rk_drift.orth_max}};
  if (with_ref) {
    m.extras.emplace_back("vi_attitude_error_final", attitude_distance(vi.T, ref.T));
    m.extras.emplace_back("rk4_attitude_error_final", attitude_distance(rk.T, ref.T));
  }
  return out;
}

}  // namespace

std::size_t TimeSeries::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column named " + name);
  return std::size_t(it - columns.begin());
}

std::vector<double> TimeSeries::column(const std::string& name) const {
  const std::size_t idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[idx]);
  return out;
}

double MetricsSummary::extra(const std::string& key) const {
  for (const auto& [k, v] : extras) {
    if (k == key) return v;
  }
  throw std::out_of_range("no metric named " + key);
}

std::optional<double> settling_time(const std::vector<double>& t, const std::vector<double>& err, double fraction) {
  if (t.empty() || t.size() != err.size()) return std::nullopt;
  const double band = fraction * err.front();
  std::size_t i = err.size();
  while (i > 0 && err[i - 1] < band) --i;
  if (i == err.size()) return std::nullopt;
  return i == 0 ? t.front() : t[i];
}

double steady_state_mean(const std::vector<double>& err) {
  if (err.empty()) return 0.0;
  const std::size_t from = err.size() - err.size() / 4;
  double sum = 0.0;
  for (std::size_t i = from; i < err.size(); ++i) sum += err[i];
  return sum / double(std::max<std::size_t>(1, err.size() - from));
}

double regression_slope(const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const double x_mean = 0.5 * double(n - 1);
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= double(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = double(i) - x_mean;
    sxy += dx * (y[i] - y_mean);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double attitude_distance(const RotationMatrix& a, const RotationMatrix& b) {
  return log_so3(a.transpose() * b).norm();
}

RunResult run(const Scenario& scenario) {
  scenario.validate();
  RunResult out;
  switch (scenario.kind) {
    case ScenarioKind::kFreeBody: out = run_free_body(scenario); break;
    case ScenarioKind::kAttitudeTrack: out = run_attitude_track(scenario); break;
    case ScenarioKind::kQuadTrack: out = run_quad_track(scenario); break;
    case ScenarioKind::kIntegratorCompare: out = run_integrator_compare(scenario); break;
  }
  out.metrics.scenario = scenario.name;
  out.metrics.kind = std::string(to_string(scenario.kind));
  return out;
}

}  // namespace geomech
