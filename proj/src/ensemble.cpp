#include "geomech/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "geomech/errors.hpp"

namespace geomech {

namespace {

EnsembleMember run_member(const RigidBodyState& initial, const InertiaTensor& J, const IntegratorConfig& cfg,
                          long steps) {
  EnsembleMember out;
  RigidBodyState s = initial;
  const double h0 = kinetic_energy(s, J);
  const double scale = h0 > 0.0 ? h0 : 1.0;
  const Vec3 pi0 = spatial_momentum(s, J);
  for (long k = 0; k < steps; ++k) {
    const StepResult r = vi_step(s, k * cfg.dt, {}, J, cfg);
    s = RigidBodyState{r.T_next, r.omega_next};
    out.newton_iters_total += r.newton_iters;
    out.energy_drift_max_rel = std::max(out.energy_drift_max_rel, std::abs(kinetic_energy(s, J) - h0) / scale);
    out.momentum_drift_max = std::max(out.momentum_drift_max, (spatial_momentum(s, J) - pi0).norm());
  }
  out.final_state = s;
  return out;
}

}  // namespace

std::vector<RigidBodyState> sample_initial_states(std::size_t count, std::uint64_t seed, double omega_max) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<RigidBodyState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3 axis = Vec3(normal(rng), normal(rng), normal(rng)).normalized();
    const double angle = 3.0 * uniform(rng);
    const Vec3 dir = Vec3(normal(rng), normal(rng), normal(rng)).normalized();
    out.push_back(RigidBodyState{exp_so3(angle * axis), omega_max * uniform(rng) * dir});
  }
  return out;
}

std::vector<EnsembleMember> run_ensemble_serial(const std::vector<RigidBodyState>& initial, const InertiaTensor& J,
                                                const IntegratorConfig& cfg, long steps) {
  cfg.validate();
  std::vector<EnsembleMember> out;
  out.reserve(initial.size());
  for (const auto& s : initial) out.push_back(run_member(s, J, cfg, steps));
  return out;
}

std::vector<EnsembleMember> run_ensemble_parallel(const std::vector<RigidBodyState>& initial,
                                                  const InertiaTensor& J, const IntegratorConfig& cfg, long steps) {
  cfg.validate();
  const long n = static_cast<long>(initial.size());
  std::vector<EnsembleMember> out(initial.size());
  std::vector<std::exception_ptr> errors(initial.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = run_member(initial[i], J, cfg, steps);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace geomech
