#pragma once

#include <cstdint>
#include <vector>

#include "geomech/rigid_body.hpp"
#include "geomech/variational_integrator.hpp"

namespace geomech {

// Batches of independent free-body runs with the variational integrator.
// Both entry points produce bit-identical results; the serial one is the
// reference for testing the parallel one.

struct EnsembleMember {
  RigidBodyState final_state;
  double energy_drift_max_rel = 0.0;
  double momentum_drift_max = 0.0;
  int newton_iters_total = 0;
};

/// Initial conditions with attitudes and angular velocities drawn from a
/// seeded generator; |omega| <= omega_max.
std::vector<RigidBodyState> sample_initial_states(std::size_t count, std::uint64_t seed, double omega_max);

std::vector<EnsembleMember> run_ensemble_serial(const std::vector<RigidBodyState>& initial, const InertiaTensor& J,
                                                const IntegratorConfig& cfg, long steps);

/// OpenMP over members. Failures are rethrown after the loop (first failing
/// member by index).
std::vector<EnsembleMember> run_ensemble_parallel(const std::vector<RigidBodyState>& initial,
                                                  const InertiaTensor& J, const IntegratorConfig& cfg, long steps);

}  // namespace geomech
