#include "doctest.h"
#include "geomech/ensemble.hpp"
#include "geomech/errors.hpp"

using namespace geomech;

TEST_CASE("ensemble sampling is seeded") {
  const auto a = sample_initial_states(16, 7, 2.0);
  const auto b = sample_initial_states(16, 7, 2.0);
  const auto c = sample_initial_states(16, 8, 2.0);
  REQUIRE(a.size() == 16);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].T.matrix() == b[i].T.matrix());
    CHECK(a[i].omega == b[i].omega);
    CHECK(a[i].omega.norm() <= 2.0);
  }
  CHECK(a[0].omega != c[0].omega);
}

TEST_CASE("parallel ensemble is bit-identical to the serial reference") {
  const InertiaTensor J = InertiaTensor::diagonal(3, 2, 1);
  IntegratorConfig cfg;
  const auto init = sample_initial_states(24, 42, 1.5);
  const auto serial = run_ensemble_serial(init, J, cfg, 200);
  const auto parallel = run_ensemble_parallel(init, J, cfg, 200);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].final_state.T.matrix() == parallel[i].final_state.T.matrix());
    CHECK(serial[i].final_state.omega == parallel[i].final_state.omega);
    CHECK(serial[i].energy_drift_max_rel == parallel[i].energy_drift_max_rel);
    CHECK(serial[i].momentum_drift_max == parallel[i].momentum_drift_max);
    CHECK(serial[i].newton_iters_total == parallel[i].newton_iters_total);
    CHECK(serial[i].momentum_drift_max < 1e-10);
  }
}

TEST_CASE("parallel ensemble rethrows the first failure by index") {
  const InertiaTensor J = InertiaTensor::diagonal(3, 2, 1);
  IntegratorConfig cfg;
  cfg.dt = 1.0;
  std::vector<RigidBodyState> init(6, RigidBodyState{RotationMatrix::identity(), Vec3(0, 0, 0.1)});
  init[2].omega = Vec3(0, 0, 3.0);
  init[4].omega = Vec3(0, 0, 3.0);
  CHECK_THROWS_AS(run_ensemble_parallel(init, J, cfg, 3), NumericalError);
  CHECK_THROWS_AS(run_ensemble_serial(init, J, cfg, 3), NumericalError);
}
