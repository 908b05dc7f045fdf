#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "geomech/attitude_controller.hpp"
#include "geomech/errors.hpp"
#include "geomech/quadrotor_tracking.hpp"
#include "geomech/references.hpp"
#include "geomech/rigid_body.hpp"
#include "geomech/rotor_aero.hpp"
#include "geomech/variational_integrator.hpp"

namespace geomech {

enum class ScenarioKind { kFreeBody, kAttitudeTrack, kQuadTrack, kIntegratorCompare };
enum class IntegratorKind { kVariational, kRk4 };

std::string_view to_string(ScenarioKind kind);
std::string_view to_string(IntegratorKind kind);

struct Scenario {
  ScenarioKind kind = ScenarioKind::kFreeBody;
  std::string name;
  double dt = 0.01;
  double t_final = 10.0;

  IntegratorKind integrator = IntegratorKind::kVariational;
  IntegratorConfig newton;  // its dt is ignored; runs use `dt`

  // free_body, attitude_track, integrator_compare
  InertiaTensor J = InertiaTensor::diagonal(3.0, 2.0, 1.0);
  RigidBodyState attitude_initial;
  Vec3 body_moment = Vec3::Zero();  // constant forcing, body frame

  // attitude_track
  EulerCoeffs euler;
  AttitudeGains attitude_gains;
  TorqueForm torque_form = TorqueForm::kExact;

  // quad_track
  QuadrotorParams quad{4.34, InertiaTensor::diagonal(0.084, 0.085, 0.12), 0.315};
  QuadrotorState quad_initial;
  CircleCoeffs circle;
  PositionGains position_gains;

  bool aero_enabled = false;
  AeroConfig aero;

  // integrator_compare: fine RK4 reference step; 0 disables the reference.
  double reference_dt = 0.0;

  std::string csv_path;      // relative to the output directory
  std::string metrics_path;

  /// Throws ValidationError listing every violated constraint.
  void validate() const;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError("parse error at byte " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct Violation {
  std::string field;
  std::string constraint;
};

class ValidationError : public InputError {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

}  // namespace geomech
