#include "geomech/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace geomech {

using nlohmann::json;

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kFreeBody: return "free_body";
    case ScenarioKind::kAttitudeTrack: return "attitude_track";
    case ScenarioKind::kQuadTrack: return "quad_track";
    case ScenarioKind::kIntegratorCompare: return "integrator_compare";
  }
  return "unknown";
}

std::string_view to_string(IntegratorKind kind) {
  return kind == IntegratorKind::kVariational ? "variational" : "rk4";
}

namespace {

std::string join(const std::vector<Violation>& v) {
  std::string out = "invalid scenario:";
  for (const auto& x : v) out += "\n  " + x.field + ": " + x.constraint;
  return out;
}

// Collects every problem instead of stopping at the first.
class Reader {
 public:
  std::vector<Violation> violations;

  void fail(const std::string& field, const std::string& constraint) { violations.push_back({field, constraint}); }

  void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items()) {
      if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
  }

  const json* object(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) return nullptr;
    const json& j = parent.at(key);
    if (!j.is_object()) {
      fail(path, "must be an object");
      return nullptr;
    }
    return &j;
  }

  void number(const json& parent, const std::string& key, const std::string& path, double& out) {
    if (!parent.contains(key)) return;
    const json& j = parent.at(key);
    if (!j.is_number()) return fail(path, "must be a number");
    out = j.get<double>();
    if (!std::isfinite(out)) fail(path, "must be finite");
  }

  void integer(const json& parent, const std::string& key, const std::string& path, int& out) {
    if (!parent.contains(key)) return;
    const json& j = parent.at(key);
    if (!j.is_number_integer()) return fail(path, "must be an integer");
    out = j.get<int>();
  }

  void boolean(const json& parent, const std::string& key, const std::string& path, bool& out) {
    if (!parent.contains(key)) return;
    const json& j = parent.at(key);
    if (!j.is_boolean()) return fail(path, "must be true or false");
    out = j.get<bool>();
  }

  void string(const json& parent, const std::string& key, const std::string& path, std::string& out) {
    if (!parent.contains(key)) return;
    const json& j = parent.at(key);
    if (!j.is_string()) return fail(path, "must be a string");
    out = j.get<std::string>();
  }

  bool vec3(const json& parent, const std::string& key, const std::string& path, Vec3& out) {
    if (!parent.contains(key)) return false;
    return vec3_value(parent.at(key), path, out);
  }

  bool vec3_value(const json& j, const std::string& path, Vec3& out) {
    if (!j.is_array() || j.size() != 3 || !all_numbers(j)) {
      fail(path, "must be an array of 3 numbers");
      return false;
    }
    for (int i = 0; i < 3; ++i) out(i) = j[i].get<double>();
    if (!out.allFinite()) {
      fail(path, "must be finite");
      return false;
    }
    return true;
  }

  // 3x3 nested array, 3-element diagonal, or scalar multiple of identity.
  bool mat3(const json& parent, const std::string& key, const std::string& path, Mat3& out) {
    if (!parent.contains(key)) return false;
    const json& j = parent.at(key);
    if (j.is_number()) {
      out = j.get<double>() * Mat3::Identity();
      return true;
    }
    if (j.is_array() && j.size() == 3 && all_numbers(j)) {
      out = Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>()).asDiagonal();
      return true;
    }
    if (j.is_array() && j.size() == 3) {
      for (int i = 0; i < 3; ++i) {
        if (!j[i].is_array() || j[i].size() != 3 || !all_numbers(j[i])) {
          fail(path, "must be a number, a 3-element diagonal, or a 3x3 array");
          return false;
        }
        for (int c = 0; c < 3; ++c) out(i, c) = j[i][c].get<double>();
      }
      return true;
    }
    fail(path, "must be a number, a 3-element diagonal, or a 3x3 array");
    return false;
  }

  // 3x3 matrix or {"rotation_vector": [..]}.
  void rotation(const json& parent, const std::string& key, const std::string& path, RotationMatrix& out) {
    if (!parent.contains(key)) return;
    const json& j = parent.at(key);
    if (j.is_object()) {
      check_keys(j, path, {"rotation_vector"});
      Vec3 v;
      if (vec3(j, "rotation_vector", path + ".rotation_vector", v)) out = exp_so3(v);
      return;
    }
    Mat3 m;
    if (!j.is_array() || j.size() != 3 || all_numbers(j)) {
      return fail(path, "must be a 3x3 array or {\"rotation_vector\": [x, y, z]}");
    }
    if (!mat3(parent, key, path, m)) return;
    try {
      out = RotationMatrix(m);
    } catch (const InputError& e) {
      fail(path, e.what());
    }
  }

  void inertia(const json& parent, const std::string& key, const std::string& path, InertiaTensor& out) {
    Mat3 m;
    if (!mat3(parent, key, path, m)) return;
    try {
      out = InertiaTensor(m);
    } catch (const InputError& e) {
      fail(path, e.what());
    }
  }

  void quadratic(const json& parent, const std::string& key, const std::string& path, Quadratic& out) {
    if (!parent.contains(key)) return;
    const json& j = parent.at(key);
    if (!j.is_array() || j.size() < 1 || j.size() > 3 || !all_numbers(j)) {
      return fail(path, "must be an array [c0, c1, c2] (1 to 3 numbers)");
    }
    double c[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < j.size(); ++i) c[i] = j[i].get<double>();
    out = Quadratic{c[0], c[1], c[2]};
  }

  template <class E>
  void choice(const json& parent, const std::string& key, const std::string& path,
              const std::vector<std::pair<std::string, E>>& options, E& out) {
    std::string s;
    if (!parent.contains(key)) return;
    if (!parent.at(key).is_string()) return fail(path, "must be a string");
    s = parent.at(key).get<std::string>();
    for (const auto& [name, value] : options) {
      if (name == s) {
        out = value;
        return;
      }
    }
    std::string allowed;
    for (const auto& [name, _] : options) allowed += (allowed.empty() ? "" : " | ") + name;
    fail(path, "must be one of " + allowed);
  }

 private:
  static bool all_numbers(const json& j) {
    for (const auto& x : j) {
      if (!x.is_number()) return false;
    }
    return true;
  }
};

void read_attitude_gains(Reader& rd, const json& root, Scenario& sc) {
  const json* g = rd.object(root, "attitude_gains", "attitude_gains");
  if (!g) return;
  rd.check_keys(*g, "attitude_gains", {"P", "F", "S", "k_R"});
  rd.mat3(*g, "P", "attitude_gains.P", sc.attitude_gains.P);
  rd.mat3(*g, "F", "attitude_gains.F", sc.attitude_gains.F);
  rd.mat3(*g, "S", "attitude_gains.S", sc.attitude_gains.S);
  rd.number(*g, "k_R", "attitude_gains.k_R", sc.attitude_gains.k_R);
}

void read_aero(Reader& rd, const json& root, Scenario& sc) {
  const json* a = rd.object(root, "aero", "aero");
  if (!a) return;
  rd.check_keys(*a, "aero", {"enabled", "rho", "coupled_inflow", "min_rotor_speed", "rotor", "inflow"});
  rd.boolean(*a, "enabled", "aero.enabled", sc.aero_enabled);
  rd.number(*a, "rho", "aero.rho", sc.aero.rho);
  rd.boolean(*a, "coupled_inflow", "aero.coupled_inflow", sc.aero.coupled_inflow);
  rd.number(*a, "min_rotor_speed", "aero.min_rotor_speed", sc.aero.min_rotor_speed);
  if (const json* r = rd.object(*a, "rotor", "aero.rotor")) {
    rd.check_keys(*r, "aero.rotor", {"blades", "chord", "radius", "lift_slope", "theta0", "theta_tw", "cd_bar"});
    RotorGeometry& g = sc.aero.geometry;
    rd.integer(*r, "blades", "aero.rotor.blades", g.n_blades);
    rd.number(*r, "chord", "aero.rotor.chord", g.chord);
    rd.number(*r, "radius", "aero.rotor.radius", g.radius);
    rd.number(*r, "lift_slope", "aero.rotor.lift_slope", g.lift_slope);
    rd.number(*r, "theta0", "aero.rotor.theta0", g.theta0);
    rd.number(*r, "theta_tw", "aero.rotor.theta_tw", g.theta_tw);
    rd.number(*r, "cd_bar", "aero.rotor.cd_bar", g.cd_bar);
  }
  if (const json* in = rd.object(*a, "inflow", "aero.inflow")) {
    rd.check_keys(*in, "aero.inflow", {"tolerance", "max_iterations", "damping"});
    rd.number(*in, "tolerance", "aero.inflow.tolerance", sc.aero.inflow.tolerance);
    rd.integer(*in, "max_iterations", "aero.inflow.max_iterations", sc.aero.inflow.max_iters);
    rd.number(*in, "damping", "aero.inflow.damping", sc.aero.inflow.damping);
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : InputError(join(violations)), violations_(std::move(violations)) {}

void Scenario::validate() const {
  std::vector<Violation> v;
  auto check = [&](bool ok, const std::string& field, const std::string& constraint) {
    if (!ok) v.push_back({field, constraint});
  };
  auto check_call = [&](const std::string& field, const std::function<void()>& f) {
    try {
      f();
    } catch (const InputError& e) {
      v.push_back({field, e.what()});
    }
  };

  check(std::isfinite(dt) && dt > 0.0, "dt", "> 0");
  check(std::isfinite(t_final) && t_final >= dt, "t_final", ">= dt");
  check(newton.newton_tol > 0.0, "newton.tolerance", "> 0");
  check(newton.max_iters >= 1, "newton.max_iterations", ">= 1");

  switch (kind) {
    case ScenarioKind::kFreeBody:
      break;
    case ScenarioKind::kAttitudeTrack:
      check_call("attitude_gains", [&] { attitude_gains.validate(); });
      break;
    case ScenarioKind::kQuadTrack:
      check(integrator == IntegratorKind::kRk4, "integrator", "quad_track supports rk4 only");
      check_call("attitude_gains", [&] { attitude_gains.validate(); });
      check_call("position_gains", [&] { position_gains.validate(); });
      check(std::abs(circle.b1d.norm() - 1.0) <= 1e-9, "reference.circle.b1d", "unit length (within 1e-9)");
      check(circle.amplitude.allFinite() && circle.center.allFinite() && std::isfinite(circle.frequency),
            "reference.circle", "finite");
      if (aero_enabled) check_call("aero", [&] { aero.validate(); });
      break;
    case ScenarioKind::kIntegratorCompare:
      if (reference_dt != 0.0) {
        const double ratio = dt / reference_dt;
        check(reference_dt > 0.0 && reference_dt <= dt, "reference_dt", "in (0, dt]");
        check(std::abs(ratio - std::round(ratio)) <= 1e-6 * ratio, "reference_dt", "must divide dt evenly");
      }
      break;
  }
  if (!v.empty()) throw ValidationError(std::move(v));
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!root.is_object()) throw ParseError("top level must be an object", 0);

  Reader rd;
  Scenario sc;
  rd.check_keys(root, "", {"kind", "name", "dt", "t_final", "integrator", "newton", "inertia", "initial",
                           "body_moment", "reference", "attitude_gains", "torque_form", "quad", "position_gains",
                           "aero", "reference_dt", "output"});

  if (!root.contains("kind")) {
    rd.fail("kind", "required");
  } else {
    rd.choice<ScenarioKind>(root, "kind", "kind",
                            {{"free_body", ScenarioKind::kFreeBody},
                             {"attitude_track", ScenarioKind::kAttitudeTrack},
                             {"quad_track", ScenarioKind::kQuadTrack},
                             {"integrator_compare", ScenarioKind::kIntegratorCompare}},
                            sc.kind);
  }
  const bool quad = sc.kind == ScenarioKind::kQuadTrack;
  sc.name = std::string(to_string(sc.kind));
  rd.string(root, "name", "name", sc.name);
  rd.number(root, "dt", "dt", sc.dt);
  rd.number(root, "t_final", "t_final", sc.t_final);

  sc.integrator = quad ? IntegratorKind::kRk4 : IntegratorKind::kVariational;
  rd.choice<IntegratorKind>(root, "integrator", "integrator",
                            {{"variational", IntegratorKind::kVariational}, {"rk4", IntegratorKind::kRk4}},
                            sc.integrator);
  if (const json* n = rd.object(root, "newton", "newton")) {
    rd.check_keys(*n, "newton", {"tolerance", "max_iterations"});
    rd.number(*n, "tolerance", "newton.tolerance", sc.newton.newton_tol);
    rd.integer(*n, "max_iterations", "newton.max_iterations", sc.newton.max_iters);
  }

  rd.inertia(root, "inertia", "inertia", sc.J);
  rd.vec3(root, "body_moment", "body_moment", sc.body_moment);
  rd.number(root, "reference_dt", "reference_dt", sc.reference_dt);

  if (const json* q = rd.object(root, "quad", "quad")) {
    rd.check_keys(*q, "quad", {"mass", "inertia", "arm", "gravity"});
    double m = sc.quad.m, d = sc.quad.d, g = sc.quad.g;
    InertiaTensor J = sc.quad.J;
    rd.number(*q, "mass", "quad.mass", m);
    rd.inertia(*q, "inertia", "quad.inertia", J);
    rd.number(*q, "arm", "quad.arm", d);
    rd.number(*q, "gravity", "quad.gravity", g);
    try {
      sc.quad = QuadrotorParams(m, J, d, g);
    } catch (const InputError& e) {
      rd.fail("quad", e.what());
    }
  }

  if (const json* init = rd.object(root, "initial", "initial")) {
    if (quad) {
      rd.check_keys(*init, "initial", {"r", "v", "R", "Omega"});
      rd.vec3(*init, "r", "initial.r", sc.quad_initial.r);
      rd.vec3(*init, "v", "initial.v", sc.quad_initial.v);
      rd.rotation(*init, "R", "initial.R", sc.quad_initial.R);
      rd.vec3(*init, "Omega", "initial.Omega", sc.quad_initial.Omega);
    } else {
      rd.check_keys(*init, "initial", {"R", "omega"});
      rd.rotation(*init, "R", "initial.R", sc.attitude_initial.T);
      rd.vec3(*init, "omega", "initial.omega", sc.attitude_initial.omega);
    }
  }

  if (const json* ref = rd.object(root, "reference", "reference")) {
    rd.check_keys(*ref, "reference", {"euler_321", "circle"});
    if (const json* e = rd.object(*ref, "euler_321", "reference.euler_321")) {
      rd.check_keys(*e, "reference.euler_321", {"roll", "pitch", "yaw"});
      rd.quadratic(*e, "roll", "reference.euler_321.roll", sc.euler.roll);
      rd.quadratic(*e, "pitch", "reference.euler_321.pitch", sc.euler.pitch);
      rd.quadratic(*e, "yaw", "reference.euler_321.yaw", sc.euler.yaw);
    }
    if (const json* c = rd.object(*ref, "circle", "reference.circle")) {
      rd.check_keys(*c, "reference.circle", {"center", "amplitude", "frequency", "b1d"});
      rd.vec3(*c, "center", "reference.circle.center", sc.circle.center);
      rd.vec3(*c, "amplitude", "reference.circle.amplitude", sc.circle.amplitude);
      rd.number(*c, "frequency", "reference.circle.frequency", sc.circle.frequency);
      rd.vec3(*c, "b1d", "reference.circle.b1d", sc.circle.b1d);
    }
  }

  sc.attitude_gains = quad ? default_quadrotor_attitude_gains() : AttitudeGains::inertia_weighted(sc.J);
  if (quad) sc.position_gains = PositionGains::mass_scaled(sc.quad.m);
  read_attitude_gains(rd, root, sc);
  rd.choice<TorqueForm>(root, "torque_form", "torque_form",
                        {{"exact", TorqueForm::kExact}, {"expanded_literal", TorqueForm::kExpandedLiteral}},
                        sc.torque_form);

  if (const json* g = rd.object(root, "position_gains", "position_gains")) {
    rd.check_keys(*g, "position_gains", {"A", "B", "C", "D"});
    rd.mat3(*g, "A", "position_gains.A", sc.position_gains.A);
    rd.mat3(*g, "B", "position_gains.B", sc.position_gains.B);
    rd.mat3(*g, "C", "position_gains.C", sc.position_gains.C);
    rd.mat3(*g, "D", "position_gains.D", sc.position_gains.D);
  }

  read_aero(rd, root, sc);

  sc.csv_path = sc.name + ".csv";
  sc.metrics_path = sc.name + ".metrics.json";
  if (const json* o = rd.object(root, "output", "output")) {
    rd.check_keys(*o, "output", {"csv", "metrics"});
    rd.string(*o, "csv", "output.csv", sc.csv_path);
    rd.string(*o, "metrics", "output.metrics", sc.metrics_path);
  }

  // Cross-field checks run even after field errors so that one pass reports
  // everything; fields already rejected while reading are not repeated.
  try {
    sc.validate();
  } catch (const ValidationError& e) {
    for (const Violation& v : e.violations()) {
      const bool seen = std::any_of(rd.violations.begin(), rd.violations.end(),
                                    [&](const Violation& r) { return r.field == v.field; });
      if (!seen) rd.violations.push_back(v);
    }
  }
  if (!rd.violations.empty()) throw ValidationError(std::move(rd.violations));
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace geomech
