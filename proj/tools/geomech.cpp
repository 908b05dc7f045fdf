#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "geomech/errors.hpp"
#include "geomech/output.hpp"
#include "geomech/scenario.hpp"
#include "geomech/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

struct Overrides {
  std::string out_dir = "out";
  std::optional<double> dt;
  std::optional<double> t_final;
  std::string aero;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--out-dir", o.out_dir, "Directory for the CSV and metrics files")->capture_default_str();
  cmd->add_option("--dt", o.dt, "Override the time step (s)");
  cmd->add_option("--t-final", o.t_final, "Override the final time (s)");
  cmd->add_option("--aero", o.aero, "Enable or disable rotor aerodynamics")->check(CLI::IsMember({"on", "off"}));
}

geomech::Scenario prepare(const std::string& path, const Overrides& o) {
  geomech::Scenario sc = geomech::load_scenario(path);
  if (o.dt) sc.dt = *o.dt;
  if (o.t_final) sc.t_final = *o.t_final;
  if (!o.aero.empty()) sc.aero_enabled = o.aero == "on";
  sc.validate();
  return sc;
}

int execute(geomech::Scenario sc, const Overrides& o) {
  const geomech::RunResult result = geomech::run(sc);
  const std::filesystem::path dir(o.out_dir);
  const std::string csv = (dir / sc.csv_path).string();
  const std::string metrics = (dir / sc.metrics_path).string();
  geomech::write_outputs(result, csv, metrics);
  std::cout << geomech::metrics_json(result.metrics);
  std::cerr << "wrote " << csv << " (" << result.series.rows.size() << " rows) and " << metrics << "\n";
  return kExitOk;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const geomech::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const geomech::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const geomech::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const geomech::NumericalError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const geomech::InputError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigid-body and quadrotor simulation on SO(3)"};
  app.require_subcommand(1);

  std::string path;
  Overrides run_opts;
  CLI::App* run = app.add_subcommand("run", "Run a scenario and write CSV and metrics");
  run->add_option("scenario", path, "Scenario JSON file")->required();
  add_overrides(run, run_opts);

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", path, "Scenario JSON file")->required();

  Overrides cmp_opts;
  CLI::App* compare = app.add_subcommand("compare", "Run the variational integrator and RK4 side by side");
  compare->add_option("scenario", path, "Free-body or integrator_compare scenario JSON file")->required();
  add_overrides(compare, cmp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*run) {
    return guarded([&] { return execute(prepare(path, run_opts), run_opts); });
  }
  if (*validate) {
    return guarded([&] {
      const geomech::Scenario sc = geomech::load_scenario(path);
      std::cout << "ok: " << sc.name << " (" << geomech::to_string(sc.kind) << ")\n";
      return kExitOk;
    });
  }
  return guarded([&] {
    geomech::Scenario sc = prepare(path, cmp_opts);
    if (sc.kind != geomech::ScenarioKind::kFreeBody && sc.kind != geomech::ScenarioKind::kIntegratorCompare) {
      throw geomech::ValidationError({geomech::Violation{"kind", "compare needs free_body or integrator_compare"}});
    }
    if (sc.kind == geomech::ScenarioKind::kFreeBody) {
      sc.kind = geomech::ScenarioKind::kIntegratorCompare;
      sc.csv_path = sc.name + ".compare.csv";
      sc.metrics_path = sc.name + ".compare.metrics.json";
    }
    return execute(sc, cmp_opts);
  });
}
