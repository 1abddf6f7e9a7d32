// SPDX-License-Identifier: Apache-2.0
//
// Experiment driver: wires scenario files to the solver, baselines, and
// studies. Exit codes are stable API: 0 success, 2 usage/config error,
// 3 infeasible scenario, 4 internal numeric failure.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "risbeam/baselines.hpp"
#include "risbeam/errors.hpp"
#include "risbeam/experiments.hpp"
#include "risbeam/io.hpp"
#include "risbeam/scenario.hpp"

namespace {

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;  // single seed; absence means 0, never wall-clock
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario_path, "Scenario file path")->required();
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--seed", args.seed, "Master RNG seed (default 0)");
  cmd->add_option("--set", args.overrides,
                  "Override scenario fields via dotted keys, e.g. solver.epsilon=1e-5");
}

risbeam::ScenarioConfig load(const CommonArgs& args) {
  risbeam::ScenarioConfig config =
      risbeam::load_scenario(args.scenario_path, args.overrides);
  config.solver.rng_seed = args.seed;
  config.quantrand.rng_seed = args.seed;
  return config;
}

int cmd_solve(const CommonArgs& args) {
  const risbeam::ScenarioConfig config = load(args);
  const risbeam::BuiltProblem built = risbeam::build_problem(config);
  const nlohmann::json sidecar =
      risbeam::make_sidecar(config, args.scenario_path, args.seed, "solve");
  const risbeam::SolveReport report = risbeam::solve(built.instance, config.solver);
  risbeam::write_solve_outputs(args.out_dir, sidecar, report, built.instance);
  std::cout << "t_root=" << report.t_root << " max_min_power_w=" << -report.t_root
            << " max_violation_w=" << report.max_violation << " termination="
            << risbeam::to_string(report.termination) << "\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const risbeam::ScenarioConfig config = load(args);
  const risbeam::BuiltProblem built = risbeam::build_problem(config);
  const nlohmann::json sidecar =
      risbeam::make_sidecar(config, args.scenario_path, args.seed, "sweep");

  risbeam::SolveReport report;
  if (built.instance.num_constraints() > 0) {
    report = risbeam::solve(built.instance, config.solver);
  } else {
    report = risbeam::solve_unconstrained(built.instance, config.solver);
  }
  const std::vector<double> theta = risbeam::angle_grid(config.study.sweep_theta_min_deg,
                                                        config.study.sweep_theta_max_deg,
                                                        config.study.pattern_spacing_deg);
  const risbeam::BeamPattern pattern = risbeam::sweep_pattern(
      config, report.omega_star.omega, theta, config.study.sweep_phi_deg);
  risbeam::write_solve_outputs(args.out_dir, sidecar, report, built.instance);
  risbeam::write_pattern_csv(args.out_dir + "/pattern.csv", pattern);
  std::cout << "rows=" << pattern.theta_deg.size() << "\n";
  return 0;
}

int cmd_oracle(const CommonArgs& args, int bits) {
  const risbeam::ScenarioConfig config = load(args);
  const risbeam::BuiltProblem built = risbeam::build_problem(config);
  const nlohmann::json sidecar =
      risbeam::make_sidecar(config, args.scenario_path, args.seed, "oracle");
  const risbeam::OracleResult result = risbeam::exhaustive_oracle(built.instance, bits);

  nlohmann::json doc;
  doc["bits"] = bits;
  doc["feasible"] = result.feasible;
  doc["best_value_w"] = result.best_value;
  doc["omega_rad"] = std::vector<double>(
      result.best_omega.omega.data(),
      result.best_omega.omega.data() + result.best_omega.omega.size());
  risbeam::write_json_file(args.out_dir + "/run_meta.json", sidecar);
  risbeam::write_json_file(args.out_dir + "/oracle.json", doc);
  std::cout << "best_value_w=" << result.best_value << " feasible=" << result.feasible
            << "\n";
  return 0;
}

int cmd_compare(const CommonArgs& args, int oracle_bits) {
  const risbeam::ScenarioConfig config = load(args);
  const nlohmann::json sidecar =
      risbeam::make_sidecar(config, args.scenario_path, args.seed, "compare");
  const std::vector<risbeam::MetricsRow> rows =
      risbeam::compare_methods(config, args.seed, oracle_bits);
  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  risbeam::write_json_file(args.out_dir + "/run_meta.json", sidecar);
  risbeam::write_metrics_csv(args.out_dir + "/metrics.csv", rows);
  for (const auto& row : rows) {
    std::cout << row.method << ": min_ue_w=" << row.min_ue_power_w
              << " rg_db=" << row.relative_gain_db
              << (row.note.empty() ? "" : " note=" + row.note) << "\n";
  }
  return 0;
}

int cmd_study(const CommonArgs& args, const std::string& study) {
  const risbeam::ScenarioConfig config = load(args);
  const nlohmann::json sidecar =
      risbeam::make_sidecar(config, args.scenario_path, args.seed, "study-" + study);
  if (study == "suppression") {
    risbeam::write_suppression_outputs(args.out_dir, sidecar,
                                       risbeam::run_suppression_study(config, args.seed));
  } else if (study == "weighted") {
    const risbeam::MetricsRow row = risbeam::run_weighted_study(config, args.seed);
    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    risbeam::write_json_file(args.out_dir + "/run_meta.json", sidecar);
    risbeam::write_metrics_csv(args.out_dir + "/metrics.csv", {row});
  } else if (study == "cdf") {
    risbeam::write_cdf_outputs(
        args.out_dir, sidecar,
        risbeam::run_cdf_study(config, config.study.trials, args.seed));
  } else if (study == "rg") {
    risbeam::write_rg_outputs(args.out_dir, sidecar,
                              risbeam::run_rg_study(config, 'N', config.study.n_grid,
                                                    args.seed));
  } else {
    throw risbeam::ConfigError("unknown study '" + study +
                               "' (expected suppression|weighted|cdf|rg)");
  }
  std::cout << "study=" << study << " out=" << args.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmissive-surface max-min beam synthesis with directional suppression"};
  app.require_subcommand(1);

  CommonArgs solve_args, sweep_args, oracle_args, compare_args, study_args;
  int oracle_bits = 6;
  int compare_oracle_bits = 0;
  std::string study_name;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Run the bisection solver");
  add_common(solve_cmd, solve_args);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Solve and sweep the beam pattern");
  add_common(sweep_cmd, sweep_args);
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exhaustive small-N grid search");
  add_common(oracle_cmd, oracle_args);
  oracle_cmd->add_option("--oracle-bits", oracle_bits, "Phase bits for the grid (default 6)");
  CLI::App* compare_cmd = app.add_subcommand("compare", "Metrics table across methods");
  add_common(compare_cmd, compare_args);
  compare_cmd->add_option("--oracle-bits", compare_oracle_bits,
                          "Include the exhaustive oracle row (0 = skip)");
  CLI::App* study_cmd = app.add_subcommand("study", "Run a named experiment study");
  add_common(study_cmd, study_args);
  study_cmd->add_option("--study", study_name, "suppression|weighted|cdf|rg")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_args, oracle_bits);
    if (compare_cmd->parsed()) return cmd_compare(compare_args, compare_oracle_bits);
    if (study_cmd->parsed()) return cmd_study(study_args, study_name);
  } catch (const risbeam::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const risbeam::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const risbeam::GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return 2;
  } catch (const risbeam::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
