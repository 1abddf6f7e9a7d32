// SPDX-License-Identifier: Apache-2.0
#include "risbeam/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "risbeam/errors.hpp"

namespace risbeam {

namespace {

Eigen::VectorXd raw_user_powers(const ProblemInstance& instance,
                                const Eigen::VectorXd& omega) {
  const Eigen::VectorXcd x = unit_phases(omega);
  Eigen::VectorXd p(instance.num_users());
  for (Eigen::Index k = 0; k < instance.num_users(); ++k) {
    // A_k carries scale 1/alpha_k; raw power divides it back out.
    p[k] = instance.user_forms[k].power(x) / instance.user_forms[k].scale;
  }
  return p;
}

double max_sample_power(const ProblemInstance& instance, const Eigen::VectorXd& omega) {
  if (instance.num_constraints() == 0) return 0.0;
  const Eigen::VectorXcd x = unit_phases(omega);
  double m = 0.0;
  for (const auto& f : instance.constraint_forms) m = std::max(m, f.power(x));
  return m;
}

double min_weighted_power(const ProblemInstance& instance, const Eigen::VectorXd& omega) {
  const Eigen::VectorXcd x = unit_phases(omega);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : instance.user_forms) m = std::min(m, f.power(x));
  return m;
}

ProblemInstance with_thresholds(const ProblemInstance& base, double sigma) {
  ProblemInstance inst = base;
  inst.thresholds.setConstant(sigma);
  return inst;
}

SolverSettings seeded(const SolverSettings& base, std::uint64_t seed) {
  SolverSettings s = base;
  s.rng_seed = seed;
  return s;
}

QuantizedSearchSettings seeded(const QuantizedSearchSettings& base, std::uint64_t seed) {
  QuantizedSearchSettings s = base;
  s.rng_seed = seed;
  return s;
}

// Max component-wise sample variance of power ratios across trials.
double ratio_variance(const std::vector<std::vector<double>>& ratios_per_trial) {
  if (ratios_per_trial.size() < 2) return 0.0;
  const std::size_t m = ratios_per_trial.front().size();
  double worst = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    double mean = 0.0;
    for (const auto& r : ratios_per_trial) mean += r[c];
    mean /= static_cast<double>(ratios_per_trial.size());
    double var = 0.0;
    for (const auto& r : ratios_per_trial) var += (r[c] - mean) * (r[c] - mean);
    var /= static_cast<double>(ratios_per_trial.size() - 1);
    worst = std::max(worst, var);
  }
  return worst;
}

std::vector<double> ratios_to_last(const Eigen::VectorXd& raw_powers) {
  const Eigen::Index k_count = raw_powers.size();
  std::vector<double> out(static_cast<std::size_t>(k_count));
  const double denom = std::max(raw_powers[k_count - 1], 1e-300);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    out[static_cast<std::size_t>(k)] = raw_powers[k] / denom;
  }
  return out;
}

}  // namespace

std::vector<double> angle_grid(double min_deg, double max_deg, double spacing_deg) {
  if (!(spacing_deg > 0.0)) throw ConfigError("angle_grid: spacing must be positive");
  if (max_deg < min_deg) throw ConfigError("angle_grid: bounds out of order");
  const int count = 1 + static_cast<int>(std::floor((max_deg - min_deg) / spacing_deg + 1e-9));
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = min_deg + i * spacing_deg;
  return grid;
}

BeamPattern sweep_pattern(const ScenarioConfig& config, const Eigen::VectorXd& omega,
                          const std::vector<double>& theta_grid_deg,
                          const std::vector<double>& phi_grid_deg) {
  if (theta_grid_deg.empty() || phi_grid_deg.empty()) {
    throw ConfigError("sweep_pattern: empty angle grid");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(config.grid.rows) * config.grid.cols;
  if (omega.size() != n) throw ConfigError("sweep_pattern: omega length does not match grid");
  const double range = config.users.front().range_m;
  const Eigen::VectorXcd x = unit_phases(omega);

  BeamPattern out;
  out.omega_used = omega;
  out.theta_deg.reserve(theta_grid_deg.size() * phi_grid_deg.size());
  for (double phi : phi_grid_deg) {
    for (double theta : theta_grid_deg) {
      const ChannelVector ch = scenario_channel(config, {range, theta, phi});
      const double p = std::norm(std::complex<double>(ch.h.transpose() * x));
      out.theta_deg.push_back(theta);
      out.phi_deg.push_back(phi);
      out.power_w.push_back(p);
      out.power_dbm.push_back(watts_to_dbm(p));
    }
  }
  return out;
}

double suppression_region_peak(const ScenarioConfig& config, const Eigen::VectorXd& omega) {
  double peak = 0.0;
  const Eigen::VectorXcd x = unit_phases(omega);
  for (const SuppressionRegion& region : config.suppression_regions) {
    const double spacing = config.study.pattern_spacing_deg;
    for (double theta : angle_grid(region.theta_min_deg, region.theta_max_deg, spacing)) {
      for (double phi : angle_grid(region.phi_min_deg, region.phi_max_deg,
                                   std::min(spacing, region.sample_spacing_deg))) {
        const ChannelVector ch = scenario_channel(config, {region.range_m, theta, phi});
        peak = std::max(peak, std::norm(std::complex<double>(ch.h.transpose() * x)));
      }
    }
  }
  return peak;
}

MetricsRow metrics_from_omega(const std::string& method, const ScenarioConfig& config,
                              const BuiltProblem& built, const Eigen::VectorXd& omega) {
  MetricsRow row;
  row.method = method;
  const Eigen::VectorXd raw = raw_user_powers(built.instance, omega);
  row.power_ratio = ratios_to_last(raw);
  row.min_ue_power_w = raw.minCoeff();
  row.max_sp_power_w = max_sample_power(built.instance, omega);
  row.relative_gain_db = db_ratio(row.min_ue_power_w, row.max_sp_power_w);
  row.peak_in_suppression_w = suppression_region_peak(config, omega);
  row.peak_in_suppression_dbm = watts_to_dbm(row.peak_in_suppression_w);
  return row;
}

SuppressionStudyResult run_suppression_study(const ScenarioConfig& config,
                                             std::uint64_t seed) {
  if (config.suppression_regions.empty()) {
    throw ConfigError("run_suppression_study: scenario has no suppression regions");
  }
  const BuiltProblem built = build_problem(config);
  const ProblemInstance unconstrained = without_constraints(built.instance);
  const std::vector<double> theta_grid = angle_grid(
      config.study.sweep_theta_min_deg, config.study.sweep_theta_max_deg,
      config.study.pattern_spacing_deg);

  SuppressionStudyResult result;
  auto add_entry = [&](const std::string& method, double fraction, SolveReport report) {
    SuppressionEntry e;
    e.method = method;
    e.threshold_fraction = fraction;
    e.metrics = metrics_from_omega(method, config, built, report.omega_star.omega);
    e.pattern = sweep_pattern(config, report.omega_star.omega, theta_grid,
                              config.study.sweep_phi_deg);
    e.report = std::move(report);
    result.entries.push_back(std::move(e));
  };

  SolveReport noncon = solve_unconstrained(unconstrained, seeded(config.solver, seed));
  result.peak_w = raw_user_powers(built.instance, noncon.omega_star.omega).minCoeff();
  add_entry("non-constraint", 0.0, std::move(noncon));

  auto run_constrained = [&](double fraction) {
    const ProblemInstance inst =
        fraction > 0.0 ? with_thresholds(built.instance, fraction * result.peak_w)
                       : built.instance;
    try {
      add_entry("bis", fraction, solve(inst, seeded(config.solver, seed)));
    } catch (const InfeasibleError& e) {
      SuppressionEntry err;
      err.method = "bis";
      err.threshold_fraction = fraction;
      err.report.termination = Termination::kBracketFailure;
      err.metrics.method = "bis";
      err.metrics.note = e.what();
      result.entries.push_back(std::move(err));
    }
    SolveReport qr = solve_quantrand(inst, seeded(config.quantrand, seed));
    add_entry("quantrand", fraction, std::move(qr));
  };

  if (config.study.threshold_fractions.empty()) {
    run_constrained(0.0);
  } else {
    for (double f : config.study.threshold_fractions) run_constrained(f);
  }
  return result;
}

MetricsRow run_weighted_study(const ScenarioConfig& config, std::uint64_t seed) {
  if (config.users.size() < 2) {
    throw ConfigError("run_weighted_study: need at least two users");
  }
  const BuiltProblem built = build_problem(config);
  const int trials = std::max(1, config.study.trials);

  std::vector<std::vector<double>> ratios_per_trial;
  double best_value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_omega;
  for (int t = 0; t < trials; ++t) {
    const SolveReport report =
        solve(built.instance, seeded(config.solver, derive_seed(seed, t)));
    ratios_per_trial.push_back(
        ratios_to_last(raw_user_powers(built.instance, report.omega_star.omega)));
    const double value = -report.t_root;
    if (value > best_value) {
      best_value = value;
      best_omega = report.omega_star.omega;
    }
  }
  MetricsRow row = metrics_from_omega("bis", config, built, best_omega);
  row.variance = ratio_variance(ratios_per_trial);
  return row;
}

CdfStudyResult run_cdf_study(const ScenarioConfig& config, int trials, std::uint64_t seed) {
  if (trials < 1) throw ConfigError("run_cdf_study: trials must be >= 1");
  const BuiltProblem built = build_problem(config);
  const ProblemInstance unconstrained = without_constraints(built.instance);

  CdfStudyResult result;
  result.trials = trials;
  auto record = [&](const std::string& method, const Eigen::VectorXd& omega) {
    CdfSeries& series = result.by_method[method];
    series.min_ue_sorted_w.push_back(raw_user_powers(built.instance, omega).minCoeff());
    series.max_sp_sorted_w.push_back(max_sample_power(built.instance, omega));
  };
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t sub = derive_seed(seed, t);
    record("bis", solve(built.instance, seeded(config.solver, sub)).omega_star.omega);
    record("non-constraint",
           solve_unconstrained(unconstrained, seeded(config.solver, sub)).omega_star.omega);
    record("quantrand",
           solve_quantrand(built.instance, seeded(config.quantrand, sub)).omega_star.omega);
  }
  for (auto& [method, series] : result.by_method) {
    std::sort(series.min_ue_sorted_w.begin(), series.min_ue_sorted_w.end());
    std::sort(series.max_sp_sorted_w.begin(), series.max_sp_sorted_w.end());
  }
  return result;
}

RgStudyResult run_rg_study(const ScenarioConfig& config, char variable,
                           const std::vector<int>& grid, std::uint64_t seed) {
  if (grid.empty()) throw ConfigError("run_rg_study: empty grid");
  if (variable != 'N' && variable != 'K') {
    throw ConfigError("run_rg_study: variable must be 'N' or 'K'");
  }
  if (config.suppression_regions.empty()) {
    throw ConfigError("run_rg_study: scenario has no suppression regions");
  }

  RgStudyResult result;
  result.variable = variable;
  result.trials = std::max(1, config.study.trials);

  for (int value : grid) {
    ScenarioConfig point = config;
    if (variable == 'N') {
      point.grid.rows = 1;
      point.grid.cols = value;
    } else {
      if (value < 1 || static_cast<std::size_t>(value) > config.users.size()) {
        throw ConfigError("run_rg_study: K grid value exceeds the scenario's user list");
      }
      point.users.assign(config.users.begin(), config.users.begin() + value);
    }
    const BuiltProblem built = build_problem(point);
    const ProblemInstance unconstrained = without_constraints(built.instance);

    std::map<std::string, double> rg_sum;
    for (int t = 0; t < result.trials; ++t) {
      const std::uint64_t sub = derive_seed(seed ^ (0x5151ull * value), t);
      const SolveReport noncon =
          solve_unconstrained(unconstrained, seeded(point.solver, sub));
      const Eigen::VectorXd noncon_raw =
          raw_user_powers(built.instance, noncon.omega_star.omega);
      const double peak = noncon_raw.minCoeff();
      const double sigma = std::max(point.study.rg_sigma_fraction * peak, 1e-300);
      const ProblemInstance constrained = with_thresholds(built.instance, sigma);

      auto rg_of = [&](const Eigen::VectorXd& omega) {
        return db_ratio(raw_user_powers(built.instance, omega).minCoeff(),
                        max_sample_power(built.instance, omega));
      };
      rg_sum["non-constraint"] += rg_of(noncon.omega_star.omega);
      try {
        rg_sum["bis"] +=
            rg_of(solve(constrained, seeded(point.solver, sub)).omega_star.omega);
      } catch (const InfeasibleError&) {
        rg_sum["bis"] += rg_of(noncon.omega_star.omega);  // labeled fallback
      }
      rg_sum["quantrand"] +=
          rg_of(solve_quantrand(constrained, seeded(point.quantrand, sub)).omega_star.omega);
    }
    RgPoint p;
    p.value = value;
    for (auto& [method, sum] : rg_sum) {
      p.rg_db_mean[method] = sum / static_cast<double>(result.trials);
    }
    result.points.push_back(std::move(p));
  }
  return result;
}

std::vector<MetricsRow> compare_methods(const ScenarioConfig& config, std::uint64_t seed,
                                        int oracle_bits) {
  const BuiltProblem built = build_problem(config);
  const ProblemInstance unconstrained = without_constraints(built.instance);
  const int trials = std::max(1, config.study.trials);

  std::vector<MetricsRow> rows;
  auto run_method = [&](const std::string& method) {
    std::vector<std::vector<double>> ratios_per_trial;
    double best_value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_omega;
    try {
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t sub = derive_seed(seed, t);
        SolveReport report;
        if (method == "bis") {
          report = solve(built.instance, seeded(config.solver, sub));
        } else if (method == "non-constraint") {
          report = solve_unconstrained(unconstrained, seeded(config.solver, sub));
        } else {
          report = solve_quantrand(built.instance, seeded(config.quantrand, sub));
        }
        ratios_per_trial.push_back(
            ratios_to_last(raw_user_powers(built.instance, report.omega_star.omega)));
        if (-report.t_root > best_value) {
          best_value = -report.t_root;
          best_omega = report.omega_star.omega;
        }
      }
      MetricsRow row = metrics_from_omega(method, config, built, best_omega);
      row.variance = ratio_variance(ratios_per_trial);
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      MetricsRow err;
      err.method = method;
      err.note = e.what();
      rows.push_back(std::move(err));
    }
  };

  run_method("non-constraint");
  run_method("bis");
  run_method("quantrand");
  if (oracle_bits > 0) {
    try {
      const OracleResult oracle = exhaustive_oracle(built.instance, oracle_bits);
      MetricsRow row =
          metrics_from_omega("oracle", config, built, oracle.best_omega.omega);
      if (!oracle.feasible) row.note = "infeasible-everywhere";
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      MetricsRow err;
      err.method = "oracle";
      err.note = e.what();
      rows.push_back(std::move(err));
    }
  }
  return rows;
}

}  // namespace risbeam
