// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "risbeam/scenario.hpp"

namespace risbeam {

// Received-power cross-section over observation angles at the scenario's
// observation distance.
struct BeamPattern {
  std::vector<double> theta_deg;
  std::vector<double> phi_deg;
  std::vector<double> power_w;
  std::vector<double> power_dbm;
  Eigen::VectorXd omega_used;
};

// Inclusive angle grid at `spacing` degrees.
std::vector<double> angle_grid(double min_deg, double max_deg, double spacing_deg);

BeamPattern sweep_pattern(const ScenarioConfig& config, const Eigen::VectorXd& omega,
                          const std::vector<double>& theta_grid_deg,
                          const std::vector<double>& phi_grid_deg);

// Swept power maximum over all suppression regions at pattern_spacing.
double suppression_region_peak(const ScenarioConfig& config, const Eigen::VectorXd& omega);

struct MetricsRow {
  std::string method;
  std::vector<double> power_ratio;  // raw P_k / P_K
  double variance = 0.0;            // max component sample variance across trials
  double peak_in_suppression_w = 0.0;
  double peak_in_suppression_dbm = 0.0;
  double min_ue_power_w = 0.0;  // Min-UE, raw powers
  double max_sp_power_w = 0.0;  // Max-SP, at the constraint sample points
  double relative_gain_db = 0.0;  // 10*log10(min_ue / max_sp)
  std::string note;
};

MetricsRow metrics_from_omega(const std::string& method, const ScenarioConfig& config,
                              const BuiltProblem& built, const Eigen::VectorXd& omega);

struct SuppressionEntry {
  std::string method;
  double threshold_fraction = 0.0;  // 0 = scenario's own sigma_q
  SolveReport report;
  MetricsRow metrics;
  BeamPattern pattern;
};

struct SuppressionStudyResult {
  double peak_w = 0.0;  // unconstrained max-min reference
  std::vector<SuppressionEntry> entries;
};

// Solves with Non-Constraint, BIS, and QuantRand; Peak comes from the
// unconstrained run. When study.threshold_fractions is non-empty, the
// constrained methods re-run per fraction with sigma_q = fraction * Peak.
// Infeasible thresholds produce a labeled entry, not a failure.
SuppressionStudyResult run_suppression_study(const ScenarioConfig& config,
                                             std::uint64_t seed);

// BIS achieved power ratios P_k / P_K with sample variance across seeded
// trials (study.trials).
MetricsRow run_weighted_study(const ScenarioConfig& config, std::uint64_t seed);

struct CdfSeries {
  std::vector<double> min_ue_sorted_w;
  std::vector<double> max_sp_sorted_w;
};

struct CdfStudyResult {
  int trials = 0;
  std::map<std::string, CdfSeries> by_method;  // bis, non-constraint, quantrand
};

CdfStudyResult run_cdf_study(const ScenarioConfig& config, int trials, std::uint64_t seed);

struct RgPoint {
  int value = 0;  // grid value of N or K
  std::map<std::string, double> rg_db_mean;
};

struct RgStudyResult {
  char variable = 'N';  // 'N' (units) or 'K' (users)
  int trials = 0;
  std::vector<RgPoint> points;
};

// RG = 10*log10(P_UE,min / P_SP,max) averaged over seeded trials for each
// grid point. For 'N' the linear array is resized; for 'K' the first k users
// are kept. Per trial, sigma_q = study.rg_sigma_fraction * that trial's
// unconstrained Peak.
RgStudyResult run_rg_study(const ScenarioConfig& config, char variable,
                           const std::vector<int>& grid, std::uint64_t seed);

// One MetricsRow per method with a shared seed: non-constraint, bis,
// quantrand, plus the exhaustive oracle when oracle_bits > 0 and the search
// space permits. A failing method yields a labeled error row.
std::vector<MetricsRow> compare_methods(const ScenarioConfig& config, std::uint64_t seed,
                                        int oracle_bits);

}  // namespace risbeam
