// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "risbeam/baselines.hpp"
#include "risbeam/field_model.hpp"
#include "risbeam/solver.hpp"

namespace risbeam {

struct GridSpec {
  int rows = 1;
  int cols = 1;
  double spacing_m = 0.025;
};

struct UserSpec {
  double range_m = 30.0;
  double theta_deg = 0.0;
  double phi_deg = 0.0;
  double weight = 1.0;  // alpha_k
};

// Knobs consumed by the experiment studies; all overridable from the CLI via
// dotted --set keys.
struct StudySettings {
  int trials = 20;  // desk-scale replacement for the reference 100-trial runs
  std::vector<int> n_grid = {16, 32, 64};
  std::vector<int> k_grid;
  std::vector<double> threshold_fractions;  // of the unconstrained Peak
  double rg_sigma_fraction = 0.001;         // sigma_q for RG trials, x Peak
  double pattern_spacing_deg = 0.2;
  double sweep_theta_min_deg = -90.0;
  double sweep_theta_max_deg = 90.0;
  std::vector<double> sweep_phi_deg = {0.0};
};

// Full experiment description: geometry, sources, users, suppression
// regions, and solver settings. Angles in degrees at this boundary, SI units
// elsewhere.
struct ScenarioConfig {
  double wavelength_m = 0.0517;
  GridSpec grid;
  double unit_gain = 1.0;
  PropagationMode propagation_mode = PropagationMode::kSpherical;
  std::vector<SourceSpec> sources;
  std::vector<UserSpec> users;
  std::vector<SuppressionRegion> suppression_regions;
  SolverSettings solver;
  QuantizedSearchSettings quantrand;
  StudySettings study;

  void validate() const;
};

ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioConfig& config);

// Loads a scenario file (JSON schema, documented in the README), applying
// dotted-path overrides ("solver.epsilon=1e-5", "users.0.weight=2") to the
// document before parsing. Parse and validation failures throw ConfigError.
ScenarioConfig load_scenario(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// Applies one "dotted.key=value" override; numeric path segments index arrays.
void apply_override(nlohmann::json& doc, const std::string& assignment);

struct BuiltProblem {
  ProblemInstance instance;
  std::vector<ConstraintPoint> constraint_points;  // row-aligned with instance
};

// Builds channel vectors and quadratic forms for every user and discretized
// suppression sample.
BuiltProblem build_problem(const ScenarioConfig& config);

// Channel for an arbitrary observation point under the scenario's geometry.
ChannelVector scenario_channel(const ScenarioConfig& config, const ObservationPoint& at);

}  // namespace risbeam
