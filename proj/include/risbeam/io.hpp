// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "risbeam/experiments.hpp"

namespace risbeam {

// Full-precision text form of a double ("%.17g"): re-parsing round-trips the
// exact bits, which the result-file invariants rely on.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::string& path);

nlohmann::json report_to_json(const SolveReport& report,
                              const ProblemInstance* instance = nullptr);

// Sidecar carrying scenario hash, seed, solver settings, and build stamp.
// Must be written before any data file so partial outputs stay attributable.
nlohmann::json make_sidecar(const ScenarioConfig& config, const std::string& scenario_path,
                            std::uint64_t seed, const std::string& extra_kind);

void write_json_file(const std::string& path, const nlohmann::json& doc);

// Study writers: sidecar first, then data files. All emit stable column names
// (see README) with full-precision doubles.
void write_solve_outputs(const std::string& out_dir, const nlohmann::json& sidecar,
                         const SolveReport& report, const ProblemInstance& instance);
void write_pattern_csv(const std::string& path, const BeamPattern& pattern);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
void write_suppression_outputs(const std::string& out_dir, const nlohmann::json& sidecar,
                               const SuppressionStudyResult& result);
void write_cdf_outputs(const std::string& out_dir, const nlohmann::json& sidecar,
                       const CdfStudyResult& result);
void write_rg_outputs(const std::string& out_dir, const nlohmann::json& sidecar,
                      const RgStudyResult& result);

}  // namespace risbeam
