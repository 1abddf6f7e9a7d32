// SPDX-License-Identifier: Apache-2.0
#include "risbeam/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "risbeam/errors.hpp"
#include "risbeam/version.hpp"

namespace risbeam {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

json report_to_json(const SolveReport& report, const ProblemInstance* instance) {
  json doc;
  doc["method"] = report.method;
  doc["t_root"] = report.t_root;
  doc["max_min_power_w"] = -report.t_root;
  doc["termination"] = to_string(report.termination);
  doc["epsilon_used"] = report.epsilon_used;
  doc["delta_used"] = report.delta_used;
  doc["omega_star_rad"] = std::vector<double>(
      report.omega_star.omega.data(),
      report.omega_star.omega.data() + report.omega_star.omega.size());
  doc["achieved_weighted_powers_w"] = std::vector<double>(
      report.achieved_powers.data(),
      report.achieved_powers.data() + report.achieved_powers.size());
  if (instance != nullptr) {
    std::vector<double> raw(static_cast<std::size_t>(instance->num_users()));
    for (Eigen::Index k = 0; k < instance->num_users(); ++k) {
      raw[static_cast<std::size_t>(k)] =
          report.achieved_powers[k] / instance->user_forms[k].scale;
    }
    doc["achieved_user_powers_w"] = raw;
  }
  doc["constraint_values_w"] = std::vector<double>(
      report.constraint_values.data(),
      report.constraint_values.data() + report.constraint_values.size());
  doc["max_violation_w"] = report.max_violation;
  doc["trace"] = json::array();
  for (const TraceEntry& e : report.bisection_trace) {
    doc["trace"].push_back({{"t", e.t},
                            {"f_lambda", e.f_lambda},
                            {"lambda", e.lambda},
                            {"grad_norm", e.grad_norm},
                            {"inner_iterations", e.inner_iterations},
                            {"sign_uncertain", e.sign_uncertain}});
  }
  return doc;
}

json make_sidecar(const ScenarioConfig& config, const std::string& scenario_path,
                  std::uint64_t seed, const std::string& extra_kind) {
  std::string contents;
  {
    std::ifstream in(scenario_path, std::ios::binary);
    if (in) {
      std::ostringstream ss;
      ss << in.rdbuf();
      contents = ss.str();
    }
  }
  json side;
  side["kind"] = extra_kind;
  side["scenario_path"] = scenario_path;
  side["scenario_hash_fnv1a64"] = fnv1a_hex(contents);
  side["seed"] = seed;
  side["git_describe"] = kGitDescribe;
  side["solver"] = {{"lambda0", config.solver.lambda0},
                    {"epsilon", config.solver.epsilon},
                    {"delta", config.solver.delta},
                    {"max_inner_iters", config.solver.max_inner_iters},
                    {"inner_grad_tolerance", config.solver.inner_grad_tolerance},
                    {"restarts", config.solver.restarts},
                    {"rng_seed", config.solver.rng_seed},
                    {"warm_start", config.solver.warm_start}};
  side["quantrand"] = {{"bits", config.quantrand.bits},
                       {"max_sweeps", config.quantrand.max_sweeps}};
  side["desk_scale_trials"] = config.study.trials;
  return side;
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << doc.dump(2) << '\n';
}

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir);
}

std::string ratio_string(const std::vector<double>& ratio) {
  std::string out;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (i) out += ':';
    out += format_double(ratio[i]);
  }
  return out;
}

}  // namespace

void write_solve_outputs(const std::string& out_dir, const json& sidecar,
                         const SolveReport& report, const ProblemInstance& instance) {
  ensure_dir(out_dir);
  write_json_file(join_path(out_dir, "run_meta.json"), sidecar);
  write_json_file(join_path(out_dir, "report.json"), report_to_json(report, &instance));
}

void write_pattern_csv(const std::string& path, const BeamPattern& pattern) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(pattern.theta_deg.size());
  for (std::size_t i = 0; i < pattern.theta_deg.size(); ++i) {
    rows.push_back({format_double(pattern.theta_deg[i]), format_double(pattern.phi_deg[i]),
                    format_double(pattern.power_w[i]), format_double(pattern.power_dbm[i])});
  }
  write_csv(path, {"theta_deg", "phi_deg", "power_w", "power_dbm"}, rows);
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const MetricsRow& r : rows) {
    cells.push_back({r.method, ratio_string(r.power_ratio), format_double(r.variance),
                     format_double(r.peak_in_suppression_w),
                     format_double(r.peak_in_suppression_dbm),
                     format_double(r.min_ue_power_w), format_double(r.max_sp_power_w),
                     format_double(r.relative_gain_db), r.note});
  }
  write_csv(path,
            {"method", "power_ratio", "variance", "peak_sup_w", "peak_sup_dbm", "min_ue_w",
             "max_sp_w", "rg_db", "note"},
            cells);
}

void write_suppression_outputs(const std::string& out_dir, const json& sidecar,
                               const SuppressionStudyResult& result) {
  ensure_dir(out_dir);
  write_json_file(join_path(out_dir, "run_meta.json"), sidecar);
  std::vector<MetricsRow> metrics;
  for (const SuppressionEntry& e : result.entries) {
    metrics.push_back(e.metrics);
    if (e.pattern.theta_deg.empty()) continue;  // labeled infeasible entries
    std::string name = "pattern_" + e.method;
    if (e.threshold_fraction > 0.0) name += "_f" + format_double(e.threshold_fraction);
    write_pattern_csv(join_path(out_dir, name + ".csv"), e.pattern);
  }
  write_metrics_csv(join_path(out_dir, "metrics.csv"), metrics);
}

void write_cdf_outputs(const std::string& out_dir, const json& sidecar,
                       const CdfStudyResult& result) {
  ensure_dir(out_dir);
  write_json_file(join_path(out_dir, "run_meta.json"), sidecar);
  for (const auto& [method, series] : result.by_method) {
    std::vector<std::vector<std::string>> rows;
    const std::size_t n = series.min_ue_sorted_w.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double cdf = static_cast<double>(i + 1) / static_cast<double>(n);
      rows.push_back({format_double(series.min_ue_sorted_w[i]),
                      format_double(watts_to_dbm(series.min_ue_sorted_w[i])),
                      format_double(series.max_sp_sorted_w[i]),
                      format_double(watts_to_dbm(series.max_sp_sorted_w[i])),
                      format_double(cdf)});
    }
    write_csv(join_path(out_dir, "cdf_" + method + ".csv"),
              {"min_ue_w", "min_ue_dbm", "max_sp_w", "max_sp_dbm", "cdf"}, rows);
  }
}

void write_rg_outputs(const std::string& out_dir, const json& sidecar,
                      const RgStudyResult& result) {
  ensure_dir(out_dir);
  write_json_file(join_path(out_dir, "run_meta.json"), sidecar);
  std::vector<std::vector<std::string>> rows;
  const std::string var(1, result.variable);
  for (const RgPoint& p : result.points) {
    for (const auto& [method, rg] : p.rg_db_mean) {
      rows.push_back({var, std::to_string(p.value), method, format_double(rg)});
    }
  }
  write_csv(join_path(out_dir, "rg_curve.csv"), {"variable", "value", "method", "rg_db"},
            rows);
}

}  // namespace risbeam
