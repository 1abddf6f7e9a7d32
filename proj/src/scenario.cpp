// SPDX-License-Identifier: Apache-2.0
#include "risbeam/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "risbeam/errors.hpp"

namespace risbeam {

using nlohmann::json;

namespace {

double require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("scenario: ") + what + " must be positive and finite");
  }
  return v;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: field '") + key + "': " + e.what());
  }
}

template <typename T>
T get_required(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw ConfigError(std::string("scenario: missing required field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: field '") + key + "': " + e.what());
  }
}

PropagationMode parse_mode(const std::string& mode) {
  if (mode == "spherical") return PropagationMode::kSpherical;
  if (mode == "far-field") return PropagationMode::kFarField;
  throw ConfigError("scenario: unknown propagation_mode '" + mode +
                    "' (expected 'spherical' or 'far-field')");
}

}  // namespace

void ScenarioConfig::validate() const {
  require_positive(wavelength_m, "wavelength");
  require_positive(grid.spacing_m, "grid.spacing");
  if (grid.rows < 1 || grid.cols < 1) throw ConfigError("scenario: grid must be >= 1x1");
  require_positive(unit_gain, "unit_gain");
  if (sources.empty()) throw ConfigError("scenario: need at least one source");
  for (const auto& s : sources) {
    require_positive(s.range_m, "source range");
    if (s.theta_deg < 0.0 || s.theta_deg >= 90.0) {
      throw ConfigError("scenario: source elevation must lie in [0, 90)");
    }
  }
  if (users.empty()) throw ConfigError("scenario: need at least one user");
  for (const auto& u : users) {
    require_positive(u.range_m, "user range");
    require_positive(u.weight, "user weight");
    if (std::abs(u.theta_deg) >= 90.0) {
      throw ConfigError("scenario: user elevation must lie in the forward hemisphere");
    }
  }
  for (const auto& r : suppression_regions) {
    require_positive(r.range_m, "suppression range");
    require_positive(r.sample_spacing_deg, "suppression sample_spacing");
    require_positive(r.threshold_w, "suppression threshold");
    if (r.theta_max_deg < r.theta_min_deg || r.phi_max_deg < r.phi_min_deg) {
      throw ConfigError("scenario: suppression region bounds out of order");
    }
  }
  solver.validate();
  quantrand.validate();
}

ScenarioConfig scenario_from_json(const json& doc) {
  ScenarioConfig c;
  c.wavelength_m = get_required<double>(doc, "wavelength");
  const json& g = doc.contains("grid") ? doc.at("grid") : json::object();
  c.grid.rows = get_or<int>(g, "rows", 1);
  c.grid.cols = get_or<int>(g, "cols", 1);
  c.grid.spacing_m = get_required<double>(g, "spacing");
  c.unit_gain = get_or<double>(doc, "unit_gain", 1.0);
  c.propagation_mode = parse_mode(get_or<std::string>(doc, "propagation_mode", "spherical"));

  for (const json& s : get_required<json>(doc, "sources")) {
    SourceSpec src;
    src.range_m = get_required<double>(s, "r");
    src.theta_deg = get_or<double>(s, "theta", 0.0);
    src.phi_deg = get_or<double>(s, "phi", 0.0);
    src.field_amplitude = get_or<double>(s, "field_amplitude", 1.0);
    c.sources.push_back(src);
  }
  for (const json& u : get_required<json>(doc, "users")) {
    UserSpec user;
    user.range_m = get_required<double>(u, "r");
    user.theta_deg = get_or<double>(u, "theta", 0.0);
    user.phi_deg = get_or<double>(u, "phi", 0.0);
    user.weight = get_or<double>(u, "weight", 1.0);
    c.users.push_back(user);
  }
  if (doc.contains("suppression_regions")) {
    for (const json& r : doc.at("suppression_regions")) {
      SuppressionRegion region;
      region.theta_min_deg = get_required<double>(r, "theta_min");
      region.theta_max_deg = get_required<double>(r, "theta_max");
      region.phi_min_deg = get_or<double>(r, "phi_min", 0.0);
      region.phi_max_deg = get_or<double>(r, "phi_max", region.phi_min_deg);
      region.range_m = get_required<double>(r, "r");
      region.sample_spacing_deg = get_or<double>(r, "sample_spacing", 1.0);
      region.threshold_w = get_required<double>(r, "threshold");
      c.suppression_regions.push_back(region);
    }
  }
  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    c.solver.lambda0 = get_or<double>(s, "lambda0", c.solver.lambda0);
    c.solver.epsilon = get_or<double>(s, "epsilon", c.solver.epsilon);
    c.solver.delta = get_or<double>(s, "delta", c.solver.delta);
    c.solver.max_inner_iters = get_or<int>(s, "max_inner_iters", c.solver.max_inner_iters);
    c.solver.inner_grad_tolerance =
        get_or<double>(s, "inner_grad_tolerance", c.solver.inner_grad_tolerance);
    c.solver.restarts = get_or<int>(s, "restarts", c.solver.restarts);
    c.solver.rng_seed = get_or<std::uint64_t>(s, "rng_seed", c.solver.rng_seed);
    c.solver.warm_start = get_or<bool>(s, "warm_start", c.solver.warm_start);
  }
  if (doc.contains("quantrand")) {
    const json& q = doc.at("quantrand");
    c.quantrand.bits = get_or<int>(q, "bits", c.quantrand.bits);
    c.quantrand.max_sweeps = get_or<int>(q, "max_sweeps", c.quantrand.max_sweeps);
    c.quantrand.rng_seed = get_or<std::uint64_t>(q, "rng_seed", c.quantrand.rng_seed);
  }
  if (doc.contains("study")) {
    const json& st = doc.at("study");
    c.study.trials = get_or<int>(st, "trials", c.study.trials);
    c.study.n_grid = get_or<std::vector<int>>(st, "n_grid", c.study.n_grid);
    c.study.k_grid = get_or<std::vector<int>>(st, "k_grid", c.study.k_grid);
    c.study.threshold_fractions = get_or<std::vector<double>>(st, "threshold_fractions",
                                                              c.study.threshold_fractions);
    c.study.rg_sigma_fraction =
        get_or<double>(st, "rg_sigma_fraction", c.study.rg_sigma_fraction);
    c.study.pattern_spacing_deg =
        get_or<double>(st, "pattern_spacing", c.study.pattern_spacing_deg);
    c.study.sweep_theta_min_deg =
        get_or<double>(st, "sweep_theta_min", c.study.sweep_theta_min_deg);
    c.study.sweep_theta_max_deg =
        get_or<double>(st, "sweep_theta_max", c.study.sweep_theta_max_deg);
    c.study.sweep_phi_deg = get_or<std::vector<double>>(st, "sweep_phi", c.study.sweep_phi_deg);
  }
  c.validate();
  return c;
}

json scenario_to_json(const ScenarioConfig& c) {
  json doc;
  doc["wavelength"] = c.wavelength_m;
  doc["grid"] = {{"rows", c.grid.rows}, {"cols", c.grid.cols}, {"spacing", c.grid.spacing_m}};
  doc["unit_gain"] = c.unit_gain;
  doc["propagation_mode"] =
      c.propagation_mode == PropagationMode::kSpherical ? "spherical" : "far-field";
  doc["sources"] = json::array();
  for (const auto& s : c.sources) {
    doc["sources"].push_back({{"r", s.range_m},
                              {"theta", s.theta_deg},
                              {"phi", s.phi_deg},
                              {"field_amplitude", s.field_amplitude}});
  }
  doc["users"] = json::array();
  for (const auto& u : c.users) {
    doc["users"].push_back({{"r", u.range_m},
                            {"theta", u.theta_deg},
                            {"phi", u.phi_deg},
                            {"weight", u.weight}});
  }
  doc["suppression_regions"] = json::array();
  for (const auto& r : c.suppression_regions) {
    doc["suppression_regions"].push_back({{"theta_min", r.theta_min_deg},
                                          {"theta_max", r.theta_max_deg},
                                          {"phi_min", r.phi_min_deg},
                                          {"phi_max", r.phi_max_deg},
                                          {"r", r.range_m},
                                          {"sample_spacing", r.sample_spacing_deg},
                                          {"threshold", r.threshold_w}});
  }
  doc["solver"] = {{"lambda0", c.solver.lambda0},
                   {"epsilon", c.solver.epsilon},
                   {"delta", c.solver.delta},
                   {"max_inner_iters", c.solver.max_inner_iters},
                   {"inner_grad_tolerance", c.solver.inner_grad_tolerance},
                   {"restarts", c.solver.restarts},
                   {"rng_seed", c.solver.rng_seed},
                   {"warm_start", c.solver.warm_start}};
  doc["quantrand"] = {{"bits", c.quantrand.bits},
                      {"max_sweeps", c.quantrand.max_sweeps},
                      {"rng_seed", c.quantrand.rng_seed}};
  doc["study"] = {{"trials", c.study.trials},
                  {"n_grid", c.study.n_grid},
                  {"k_grid", c.study.k_grid},
                  {"threshold_fractions", c.study.threshold_fractions},
                  {"rg_sigma_fraction", c.study.rg_sigma_fraction},
                  {"pattern_spacing", c.study.pattern_spacing_deg},
                  {"sweep_theta_min", c.study.sweep_theta_min_deg},
                  {"sweep_theta_max", c.study.sweep_theta_max_deg},
                  {"sweep_phi", c.study.sweep_phi_deg}};
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like dotted.key=value: '" + assignment + "'");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json* node = &doc;
  std::stringstream ss(path);
  std::string segment;
  std::vector<std::string> segments;
  while (std::getline(ss, segment, '.')) segments.push_back(segment);
  if (segments.empty()) throw ConfigError("override has an empty key: '" + assignment + "'");

  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    const std::string& s = segments[i];
    if (!s.empty() && std::isdigit(static_cast<unsigned char>(s[0]))) {
      const std::size_t idx = std::stoul(s);
      if (!node->is_array() || idx >= node->size()) {
        throw ConfigError("override index out of range at '" + s + "' in '" + path + "'");
      }
      node = &(*node)[idx];
    } else {
      node = &(*node)[s];
    }
  }
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // treat unparseable values as strings
  const std::string& last = segments.back();
  if (!last.empty() && std::isdigit(static_cast<unsigned char>(last[0]))) {
    const std::size_t idx = std::stoul(last);
    if (!node->is_array() || idx >= node->size()) {
      throw ConfigError("override index out of range at '" + last + "' in '" + path + "'");
    }
    (*node)[idx] = parsed;
  } else {
    (*node)[last] = parsed;
  }
}

ScenarioConfig load_scenario(const std::string& path,
                             const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("scenario parse error in " + path + ": " + e.what());
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return scenario_from_json(doc);
}

ChannelVector scenario_channel(const ScenarioConfig& config, const ObservationPoint& at) {
  const UnitGrid grid = build_grid(config.grid.rows, config.grid.cols, config.grid.spacing_m);
  return channel_vector(grid, config.sources, at, config.wavelength_m, config.unit_gain,
                        config.propagation_mode);
}

BuiltProblem build_problem(const ScenarioConfig& config) {
  config.validate();
  const UnitGrid grid = build_grid(config.grid.rows, config.grid.cols, config.grid.spacing_m);
  BuiltProblem built;
  for (const UserSpec& u : config.users) {
    const ChannelVector ch =
        channel_vector(grid, config.sources, {u.range_m, u.theta_deg, u.phi_deg},
                       config.wavelength_m, config.unit_gain, config.propagation_mode);
    built.instance.user_forms.push_back(quadratic_form(ch, u.weight));
  }
  for (const SuppressionRegion& region : config.suppression_regions) {
    for (const ConstraintPoint& p : discretize_suppression(region)) {
      const ChannelVector ch =
          channel_vector(grid, config.sources, p.at, config.wavelength_m, config.unit_gain,
                         config.propagation_mode);
      built.instance.constraint_forms.push_back(quadratic_form(ch, 1.0));
      built.constraint_points.push_back(p);
    }
  }
  built.instance.thresholds.resize(static_cast<Eigen::Index>(built.constraint_points.size()));
  for (std::size_t q = 0; q < built.constraint_points.size(); ++q) {
    built.instance.thresholds[static_cast<Eigen::Index>(q)] =
        built.constraint_points[q].threshold_w;
  }
  built.instance.validate();
  return built;
}

}  // namespace risbeam
