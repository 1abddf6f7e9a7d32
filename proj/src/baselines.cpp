// SPDX-License-Identifier: Apache-2.0
#include "risbeam/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "risbeam/errors.hpp"

namespace risbeam {

void QuantizedSearchSettings::validate() const {
  if (bits < 1) throw ConfigError("quantrand: bits must be >= 1");
  if (max_sweeps < 1) throw ConfigError("quantrand: max_sweeps must be >= 1");
}

ProblemInstance without_constraints(const ProblemInstance& instance) {
  ProblemInstance stripped;
  stripped.user_forms = instance.user_forms;
  stripped.thresholds.resize(0);
  return stripped;
}

SolveReport solve_unconstrained(const ProblemInstance& instance,
                                const SolverSettings& settings) {
  if (instance.num_constraints() != 0) {
    throw ConfigError("solve_unconstrained: instance must have Q = 0");
  }
  SolveReport report = solve(instance, settings);
  report.method = "non-constraint";
  return report;
}

namespace {

// Shared grid-search state: per-form responses maintained incrementally so a
// candidate level costs O(K+Q).
struct GridState {
  const ProblemInstance& inst;
  int levels;
  std::vector<std::complex<double>> phase;  // e^{j 2 pi l / levels}
  std::vector<int> level;                   // current level per coordinate
  std::vector<std::complex<double>> resp;   // K+Q responses at current config

  GridState(const ProblemInstance& instance, int bits)
      : inst(instance), levels(1 << bits) {
    phase.resize(static_cast<std::size_t>(levels));
    for (int l = 0; l < levels; ++l) {
      phase[static_cast<std::size_t>(l)] = std::polar(1.0, kTwoPi * l / levels);
    }
    level.assign(static_cast<std::size_t>(inst.unit_count()), 0);
    recompute();
  }

  void recompute() {
    const Eigen::Index m = inst.num_users() + inst.num_constraints();
    resp.assign(static_cast<std::size_t>(m), {0.0, 0.0});
    for (Eigen::Index n = 0; n < inst.unit_count(); ++n) {
      accumulate(n, phase[static_cast<std::size_t>(level[static_cast<std::size_t>(n)])]);
    }
  }

  void accumulate(Eigen::Index n, std::complex<double> x) {
    const Eigen::Index k_count = inst.num_users();
    for (Eigen::Index k = 0; k < k_count; ++k) {
      resp[static_cast<std::size_t>(k)] += inst.user_forms[k].factor[n] * x;
    }
    for (Eigen::Index q = 0; q < inst.num_constraints(); ++q) {
      resp[static_cast<std::size_t>(k_count + q)] +=
          inst.constraint_forms[q].factor[n] * x;
    }
  }

  // Weighted min-user power and max constraint violation for the current
  // responses shifted by changing coordinate n to level l.
  void probe(Eigen::Index n, int l, double& min_user, double& max_violation) const {
    const std::complex<double> delta =
        phase[static_cast<std::size_t>(l)] -
        phase[static_cast<std::size_t>(level[static_cast<std::size_t>(n)])];
    const Eigen::Index k_count = inst.num_users();
    min_user = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const std::complex<double> c =
          resp[static_cast<std::size_t>(k)] + inst.user_forms[k].factor[n] * delta;
      min_user = std::min(min_user, inst.user_forms[k].scale * std::norm(c));
    }
    max_violation = 0.0;
    for (Eigen::Index q = 0; q < inst.num_constraints(); ++q) {
      const std::complex<double> c = resp[static_cast<std::size_t>(k_count + q)] +
                                     inst.constraint_forms[q].factor[n] * delta;
      max_violation = std::max(max_violation, inst.constraint_forms[q].scale * std::norm(c) -
                                                  inst.thresholds[q]);
    }
  }

  void commit(Eigen::Index n, int l) {
    const std::complex<double> delta =
        phase[static_cast<std::size_t>(l)] -
        phase[static_cast<std::size_t>(level[static_cast<std::size_t>(n)])];
    accumulate_delta(n, delta);
    level[static_cast<std::size_t>(n)] = l;
  }

  void accumulate_delta(Eigen::Index n, std::complex<double> delta) {
    const Eigen::Index k_count = inst.num_users();
    for (Eigen::Index k = 0; k < k_count; ++k) {
      resp[static_cast<std::size_t>(k)] += inst.user_forms[k].factor[n] * delta;
    }
    for (Eigen::Index q = 0; q < inst.num_constraints(); ++q) {
      resp[static_cast<std::size_t>(k_count + q)] +=
          inst.constraint_forms[q].factor[n] * delta;
    }
  }

  Eigen::VectorXd omega() const {
    Eigen::VectorXd w(inst.unit_count());
    for (Eigen::Index n = 0; n < inst.unit_count(); ++n) {
      w[n] = kTwoPi * level[static_cast<std::size_t>(n)] / levels;
    }
    return w;
  }
};

void fill_report_from_omega(SolveReport& report, const ProblemInstance& instance,
                            Eigen::VectorXd omega) {
  report.omega_star.omega = std::move(omega);
  report.omega_star = report.omega_star.canonical();
  const Eigen::VectorXcd x = report.omega_star.unit_vector();
  report.achieved_powers.resize(instance.num_users());
  double min_weighted = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < instance.num_users(); ++k) {
    report.achieved_powers[k] = instance.user_forms[k].power(x);
    min_weighted = std::min(min_weighted, report.achieved_powers[k]);
  }
  report.t_root = -min_weighted;
  report.constraint_values.resize(instance.num_constraints());
  report.max_violation = 0.0;
  for (Eigen::Index q = 0; q < instance.num_constraints(); ++q) {
    report.constraint_values[q] = instance.constraint_forms[q].power(x);
    report.max_violation =
        std::max(report.max_violation, report.constraint_values[q] - instance.thresholds[q]);
  }
}

}  // namespace

SolveReport solve_quantrand(const ProblemInstance& instance,
                            const QuantizedSearchSettings& settings) {
  instance.validate();
  settings.validate();
  Rng rng(settings.rng_seed);
  GridState state(instance, settings.bits);

  // Seeded random starting configuration on the grid.
  for (auto& l : state.level) {
    l = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(state.levels));
  }
  state.recompute();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(instance.unit_count()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  Termination termination = Termination::kSweepLimit;
  int sweeps = 0;
  for (; sweeps < settings.max_sweeps; ++sweeps) {
    rng.shuffle(order);
    bool changed = false;
    for (Eigen::Index n : order) {
      int best_l = state.level[static_cast<std::size_t>(n)];
      double best_merit = -std::numeric_limits<double>::infinity();
      double best_violation = std::numeric_limits<double>::infinity();
      bool best_feasible = false;
      for (int l = 0; l < state.levels; ++l) {
        double merit, violation;
        state.probe(n, l, merit, violation);
        const bool feasible = violation <= 0.0;
        bool better;
        if (feasible != best_feasible) {
          better = feasible;  // feasible candidates always beat infeasible ones
        } else if (feasible) {
          better = merit > best_merit;
        } else {
          better = violation < best_violation;
        }
        if (better) {
          best_l = l;
          best_merit = merit;
          best_violation = violation;
          best_feasible = feasible;
        }
      }
      if (best_l != state.level[static_cast<std::size_t>(n)]) {
        state.commit(n, best_l);
        changed = true;
      }
    }
    if (!changed) {
      termination = Termination::kSweepConverged;
      ++sweeps;
      break;
    }
  }

  SolveReport report;
  report.method = "quantrand";
  report.termination = termination;
  fill_report_from_omega(report, instance, state.omega());
  return report;
}

OracleResult exhaustive_oracle(const ProblemInstance& instance, int bits) {
  instance.validate();
  if (bits < 1) throw ConfigError("exhaustive_oracle: bits must be >= 1");
  const Eigen::Index n_units = instance.unit_count();
  if (static_cast<long long>(n_units) * bits > 24) {
    throw ConfigError(
        "exhaustive_oracle: search space exceeds 2^24 configurations (N*bits <= 24)");
  }
  const int levels = 1 << bits;
  const Eigen::Index k_count = instance.num_users();
  const Eigen::Index q_count = instance.num_constraints();
  const Eigen::Index m = k_count + q_count;

  std::vector<std::complex<double>> phase(static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) {
    phase[static_cast<std::size_t>(l)] = std::polar(1.0, kTwoPi * l / levels);
  }

  // Depth-first over coordinates with prefix partial responses: no drift
  // accumulates because each leaf sum has depth N.
  std::vector<std::vector<std::complex<double>>> partial(
      static_cast<std::size_t>(n_units) + 1,
      std::vector<std::complex<double>>(static_cast<std::size_t>(m), {0.0, 0.0}));
  std::vector<int> level(static_cast<std::size_t>(n_units), 0);

  double best_value = -std::numeric_limits<double>::infinity();
  double best_violation = std::numeric_limits<double>::infinity();
  std::vector<int> best_level;
  std::vector<int> best_violation_level;
  bool any_feasible = false;

  auto descend = [&](auto&& self, Eigen::Index depth) -> void {
    if (depth == n_units) {
      const auto& resp = partial[static_cast<std::size_t>(depth)];
      double violation = 0.0;
      for (Eigen::Index q = 0; q < q_count; ++q) {
        violation = std::max(
            violation, instance.constraint_forms[q].scale *
                               std::norm(resp[static_cast<std::size_t>(k_count + q)]) -
                           instance.thresholds[q]);
      }
      if (violation <= 0.0) {
        double min_user = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < k_count; ++k) {
          min_user = std::min(min_user, instance.user_forms[k].scale *
                                            std::norm(resp[static_cast<std::size_t>(k)]));
        }
        if (!any_feasible || min_user > best_value) {
          any_feasible = true;
          best_value = min_user;
          best_level = level;
        }
      } else if (!any_feasible && violation < best_violation) {
        best_violation = violation;
        best_violation_level = level;
      }
      return;
    }
    const auto& prev = partial[static_cast<std::size_t>(depth)];
    auto& next = partial[static_cast<std::size_t>(depth) + 1];
    for (int l = 0; l < levels; ++l) {
      const std::complex<double> x = phase[static_cast<std::size_t>(l)];
      for (Eigen::Index k = 0; k < k_count; ++k) {
        next[static_cast<std::size_t>(k)] =
            prev[static_cast<std::size_t>(k)] + instance.user_forms[k].factor[depth] * x;
      }
      for (Eigen::Index q = 0; q < q_count; ++q) {
        next[static_cast<std::size_t>(k_count + q)] =
            prev[static_cast<std::size_t>(k_count + q)] +
            instance.constraint_forms[q].factor[depth] * x;
      }
      level[static_cast<std::size_t>(depth)] = l;
      self(self, depth + 1);
    }
  };
  descend(descend, 0);

  OracleResult result;
  result.feasible = any_feasible;
  const std::vector<int>& chosen = any_feasible ? best_level : best_violation_level;
  Eigen::VectorXd omega(n_units);
  for (Eigen::Index n = 0; n < n_units; ++n) {
    omega[n] = kTwoPi * chosen[static_cast<std::size_t>(n)] / levels;
  }
  result.best_omega.omega = std::move(omega);
  if (any_feasible) {
    result.best_value = best_value;
  } else {
    // Best-violation config; report its weighted min-user power for context.
    const Eigen::VectorXcd x = result.best_omega.unit_vector();
    double min_user = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < k_count; ++k) {
      min_user = std::min(min_user, instance.user_forms[k].power(x));
    }
    result.best_value = min_user;
  }
  return result;
}

}  // namespace risbeam
