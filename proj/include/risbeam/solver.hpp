// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "risbeam/common.hpp"
#include "risbeam/field_model.hpp"

namespace risbeam {

// Constrained max-min instance: maximize min_k  user_forms[k].power over
// unit-modulus phases, subject to constraint_forms[q].power <= thresholds[q].
// User forms carry scale 1/alpha_k, constraint forms scale 1.
struct ProblemInstance {
  std::vector<QuadraticForm> user_forms;
  std::vector<QuadraticForm> constraint_forms;
  Eigen::VectorXd thresholds;  // sigma_q, size Q

  Eigen::Index num_users() const { return static_cast<Eigen::Index>(user_forms.size()); }
  Eigen::Index num_constraints() const {
    return static_cast<Eigen::Index>(constraint_forms.size());
  }
  Eigen::Index unit_count() const {
    return user_forms.empty() ? 0 : user_forms.front().factor.size();
  }
  void validate() const;
};

struct SolverSettings {
  double lambda0 = 1.0;
  double epsilon = 0.0;  // bracket tolerance; 0 -> 1e-4 * initial span
  double delta = 0.0;    // constraint tolerance; 0 -> 1e-3 * min threshold
  int max_inner_iters = 2000;
  double inner_grad_tolerance = 1e-8;
  int restarts = 8;
  std::uint64_t rng_seed = 0;
  bool warm_start = true;  // reuse previous midpoint's omega as one start
  void validate() const;
};

// Per-unit phase shifts, the optimization variable.
struct PhaseConfig {
  Eigen::VectorXd omega;  // radians

  Eigen::VectorXcd unit_vector() const { return unit_phases(omega); }
  PhaseConfig canonical() const {  // reduced mod 2pi into [0, 2pi)
    PhaseConfig out;
    out.omega = omega.unaryExpr([](double w) { return canonical_phase(w); });
    return out;
  }
};

enum class Termination {
  kBracketConverged,
  kDeltaSatisfied,
  kBracketFailure,
  // Baseline-only labels (quantized coordinate descent):
  kSweepConverged,
  kSweepLimit,
};

std::string to_string(Termination t);

struct TraceEntry {
  double t = 0.0;
  double f_lambda = 0.0;
  double lambda = 0.0;
  double grad_norm = 0.0;      // inner-solver gradient norm at the returned omega
  int inner_iterations = 0;
  bool sign_uncertain = false;  // |F_lambda| below the inner-solver noise floor
};

struct SolveReport {
  std::string method = "bis";
  double t_root = 0.0;
  PhaseConfig omega_star;
  Eigen::VectorXd achieved_powers;    // A_k evaluations (weighted), size K
  Eigen::VectorXd constraint_values;  // H_q evaluations, size Q
  double max_violation = 0.0;         // max_q (constraint_values[q] - sigma_q, 0)
  std::vector<TraceEntry> bisection_trace;
  Termination termination = Termination::kBracketConverged;
  double epsilon_used = 0.0;
  double delta_used = 0.0;
};

// Entries 1..K are f_k(w) - t = -A_k power - t; entries K+1..K+Q are
// g_q(w) - sigma_q.
Eigen::VectorXd objective_vector(const ProblemInstance& instance,
                                 const Eigen::VectorXd& omega, double t);

// Gradient wrt omega of sum_i weights[i] * h_i(omega, t); each rank-1 form
// contributes in O(N) through its cached response.
Eigen::VectorXd objective_gradient(const ProblemInstance& instance,
                                   const Eigen::VectorXd& omega, double t,
                                   const Eigen::VectorXd& weights);

struct InnerResult {
  double value = 0.0;        // achieved smoothed objective (upper bound on F_lambda)
  Eigen::VectorXd omega;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;    // gradient tolerance reached before iteration cap
};

// Approximate minimizer of the smoothed objective over omega: accelerated
// gradient descent with backtracking line search and function-value adaptive
// restart, best over `restarts` seeded random initializations plus the
// optional warm start. Non-convergence returns the best iterate (flagged via
// `converged`), never a failure.
InnerResult evaluate_F_lambda(const ProblemInstance& instance, double t, double lambda,
                              const SolverSettings& settings, Rng& rng,
                              const Eigen::VectorXd* warm = nullptr);

// Convenience overload: fresh RNG from settings.rng_seed.
InnerResult evaluate_F_lambda(const ProblemInstance& instance, double t, double lambda,
                              const SolverSettings& settings);

struct Bracket {
  double a = 0.0;
  double b = 0.0;
  double lambda = 0.0;  // lambda after any monotone doubling during init
  // Certified b-side evaluation (value <= -1/(4 lambda)): seeds the incumbent.
  InnerResult at_b;
};

// a = -(coherent bound + 1), which forces F(a) >= 1 without evaluation;
// b starts at 0 and doubles outward until F_lambda(b) < -1/(4 lambda).
// When the evaluated value is negative but inside the smoothing gap, lambda
// doubles instead (monotone, never reset). Throws InfeasibleError when no
// bracket exists within the expansion limits.
Bracket initial_bracket(const ProblemInstance& instance, const SolverSettings& settings,
                        Rng& rng, std::vector<TraceEntry>* trace = nullptr);

// Algorithm: bisection on t with adaptive lambda doubling; each midpoint
// evaluates F_lambda via the smoothed inner problem. Reported omega comes
// from the last certified (value <= 0) evaluation, so the achieved weighted
// powers are >= -t_root and constraint violations obey the delta contract.
SolveReport solve(const ProblemInstance& instance, const SolverSettings& settings);

}  // namespace risbeam
