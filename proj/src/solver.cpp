// SPDX-License-Identifier: Apache-2.0
#include "risbeam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "risbeam/errors.hpp"
#include "risbeam/smoothing.hpp"

namespace risbeam {

namespace {
constexpr std::complex<double> kJ{0.0, 1.0};
constexpr int kBracketExpansionLimit = 60;
}  // namespace

void ProblemInstance::validate() const {
  if (user_forms.empty()) throw ConfigError("instance: need at least one user form");
  const Eigen::Index n = user_forms.front().factor.size();
  if (n < 1) throw ConfigError("instance: empty channel vectors");
  for (const auto& f : user_forms) {
    if (f.factor.size() != n) throw ConfigError("instance: inconsistent form dimensions");
  }
  for (const auto& f : constraint_forms) {
    if (f.factor.size() != n) throw ConfigError("instance: inconsistent form dimensions");
  }
  if (thresholds.size() != num_constraints()) {
    throw ConfigError("instance: thresholds must match constraint forms");
  }
  for (Eigen::Index q = 0; q < thresholds.size(); ++q) {
    if (!(thresholds[q] > 0.0)) throw ConfigError("instance: thresholds must be positive");
  }
}

void SolverSettings::validate() const {
  if (!(lambda0 > 0.0)) throw ConfigError("settings: lambda0 must be positive");
  if (epsilon < 0.0 || delta < 0.0) throw ConfigError("settings: negative tolerance");
  if (max_inner_iters < 1) throw ConfigError("settings: max_inner_iters must be >= 1");
  if (restarts < 1) throw ConfigError("settings: restarts must be >= 1");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kBracketConverged: return "bracket-converged";
    case Termination::kDeltaSatisfied: return "delta-satisfied";
    case Termination::kBracketFailure: return "bracket-failure";
    case Termination::kSweepConverged: return "sweep-converged";
    case Termination::kSweepLimit: return "sweep-limit";
  }
  return "unknown";
}

namespace {

// Smoothed-objective evaluation context. Responses c_i = factor_i^T exp(j w)
// are computed once per point and reused by the gradient.
struct SmoothedObjective {
  const ProblemInstance& inst;
  double t;
  double lambda;

  Eigen::Index dim() const { return inst.num_users() + inst.num_constraints(); }

  Eigen::VectorXd entries(const Eigen::VectorXcd& x,
                          std::vector<std::complex<double>>* responses) const {
    const Eigen::Index k_count = inst.num_users();
    const Eigen::Index q_count = inst.num_constraints();
    Eigen::VectorXd y(k_count + q_count);
    if (responses) responses->resize(static_cast<std::size_t>(k_count + q_count));
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const std::complex<double> c = inst.user_forms[k].response(x);
      if (responses) (*responses)[k] = c;
      y[k] = -inst.user_forms[k].scale * std::norm(c) - t;
    }
    for (Eigen::Index q = 0; q < q_count; ++q) {
      const std::complex<double> c = inst.constraint_forms[q].response(x);
      if (responses) (*responses)[k_count + q] = c;
      y[k_count + q] = inst.constraint_forms[q].scale * std::norm(c) - inst.thresholds[q];
    }
    return y;
  }

  double value(const Eigen::VectorXd& omega) const {
    const Eigen::VectorXcd x = unit_phases(omega);
    return smooth_max(entries(x, nullptr), lambda).value;
  }

  double value_and_gradient(const Eigen::VectorXd& omega, Eigen::VectorXd& grad) const {
    const Eigen::VectorXcd x = unit_phases(omega);
    std::vector<std::complex<double>> c;
    const Eigen::VectorXd y = entries(x, &c);
    const SmoothMaxEval ev = smooth_max(y, lambda);

    const Eigen::Index k_count = inst.num_users();
    const Eigen::Index n = omega.size();
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < ev.weights.size(); ++i) {
      const double p = ev.weights[i];
      if (p == 0.0) continue;  // projection is sparse; skip inactive entries
      const bool user = i < k_count;
      const QuadraticForm& form =
          user ? inst.user_forms[i] : inst.constraint_forms[i - k_count];
      // d|c|^2/dOmega_n = -2 Im(conj(c) v_n x_n); user entries carry -scale.
      const std::complex<double> beta =
          (user ? 2.0 : -2.0) * p * form.scale * std::conj(c[static_cast<std::size_t>(i)]);
      z += beta * form.factor;
    }
    grad.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) grad[j] = (z[j] * x[j]).imag();
    return ev.value;
  }

  // Initial line-search step: inverse of the coherent curvature estimate.
  double initial_step() const {
    double total = 0.0;
    for (const auto& f : inst.user_forms) total += f.coherent_bound();
    for (const auto& f : inst.constraint_forms) total += f.coherent_bound();
    total = std::max(total, 1e-300);
    return 1.0 / (2.0 * lambda * total);
  }
};

InnerResult accelerated_descent(const SmoothedObjective& obj, Eigen::VectorXd omega,
                                const SolverSettings& settings) {
  const double tol = settings.inner_grad_tolerance;
  InnerResult best;
  best.value = std::numeric_limits<double>::infinity();

  Eigen::VectorXd x = std::move(omega);
  Eigen::VectorXd x_prev = x;
  double fx = obj.value(x);
  best.value = fx;
  best.omega = x;

  double step = obj.initial_step();
  int momentum = 0;
  Eigen::VectorXd grad, extrap, candidate;

  int it = 0;
  for (; it < settings.max_inner_iters; ++it) {
    const double mom = static_cast<double>(momentum) / (momentum + 3.0);
    extrap = x + mom * (x - x_prev);
    const double f_ex = obj.value_and_gradient(extrap, grad);
    const double gn = grad.norm();
    if (f_ex < best.value) {
      best.value = f_ex;
      best.omega = extrap;
    }
    best.grad_norm = gn;
    if (gn < tol) {
      best.converged = true;
      break;
    }

    // Backtracking with expansion: grow the step while the sufficient-decrease
    // test keeps passing, halve while it fails.
    const double gsq = gn * gn;
    candidate = extrap - step * grad;
    double f_new = obj.value(candidate);
    if (f_new <= f_ex - 0.5 * step * gsq) {
      for (int grow = 0; grow < 60; ++grow) {
        const double trial_step = step * 2.0;
        Eigen::VectorXd trial = extrap - trial_step * grad;
        const double f_trial = obj.value(trial);
        if (f_trial <= f_ex - 0.5 * trial_step * gsq && f_trial <= f_new) {
          step = trial_step;
          candidate.swap(trial);
          f_new = f_trial;
        } else {
          break;
        }
      }
    } else {
      bool ok = false;
      for (int shrink = 0; shrink < 80; ++shrink) {
        step *= 0.5;
        candidate = extrap - step * grad;
        f_new = obj.value(candidate);
        if (f_new <= f_ex - 0.5 * step * gsq) {
          ok = true;
          break;
        }
      }
      if (!ok) break;  // step underflow: gradient is numerically unreliable
    }

    if (f_new < best.value) {
      best.value = f_new;
      best.omega = candidate;
    }
    if (f_new > fx) {
      momentum = 0;  // function-value adaptive restart
    } else {
      ++momentum;
    }
    x_prev = x;
    x.swap(candidate);
    fx = f_new;
  }
  best.iterations = it;
  return best;
}

double smoothing_gap(double lambda) { return 1.0 / (4.0 * lambda); }

// Heuristic noise floor for the sign-test flag recorded in the trace.
double inner_noise_floor(const SolverSettings& settings) {
  return std::max(10.0 * settings.inner_grad_tolerance, 1e-12);
}

double resolve_delta(const ProblemInstance& instance, const SolverSettings& settings,
                     double coherent_u) {
  if (settings.delta > 0.0) return settings.delta;
  if (instance.num_constraints() > 0) return 1e-3 * instance.thresholds.minCoeff();
  return 1e-3 * std::max(coherent_u, 1e-12);
}

double coherent_user_bound(const ProblemInstance& instance) {
  double u = 0.0;
  for (const auto& f : instance.user_forms) u = std::max(u, f.coherent_bound());
  return u;
}

}  // namespace

Eigen::VectorXd objective_vector(const ProblemInstance& instance,
                                 const Eigen::VectorXd& omega, double t) {
  SmoothedObjective obj{instance, t, 1.0};
  return obj.entries(unit_phases(omega), nullptr);
}

Eigen::VectorXd objective_gradient(const ProblemInstance& instance,
                                   const Eigen::VectorXd& omega, double t,
                                   const Eigen::VectorXd& weights) {
  (void)t;  // entries are affine in t; the gradient does not depend on it
  const Eigen::Index k_count = instance.num_users();
  const Eigen::Index n = omega.size();
  if (weights.size() != k_count + instance.num_constraints()) {
    throw ConfigError("objective_gradient: weights dimension mismatch");
  }
  const Eigen::VectorXcd x = unit_phases(omega);
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const bool user = i < k_count;
    const QuadraticForm& form =
        user ? instance.user_forms[i] : instance.constraint_forms[i - k_count];
    const std::complex<double> c = form.response(x);
    const std::complex<double> beta =
        (user ? 2.0 : -2.0) * weights[i] * form.scale * std::conj(c);
    z += beta * form.factor;
  }
  Eigen::VectorXd grad(n);
  for (Eigen::Index j = 0; j < n; ++j) grad[j] = (z[j] * x[j]).imag();
  return grad;
}

InnerResult evaluate_F_lambda(const ProblemInstance& instance, double t, double lambda,
                              const SolverSettings& settings, Rng& rng,
                              const Eigen::VectorXd* warm) {
  instance.validate();
  if (!(lambda > 0.0)) throw NumericError("evaluate_F_lambda: lambda must be positive");
  const SmoothedObjective obj{instance, t, lambda};
  const Eigen::Index n = instance.unit_count();

  InnerResult best;
  best.value = std::numeric_limits<double>::infinity();
  int total_iters = 0;
  auto consider = [&](Eigen::VectorXd init) {
    InnerResult r = accelerated_descent(obj, std::move(init), settings);
    total_iters += r.iterations;
    if (r.value < best.value) best = std::move(r);
  };

  if (warm != nullptr && warm->size() == n) consider(*warm);
  for (int s = 0; s < settings.restarts; ++s) {
    Eigen::VectorXd init(n);
    for (Eigen::Index j = 0; j < n; ++j) init[j] = rng.uniform_phase();
    consider(std::move(init));
  }
  best.iterations = total_iters;
  return best;
}

InnerResult evaluate_F_lambda(const ProblemInstance& instance, double t, double lambda,
                              const SolverSettings& settings) {
  Rng rng(settings.rng_seed);
  return evaluate_F_lambda(instance, t, lambda, settings, rng, nullptr);
}

Bracket initial_bracket(const ProblemInstance& instance, const SolverSettings& settings,
                        Rng& rng, std::vector<TraceEntry>* trace) {
  instance.validate();
  settings.validate();
  const double coherent_u = coherent_user_bound(instance);
  const double delta = resolve_delta(instance, settings, coherent_u);
  const double lambda_cap = std::max(settings.lambda0, 256.0 / (4.0 * delta));

  Bracket bracket;
  // Every f_k - a >= coherent_u - U_k + 1 >= 1, so F(a) >= 1 and
  // F_lambda(a) >= F(a) > 0 without evaluating.
  bracket.a = -(coherent_u + 1.0);
  bracket.b = 0.0;
  bracket.lambda = settings.lambda0;

  const Eigen::VectorXd* warm = nullptr;
  Eigen::VectorXd warm_store;
  int expansions = 0;
  while (true) {
    InnerResult res =
        evaluate_F_lambda(instance, bracket.b, bracket.lambda, settings, rng, warm);
    if (trace) {
      trace->push_back({bracket.b, res.value, bracket.lambda, res.grad_norm,
                        res.iterations,
                        std::abs(res.value) < inner_noise_floor(settings)});
    }
    if (settings.warm_start) {
      warm_store = res.omega;
      warm = &warm_store;
    }
    if (res.value < -smoothing_gap(bracket.lambda)) {
      bracket.at_b = std::move(res);
      return bracket;
    }
    if (res.value < 0.0 && bracket.lambda < lambda_cap) {
      // Negative but inside the smoothing gap: tighten lambda until the gap
      // halves the certified margin. Monotone doubling only, never reset.
      const double needed = 1.0 / (2.0 * std::abs(res.value));
      while (bracket.lambda < needed && bracket.lambda < lambda_cap) {
        bracket.lambda *= 2.0;
      }
      continue;
    }
    if (expansions >= kBracketExpansionLimit) {
      throw InfeasibleError(
          "initial_bracket: no phase configuration meets all suppression thresholds "
          "within tolerance (expansion limit reached)");
    }
    bracket.b = 2.0 * bracket.b - bracket.a;
    ++expansions;
  }
}

SolveReport solve(const ProblemInstance& instance, const SolverSettings& settings) {
  instance.validate();
  settings.validate();
  Rng rng(settings.rng_seed);

  SolveReport report;
  report.method = "bis";

  Bracket bracket = initial_bracket(instance, settings, rng, &report.bisection_trace);
  double a = bracket.a;
  double b = bracket.b;
  double lambda = bracket.lambda;

  const double coherent_u = coherent_user_bound(instance);
  const double epsilon =
      settings.epsilon > 0.0 ? settings.epsilon : 1e-4 * std::abs(b - a);
  const double delta = resolve_delta(instance, settings, coherent_u);
  report.epsilon_used = epsilon;
  report.delta_used = delta;

  // Incumbent: most recent certified evaluation (achieved value <= 0), whose
  // omega satisfies every entry of the objective vector pointwise.
  double t_inc = b;
  InnerResult inc = bracket.at_b;

  Eigen::VectorXd warm_store = inc.omega;
  const Eigen::VectorXd* warm = settings.warm_start ? &warm_store : nullptr;

  Termination termination = Termination::kBracketConverged;
  int reexpansions = 0;
  while (std::abs(a - b) > epsilon) {
    const double t = a + (b - a) / 2.0;
    InnerResult res = evaluate_F_lambda(instance, t, lambda, settings, rng, warm);
    report.bisection_trace.push_back({t, res.value, lambda, res.grad_norm,
                                      res.iterations,
                                      std::abs(res.value) < inner_noise_floor(settings)});
    if (settings.warm_start) warm_store = res.omega;

    if (res.value < -smoothing_gap(lambda)) {
      b = t;
      t_inc = t;
      inc = std::move(res);
    } else if (res.value > 0.0) {
      a = t;
    } else if (lambda > 1.0 / (4.0 * delta)) {
      t_inc = t;
      inc = std::move(res);
      termination = Termination::kDeltaSatisfied;
      break;
    } else {
      lambda *= 2.0;
      // Bracket re-check after doubling: the incumbent certificate
      // value <= -1/(4 lambda_old) implies F_lambda_new(b) < -1/(4 lambda_new)
      // analytically, so an evaluation is only spent when that inequality
      // fails (inexact inner minimum). Re-expand b if the re-check fails too.
      if (!(inc.value <= -smoothing_gap(lambda) * 2.0)) {
        InnerResult recheck = evaluate_F_lambda(instance, b, lambda, settings, rng, warm);
        report.bisection_trace.push_back(
            {b, recheck.value, lambda, recheck.grad_norm, recheck.iterations,
             std::abs(recheck.value) < inner_noise_floor(settings)});
        if (recheck.value < 0.0) {
          t_inc = b;
          inc = std::move(recheck);
        } else if (reexpansions < 8) {
          b = 2.0 * b - a;
          ++reexpansions;
        }
      }
    }
  }

  report.termination = termination;
  report.t_root = t_inc;
  report.omega_star.omega = inc.omega;
  report.omega_star = report.omega_star.canonical();

  const Eigen::VectorXcd x = report.omega_star.unit_vector();
  report.achieved_powers.resize(instance.num_users());
  for (Eigen::Index k = 0; k < instance.num_users(); ++k) {
    report.achieved_powers[k] = instance.user_forms[k].power(x);
  }
  report.constraint_values.resize(instance.num_constraints());
  report.max_violation = 0.0;
  for (Eigen::Index q = 0; q < instance.num_constraints(); ++q) {
    report.constraint_values[q] = instance.constraint_forms[q].power(x);
    report.max_violation =
        std::max(report.max_violation, report.constraint_values[q] - instance.thresholds[q]);
  }
  return report;
}

}  // namespace risbeam
