// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "risbeam/solver.hpp"

namespace risbeam {

struct QuantizedSearchSettings {
  int bits = 6;  // phase levels = 2^bits
  int max_sweeps = 50;
  std::uint64_t rng_seed = 0;
  void validate() const;
};

// Instance with the suppression constraints removed (Q = 0).
ProblemInstance without_constraints(const ProblemInstance& instance);

// Max-min synthesis with no suppression constraints; the main-lobe "Peak"
// reference. Same contract as solve(); requires Q = 0.
SolveReport solve_unconstrained(const ProblemInstance& instance,
                                const SolverSettings& settings);

// Quantized random coordinate descent with a greedy per-coordinate search:
// phases on the 2^bits grid, coordinates visited in seeded random order, each
// set to the grid value maximizing the weighted min-user power among feasible
// candidates (any g_q > sigma_q rejects); when no candidate is feasible, the
// one minimizing the maximum violation wins. Stops after max_sweeps or a full
// sweep with no change. Always returns its best iterate.
SolveReport solve_quantrand(const ProblemInstance& instance,
                            const QuantizedSearchSettings& settings);

struct OracleResult {
  PhaseConfig best_omega;
  double best_value = 0.0;  // weighted min-user power of the returned config
  bool feasible = false;    // false: instance infeasible on the whole grid
};

// Enumerates all (2^bits)^N grid configurations and returns the feasible one
// maximizing the weighted min-user power (first in enumeration order on
// ties). Requires N*bits <= 24.
OracleResult exhaustive_oracle(const ProblemInstance& instance, int bits);

}  // namespace risbeam
