#pragma once

#include <cstddef>
#include <vector>

#include "mrsched/discretization.hpp"
#include "mrsched/model.hpp"

namespace mrsched {

struct OracleLimits {
  std::size_t max_jobs = 3;
  std::size_t max_tasks = 6;
  std::size_t max_speeds = 4;
};

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  Schedule schedule;
  std::size_t speed_vectors = 0; // energy-feasible speed assignments tried
  std::size_t timings = 0;       // processor sequences evaluated
};

// Exhaustive search over one speed per positive-volume task drawn from
// `speeds` and all per-processor task sequences, each timed semi-actively
// (every task starts as early as its processor, release and Map siblings
// allow). Returns the best energy-feasible schedule. Throws ParameterError
// when the instance or the speed list exceeds `limits`.
OracleResult brute_force_oracle(const Instance &inst,
                                const std::vector<double> &speeds,
                                const OracleLimits &limits = {});

// Up to `count` consecutive grid speeds around the common speed
// (E / sum v)^(1/(beta-1)) that spends the whole budget.
std::vector<double> oracle_speed_window(const Instance &inst,
                                        const SpeedGrid &grid,
                                        std::size_t count = 4);

} // namespace mrsched
