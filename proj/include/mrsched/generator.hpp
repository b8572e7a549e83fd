#pragma once

#include <cstdint>
#include <string>

#include "mrsched/model.hpp"

namespace mrsched {

enum class ReleaseProtocol {
  Intervals, // scan (t, t+1], accept each with probability 1/2
  Zero,
};

struct GenConfig {
  int m = 10;
  int n = 4;
  int maps_per_job = 3;
  int reduces_per_job = 2;
  double map_work_lo = 1.0, map_work_hi = 10.0;
  double reduce_work_lo = 1.0, reduce_work_hi = 10.0;
  // Reduce volume = U[lo,hi] + inflation * (mean Map volume of the job)
  double reduce_inflation = 3.0;
  double weight_lo = 1.0, weight_hi = 10.0;
  ReleaseProtocol releases = ReleaseProtocol::Intervals;
  double energy_budget = 1000.0;
  double beta = 2.0;
  std::uint64_t seed = 1;
};

// Identity of the random stream, for result metadata.
extern const char *const kGeneratorName;

void check_config(const GenConfig &cfg);

// Deterministic in (cfg, index); the stream is seeded with cfg.seed + index.
Instance generate_instance(const GenConfig &cfg, std::uint64_t index = 0);

} // namespace mrsched
