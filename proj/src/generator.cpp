#include "mrsched/generator.hpp"

#include <numeric>
#include <random>
#include <vector>

namespace mrsched {

const char *const kGeneratorName =
    "mt19937_64, u = (x >> 11) * 2^-53, seed = config seed + instance index";

namespace {

class Stream {
public:
  explicit Stream(std::uint64_t seed) : rng_(seed) {}

  // uniform in [0, 1)
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t index(std::size_t k) {
    return std::min(static_cast<std::size_t>(unit() * static_cast<double>(k)),
                    k - 1);
  }

private:
  std::mt19937_64 rng_;
};

} // namespace

void check_config(const GenConfig &cfg) {
  if (cfg.m < 1 || cfg.n < 1)
    throw ParameterError("need m >= 1 and n >= 1");
  if (cfg.maps_per_job < 1 || cfg.reduces_per_job < 1)
    throw ParameterError("every job needs a Map and a Reduce task");
  if (cfg.maps_per_job + cfg.reduces_per_job > cfg.m)
    throw ParameterError("maps_per_job + reduces_per_job exceeds m");
  if (!(cfg.map_work_lo >= 0.0 && cfg.map_work_lo <= cfg.map_work_hi) ||
      !(cfg.reduce_work_lo >= 0.0 && cfg.reduce_work_lo <= cfg.reduce_work_hi) ||
      !(cfg.weight_lo > 0.0 && cfg.weight_lo <= cfg.weight_hi) ||
      !(cfg.reduce_inflation >= 0.0))
    throw ParameterError("invalid work or weight range");
  if (!(cfg.energy_budget > 0.0) || !(cfg.beta > 1.0))
    throw ParameterError("need E > 0 and beta > 1");
}

Instance generate_instance(const GenConfig &cfg, std::uint64_t index) {
  check_config(cfg);
  Stream rs(cfg.seed + index);
  Instance inst;
  inst.beta = cfg.beta;
  inst.energy_budget = cfg.energy_budget;
  inst.num_processors = cfg.m;

  std::vector<int> procs(static_cast<std::size_t>(cfg.m));
  for (int j = 1; j <= cfg.n; ++j) {
    Job job;
    job.id = j;
    std::iota(procs.begin(), procs.end(), 1);
    const int need = cfg.maps_per_job + cfg.reduces_per_job;
    for (int k = 0; k < need; ++k) {
      std::size_t pick = k + rs.index(procs.size() - k);
      std::swap(procs[k], procs[pick]);
    }
    double map_total = 0.0;
    for (int k = 0; k < cfg.maps_per_job; ++k) {
      double v = rs.uniform(cfg.map_work_lo, cfg.map_work_hi);
      map_total += v;
      job.tasks.push_back({procs[k], TaskKind::Map, v});
    }
    const double mean_map = map_total / cfg.maps_per_job;
    for (int k = 0; k < cfg.reduces_per_job; ++k) {
      double v = rs.uniform(cfg.reduce_work_lo, cfg.reduce_work_hi) +
                 cfg.reduce_inflation * mean_map;
      job.tasks.push_back({procs[cfg.maps_per_job + k], TaskKind::Reduce, v});
    }
    job.weight = rs.uniform(cfg.weight_lo, cfg.weight_hi);
    inst.jobs.push_back(std::move(job));
  }

  if (cfg.releases == ReleaseProtocol::Intervals) {
    std::size_t next = 0;
    for (int t = 0; next < inst.jobs.size(); ++t) {
      if (rs.unit() < 0.5)
        // 1 - u lies in (0, 1], so the release lies in (t, t+1]
        inst.jobs[next++].release = t + (1.0 - rs.unit());
    }
  }
  return inst;
}

} // namespace mrsched
