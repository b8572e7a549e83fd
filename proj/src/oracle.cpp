#include "mrsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mrsched {

namespace {

struct Search {
  const Instance &inst;
  const TaskTable table;
  std::vector<std::size_t> active;             // positive-volume flat tasks
  std::vector<std::vector<std::size_t>> seqs;  // per processor
  std::vector<double> p;                       // per flat task
  OracleResult best;

  explicit Search(const Instance &i) : inst(i), table(i) {}

  // Semi-active timing of the current sequences; false on a cyclic order.
  bool time(std::vector<double> &start, std::vector<double> &finish) {
    const std::size_t n = table.size();
    start.assign(n, 0.0);
    finish.assign(n, 0.0);
    std::vector<std::size_t> head(seqs.size(), 0);
    std::vector<bool> done(n, false);
    std::vector<double> free_at(seqs.size(), 0.0);
    std::size_t left = active.size();
    auto maps_ready = [&](std::size_t f, double &ready) {
      for (std::size_t g : table.tasks_of_job(table.ref(f).job)) {
        const Task &t = table.task(g);
        if (t.kind != TaskKind::Map || !(t.volume > 0.0))
          continue;
        if (!done[g])
          return false;
        ready = std::max(ready, finish[g]);
      }
      return true;
    };
    while (left > 0) {
      bool progress = false;
      for (std::size_t i = 0; i < seqs.size(); ++i) {
        while (head[i] < seqs[i].size()) {
          std::size_t f = seqs[i][head[i]];
          double ready = table.job_of(f).release;
          if (table.task(f).kind == TaskKind::Reduce && !maps_ready(f, ready))
            break;
          start[f] = std::max(ready, free_at[i]);
          finish[f] = start[f] + p[f];
          free_at[i] = finish[f];
          done[f] = true;
          ++head[i];
          --left;
          progress = true;
        }
      }
      if (!progress)
        return false;
    }
    for (std::size_t f = 0; f < n; ++f) {
      if (table.task(f).volume > 0.0)
        continue;
      double ready = table.job_of(f).release;
      if (table.task(f).kind == TaskKind::Reduce)
        maps_ready(f, ready);
      start[f] = finish[f] = ready;
    }
    return true;
  }

  void evaluate() {
    std::vector<double> start, finish;
    ++best.timings;
    if (!time(start, finish))
      return;
    double obj = 0.0;
    std::vector<double> cj(inst.jobs.size(), 0.0);
    for (std::size_t f = 0; f < table.size(); ++f)
      if (table.task(f).kind == TaskKind::Reduce)
        cj[table.ref(f).job] = std::max(cj[table.ref(f).job], finish[f]);
    for (std::size_t j = 0; j < inst.jobs.size(); ++j)
      obj += inst.jobs[j].weight * cj[j];
    if (best.feasible && !(obj < best.objective))
      return;
    best.feasible = true;
    best.objective = obj;
    best.schedule.entries.clear();
    for (std::size_t f = 0; f < table.size(); ++f)
      best.schedule.entries.push_back(
          make_entry(inst, table.ref(f), start[f], finish[f] - start[f]));
  }

  void permute(std::size_t proc) {
    if (proc == seqs.size()) {
      evaluate();
      return;
    }
    std::vector<std::size_t> &s = seqs[proc];
    std::sort(s.begin(), s.end());
    do {
      permute(proc + 1);
    } while (std::next_permutation(s.begin(), s.end()));
  }
};

} // namespace

OracleResult brute_force_oracle(const Instance &inst,
                                const std::vector<double> &speeds,
                                const OracleLimits &limits) {
  Search search(inst);
  const TaskTable &table = search.table;
  if (inst.jobs.size() > limits.max_jobs || table.size() > limits.max_tasks)
    throw ParameterError("instance too large for the brute-force oracle");
  if (speeds.empty() || speeds.size() > limits.max_speeds)
    throw ParameterError("oracle speed list must have 1.." +
                         std::to_string(limits.max_speeds) + " entries");
  for (double s : speeds)
    if (!(s > 0.0))
      throw ParameterError("oracle speeds must be positive");

  search.seqs.resize(static_cast<std::size_t>(inst.num_processors));
  for (std::size_t f = 0; f < table.size(); ++f) {
    if (!(table.task(f).volume > 0.0))
      continue;
    search.active.push_back(f);
    search.seqs[static_cast<std::size_t>(table.task(f).processor - 1)].push_back(f);
  }
  search.p.assign(table.size(), 0.0);

  const std::size_t k = search.active.size();
  std::vector<std::size_t> choice(k, 0);
  const double budget = inst.energy_budget * (1.0 + 1e-12);
  while (true) {
    double used = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const double v = table.task(search.active[a]).volume;
      const double s = speeds[choice[a]];
      search.p[search.active[a]] = v / s;
      used += v * std::pow(s, inst.beta - 1.0);
    }
    if (used <= budget) {
      ++search.best.speed_vectors;
      search.permute(0);
    }
    std::size_t a = 0;
    while (a < k && ++choice[a] == speeds.size())
      choice[a++] = 0;
    if (a == k)
      break;
  }
  return search.best;
}

std::vector<double> oracle_speed_window(const Instance &inst,
                                        const SpeedGrid &grid,
                                        std::size_t count) {
  double total = 0.0;
  for (const Job &j : inst.jobs)
    for (const Task &t : j.tasks)
      total += t.volume;
  if (!(total > 0.0) || grid.speeds.empty() || count == 0)
    throw ParameterError("speed window needs work and a nonempty grid");
  const double s = std::pow(inst.energy_budget / total, 1.0 / (inst.beta - 1.0));
  auto it = std::upper_bound(grid.speeds.begin(), grid.speeds.end(), s);
  std::ptrdiff_t at = std::max<std::ptrdiff_t>(it - grid.speeds.begin() - 1, 0);
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(grid.speeds.size());
  const std::ptrdiff_t c = std::min<std::ptrdiff_t>(count, size);
  std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(at - c / 2, 0, size - c);
  return {grid.speeds.begin() + lo, grid.speeds.begin() + lo + c};
}

} // namespace mrsched
