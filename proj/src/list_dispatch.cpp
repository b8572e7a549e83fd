#include "mrsched/list_dispatch.hpp"

#include <algorithm>
#include <limits>

namespace mrsched {

Schedule list_dispatch(const Instance &inst,
                       const std::vector<std::vector<std::size_t>> &priority,
                       const std::vector<double> &availability,
                       const std::vector<double> &p) {
  TaskTable table(inst);
  const std::size_t n = table.size();
  const std::size_t m = priority.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (availability.size() != n || p.size() != n)
    throw ParameterError("list_dispatch needs one value per task");

  std::vector<double> start(n, inf), finish(n, inf);
  std::vector<bool> started(n, false), listed(n, false);
  for (const auto &list : priority)
    for (std::size_t f : list)
      listed[f] = true;
  // positive-volume Map tasks, per job storage index
  std::vector<std::vector<std::size_t>> maps(inst.jobs.size());
  for (std::size_t f = 0; f < n; ++f) {
    if (!(table.task(f).volume > 0.0))
      continue;
    if (!listed[f])
      throw ParameterError("positive-volume task missing from priority lists");
    if (table.task(f).kind == TaskKind::Map)
      maps[table.ref(f).job].push_back(f);
  }

  std::vector<double> busy_until(m, 0.0);
  std::size_t remaining = 0;
  for (const auto &list : priority)
    remaining += list.size();
  auto maps_done = [&](std::size_t f, double t) {
    for (std::size_t g : maps[table.ref(f).job])
      if (!(finish[g] <= t))
        return false;
    return true;
  };

  double now = 0.0;
  while (remaining > 0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (busy_until[i] > now)
        continue;
      for (std::size_t f : priority[i]) {
        if (started[f] || availability[f] > now)
          continue;
        if (table.task(f).kind == TaskKind::Reduce && !maps_done(f, now))
          continue;
        started[f] = true;
        start[f] = now;
        finish[f] = now + p[f];
        busy_until[i] = finish[f];
        --remaining;
        break;
      }
    }
    if (remaining == 0)
      break;
    double next = inf;
    for (std::size_t i = 0; i < m; ++i)
      if (busy_until[i] > now)
        next = std::min(next, busy_until[i]);
    for (const auto &list : priority)
      for (std::size_t f : list)
        if (!started[f] && availability[f] > now)
          next = std::min(next, availability[f]);
    if (next == inf)
      throw StructuralError("list scheduling stalled");
    now = next;
  }

  Schedule sched;
  for (std::size_t f = 0; f < n; ++f) {
    if (listed[f]) {
      sched.entries.push_back(make_entry(inst, table.ref(f), start[f], p[f]));
      continue;
    }
    double t0 = table.job_of(f).release;
    if (table.task(f).kind == TaskKind::Reduce)
      for (std::size_t g : maps[table.ref(f).job])
        t0 = std::max(t0, finish[g]);
    sched.entries.push_back(make_entry(inst, table.ref(f), t0, 0.0));
  }
  return sched;
}

} // namespace mrsched
