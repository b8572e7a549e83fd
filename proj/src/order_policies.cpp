#include "mrsched/order_policies.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

namespace mrsched {

namespace {

template <class Key>
JobOrder sorted_by(const Instance &inst, Key key) {
  std::vector<std::size_t> idx(inst.jobs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    auto ka = key(inst.jobs[a]), kb = key(inst.jobs[b]);
    if (ka != kb)
      return ka < kb;
    return inst.jobs[a].id < inst.jobs[b].id;
  });
  JobOrder order;
  for (std::size_t j : idx)
    order.ids.push_back(inst.jobs[j].id);
  return order;
}

} // namespace

JobOrder fcfs_order(const Instance &inst) {
  return sorted_by(inst, [](const Job &j) { return j.release; });
}

JobOrder smith_order(const Instance &inst) {
  return sorted_by(inst, [](const Job &j) {
    double total = 0.0;
    for (const Task &t : j.tasks)
      total += t.volume;
    // negated ratio so that ascending sort gives descending ratio
    return total > 0.0 ? -j.weight / total
                       : -std::numeric_limits<double>::infinity();
  });
}

bool is_total_order(const Instance &inst, const JobOrder &order) {
  if (order.ids.size() != inst.jobs.size())
    return false;
  std::multiset<int> a(order.ids.begin(), order.ids.end()), b;
  for (const Job &j : inst.jobs)
    b.insert(j.id);
  return a == b && std::set<int>(a.begin(), a.end()).size() == a.size();
}

Instance gen_fcfs_gap_instance(int n, double eps) {
  if (n < 2 || !(eps > 0.0))
    throw ParameterError("gap instance needs n >= 2 and eps > 0");
  Instance inst;
  inst.beta = 2.0;
  inst.energy_budget = 1.0;
  inst.num_processors = n;
  for (int j = 1; j <= n; ++j) {
    Job job;
    job.id = j;
    job.release = (j - 1) * eps;
    for (int i = 1; i <= n; ++i)
      job.tasks.push_back(i == j ? Task{i, TaskKind::Map, 1.0}
                                 : Task{i, TaskKind::Reduce, eps});
    inst.jobs.push_back(std::move(job));
  }
  return inst;
}

Instance gen_sr_gap_instance(int n, double eps, std::optional<double> release) {
  if (n < 2 || !(eps > 0.0) || !(eps < 1.0))
    throw ParameterError("gap instance needs n >= 2 and eps in (0,1)");
  const double r = release ? *release : 1000.0 * n;
  if (!(r >= 0.0))
    throw ParameterError("release must be >= 0");
  Instance inst;
  inst.beta = 2.0;
  inst.energy_budget = 1.0;
  inst.num_processors = 2;
  for (int j = 1; j <= n; ++j) {
    Job job;
    job.id = j;
    job.release = j == n ? r : 0.0;
    job.tasks = {{1, TaskKind::Map, j == n ? 1.0 - eps : 1.0},
                 {2, TaskKind::Reduce, 0.0}};
    inst.jobs.push_back(std::move(job));
  }
  return inst;
}

Instance gen_chain_instance(int n, double energy_budget, double beta) {
  if (n < 1)
    throw ParameterError("chain instance needs n >= 1");
  Instance inst;
  inst.beta = beta;
  inst.energy_budget = energy_budget;
  inst.num_processors = 2;
  for (int j = 1; j <= n; ++j) {
    Job job;
    job.id = j;
    job.tasks = {{1, TaskKind::Map, 1.0}, {2, TaskKind::Reduce, 0.0}};
    inst.jobs.push_back(std::move(job));
  }
  return inst;
}

} // namespace mrsched
