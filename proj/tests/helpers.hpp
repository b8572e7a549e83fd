#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mrsched/model.hpp"

namespace testing {

using namespace mrsched;

inline Job make_job(int id, double weight, double release, std::vector<Task> tasks) {
  Job j;
  j.id = id;
  j.weight = weight;
  j.release = release;
  j.tasks = std::move(tasks);
  return j;
}

inline Task map_on(int proc, double v) { return {proc, TaskKind::Map, v}; }
inline Task reduce_on(int proc, double v) { return {proc, TaskKind::Reduce, v}; }

inline Instance make_instance(int m, double E, double beta, std::vector<Job> jobs) {
  Instance inst;
  inst.num_processors = m;
  inst.energy_budget = E;
  inst.beta = beta;
  inst.jobs = std::move(jobs);
  return inst;
}

// 1 job: Map v=1 on processor 1, Reduce v=1 on processor 2, w=1, r=0.
inline Instance unit_pair(double E = 2.0, double release = 0.0) {
  return make_instance(2, E, 2.0, {make_job(1, 1.0, release, {map_on(1, 1.0), reduce_on(2, 1.0)})});
}

inline bool has_rule(const std::vector<Violation> &v, const std::string &rule) {
  return std::any_of(v.begin(), v.end(), [&](const Violation &x) { return x.rule == rule; });
}

} // namespace testing
