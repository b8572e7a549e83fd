#include "mrsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace mrsched {

const char *to_string(TaskKind kind) {
  return kind == TaskKind::Map ? "map" : "reduce";
}

TaskKind task_kind_from_string(const std::string &text) {
  if (text == "map" || text == "Map" || text == "MAP")
    return TaskKind::Map;
  if (text == "reduce" || text == "Reduce" || text == "REDUCE")
    return TaskKind::Reduce;
  throw ParameterError("unknown task kind '" + text + "'");
}

TaskTable::TaskTable(const Instance &inst) : inst_(&inst) {
  offsets_.reserve(inst.jobs.size());
  by_job_.resize(inst.jobs.size());
  for (std::size_t j = 0; j < inst.jobs.size(); ++j) {
    offsets_.push_back(refs_.size());
    for (std::size_t k = 0; k < inst.jobs[j].tasks.size(); ++k) {
      by_job_[j].push_back(refs_.size());
      refs_.push_back({j, k});
    }
  }
}

std::size_t TaskTable::flat(const TaskRef &ref) const {
  return flat(ref.job, ref.task);
}

std::size_t TaskTable::flat(std::size_t job, std::size_t task) const {
  if (job >= offsets_.size() || task >= inst_->jobs[job].tasks.size())
    throw StructuralError("task reference out of range");
  return offsets_[job] + task;
}

const Task &TaskTable::task(std::size_t flat) const {
  const TaskRef &r = refs_.at(flat);
  return inst_->jobs[r.job].tasks[r.task];
}

const Job &TaskTable::job_of(std::size_t flat) const {
  return inst_->jobs[refs_.at(flat).job];
}

namespace {

std::string job_label(const Job &job) {
  return "job " + std::to_string(job.id);
}

} // namespace

std::vector<Violation> validate_instance(const Instance &inst,
                                         const InstanceCheckOptions &opts) {
  std::vector<Violation> out;
  auto add = [&](std::string rule, std::string detail) {
    out.push_back({std::move(rule), std::move(detail)});
  };

  if (!(inst.beta > 1.0) || !std::isfinite(inst.beta))
    add("beta", "beta must be finite and > 1");
  if (!(inst.energy_budget > 0.0))
    add("energy budget", "energy_budget must be > 0");
  if (inst.num_processors < 1)
    add("num_processors", "num_processors must be >= 1");
  if (inst.jobs.empty())
    add("jobs", "instance has no jobs");

  std::set<int> ids;
  for (const Job &job : inst.jobs) {
    if (!ids.insert(job.id).second)
      add("duplicate job id", job_label(job) + " appears more than once");
    if (!(job.weight > 0.0) || !std::isfinite(job.weight))
      add("weight", job_label(job) + " weight must be finite and > 0");
    if (!(job.release >= 0.0) || !std::isfinite(job.release))
      add("release", job_label(job) + " release must be finite and >= 0");

    bool has_map = false, has_reduce = false;
    std::map<int, int> per_proc;
    for (const Task &t : job.tasks) {
      (t.kind == TaskKind::Map ? has_map : has_reduce) = true;
      if (t.processor < 1 || t.processor > inst.num_processors)
        add("processor index", job_label(job) + " has a task on processor " +
                                   std::to_string(t.processor));
      if (!(t.volume >= 0.0) || !std::isfinite(t.volume))
        add("volume", job_label(job) + " has a task with invalid volume");
      ++per_proc[t.processor];
    }
    if (!has_map)
      add("job lacks Map task", job_label(job));
    if (!has_reduce)
      add("job lacks Reduce task", job_label(job));
    if (opts.one_task_per_processor) {
      for (auto [proc, count] : per_proc)
        if (count > 1)
          add("multiple tasks per processor",
              job_label(job) + " has " + std::to_string(count) +
                  " tasks on processor " + std::to_string(proc));
    }
  }
  return out;
}

InstanceStats instance_stats(const Instance &inst) {
  InstanceStats s;
  s.w_min = std::numeric_limits<double>::infinity();
  s.v_min = std::numeric_limits<double>::infinity();
  for (const Job &job : inst.jobs) {
    s.w_min = std::min(s.w_min, job.weight);
    s.w_max = std::max(s.w_max, job.weight);
    s.r_max = std::max(s.r_max, job.release);
    for (const Task &t : job.tasks) {
      ++s.num_tasks;
      s.v_max = std::max(s.v_max, t.volume);
      if (t.volume > 0.0) {
        s.v_min = std::min(s.v_min, t.volume);
        s.has_positive_volume = true;
      }
    }
  }
  if (!s.has_positive_volume)
    s.v_min = 0.0;
  if (inst.jobs.empty())
    s.w_min = 0.0;
  return s;
}

bool has_precedence(const Instance &inst) {
  for (const Job &job : inst.jobs) {
    bool map = false, reduce = false;
    for (const Task &t : job.tasks) {
      if (t.volume > 0.0)
        (t.kind == TaskKind::Map ? map : reduce) = true;
    }
    if (map && reduce)
      return true;
  }
  return false;
}

bool all_releases_zero(const Instance &inst) {
  return std::all_of(inst.jobs.begin(), inst.jobs.end(),
                     [](const Job &j) { return j.release == 0.0; });
}

double task_energy(double volume, double duration, double beta) {
  if (volume == 0.0)
    return 0.0;
  if (!(duration > 0.0))
    throw ParameterError("positive-volume task with zero duration has "
                         "undefined energy");
  return std::pow(volume, beta) / std::pow(duration, beta - 1.0);
}

ScheduleEntry make_entry(const Instance &inst, const TaskRef &ref, double start,
                         double duration) {
  const Task &t = inst.jobs.at(ref.job).tasks.at(ref.task);
  ScheduleEntry e;
  e.task = ref;
  e.processor = t.processor;
  e.start = start;
  e.duration = t.volume > 0.0 ? duration : 0.0;
  e.speed = t.volume > 0.0 ? t.volume / duration : 0.0;
  return e;
}

namespace {

const Task &checked_task(const Instance &inst, const TaskRef &ref) {
  if (ref.job >= inst.jobs.size() ||
      ref.task >= inst.jobs[ref.job].tasks.size())
    throw StructuralError("schedule references an unknown task");
  return inst.jobs[ref.job].tasks[ref.task];
}

std::string entry_label(const Instance &inst, const ScheduleEntry &e) {
  const Task &t = inst.jobs[e.task.job].tasks[e.task.task];
  std::ostringstream os;
  os << "job " << inst.jobs[e.task.job].id << ' ' << to_string(t.kind)
     << " on processor " << t.processor;
  return os.str();
}

} // namespace

std::vector<Violation> validate_schedule(const Instance &inst,
                                         const Schedule &sched,
                                         std::optional<double> energy_budget) {
  std::vector<Violation> out;
  auto add = [&](std::string rule, std::string detail) {
    out.push_back({std::move(rule), std::move(detail)});
  };

  TaskTable table(inst);
  std::vector<int> seen(table.size(), 0);
  std::vector<const ScheduleEntry *> by_task(table.size(), nullptr);

  for (const ScheduleEntry &e : sched.entries) {
    const Task &t = checked_task(inst, e.task);
    std::size_t f = table.flat(e.task);
    if (++seen[f] == 1)
      by_task[f] = &e;
    if (e.processor != t.processor)
      add("processor", entry_label(inst, e) + " placed on processor " +
                           std::to_string(e.processor));
    if (!std::isfinite(e.start) || !std::isfinite(e.duration))
      add("duration", entry_label(inst, e) + " has non-finite timing");
    if (t.volume > 0.0) {
      if (!(e.duration > 0.0))
        add("duration", entry_label(inst, e) + " has nonpositive duration");
      else if (std::abs(e.speed * e.duration - t.volume) >
               1e-9 * std::max(1.0, t.volume))
        add("speed", entry_label(inst, e) + " speed inconsistent with volume");
    } else if (e.duration != 0.0) {
      add("duration", entry_label(inst, e) + " zero-volume task has duration");
    }
    const Job &job = inst.jobs[e.task.job];
    if (e.start < job.release - kTimeTolerance)
      add("release", entry_label(inst, e) + " starts before its release");
  }

  for (std::size_t f = 0; f < table.size(); ++f) {
    if (seen[f] == 0)
      add("missing task", "task " + std::to_string(f) + " is not scheduled");
    else if (seen[f] > 1)
      add("duplicate task", entry_label(inst, *by_task[f]) +
                                " is scheduled more than once");
  }

  // Per-processor overlap; zero-duration entries use no processor time.
  std::map<int, std::vector<const ScheduleEntry *>> per_proc;
  for (const ScheduleEntry &e : sched.entries)
    if (e.duration > 0.0)
      per_proc[e.processor].push_back(&e);
  for (auto &[proc, list] : per_proc) {
    std::sort(list.begin(), list.end(),
              [](const ScheduleEntry *a, const ScheduleEntry *b) {
                return a->start < b->start;
              });
    for (std::size_t k = 1; k < list.size(); ++k) {
      if (list[k]->start < list[k - 1]->completion() - kTimeTolerance)
        add("overlap", entry_label(inst, *list[k - 1]) + " and " +
                           entry_label(inst, *list[k]) + " overlap");
    }
  }

  // Map -> Reduce precedence within each job.
  for (std::size_t j = 0; j < inst.jobs.size(); ++j) {
    double last_map = -std::numeric_limits<double>::infinity();
    for (std::size_t f : table.tasks_of_job(j))
      if (by_task[f] && table.task(f).kind == TaskKind::Map)
        last_map = std::max(last_map, by_task[f]->completion());
    for (std::size_t f : table.tasks_of_job(j))
      if (by_task[f] && table.task(f).kind == TaskKind::Reduce &&
          by_task[f]->start < last_map - kTimeTolerance)
        add("precedence", entry_label(inst, *by_task[f]) +
                              " starts before a sibling Map completes");
  }

  double budget = energy_budget.value_or(inst.energy_budget);
  double used = 0.0;
  bool energy_defined = true;
  for (const ScheduleEntry &e : sched.entries) {
    const Task &t = inst.jobs[e.task.job].tasks[e.task.task];
    if (t.volume > 0.0 && !(e.duration > 0.0)) {
      energy_defined = false;
      continue;
    }
    used += task_energy(t.volume, e.duration, inst.beta);
  }
  if (energy_defined && used > budget + 1e-9 * std::max(1.0, budget)) {
    std::ostringstream os;
    os << "energy " << used << " exceeds budget " << budget;
    add("energy budget", os.str());
  }
  return out;
}

std::vector<double> job_completions(const Instance &inst,
                                    const Schedule &sched) {
  std::vector<double> c(inst.jobs.size(), 0.0);
  for (const ScheduleEntry &e : sched.entries) {
    const Task &t = checked_task(inst, e.task);
    if (t.kind == TaskKind::Reduce)
      c[e.task.job] = std::max(c[e.task.job], e.completion());
  }
  return c;
}

double objective(const Instance &inst, const Schedule &sched) {
  std::vector<double> c = job_completions(inst, sched);
  double total = 0.0;
  for (std::size_t j = 0; j < inst.jobs.size(); ++j)
    total += inst.jobs[j].weight * c[j];
  return total;
}

double energy(const Instance &inst, const Schedule &sched) {
  double total = 0.0;
  for (const ScheduleEntry &e : sched.entries) {
    const Task &t = checked_task(inst, e.task);
    total += task_energy(t.volume, e.duration, inst.beta);
  }
  return total;
}

double makespan(const Schedule &sched) {
  double m = 0.0;
  for (const ScheduleEntry &e : sched.entries)
    m = std::max(m, e.completion());
  return m;
}

} // namespace mrsched
