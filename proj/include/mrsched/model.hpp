#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrsched {

// Errors raised for bad parameters or malformed inputs. Validation problems
// that are part of normal operation are returned as Violation lists instead.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class StructuralError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CertificationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Absolute tolerance used when comparing times in schedules.
inline constexpr double kTimeTolerance = 1e-9;

enum class TaskKind { Map, Reduce };

const char *to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string &text);

struct Task {
  int processor = 1; // 1-based
  TaskKind kind = TaskKind::Map;
  double volume = 0.0;
};

struct Job {
  int id = 0;
  double weight = 1.0;
  double release = 0.0;
  std::vector<Task> tasks;
};

struct Instance {
  double beta = 2.0;
  double energy_budget = 1.0;
  int num_processors = 1;
  std::vector<Job> jobs;
};

// Position of a task inside an Instance: jobs[job].tasks[task].
struct TaskRef {
  std::size_t job = 0;
  std::size_t task = 0;

  friend bool operator==(const TaskRef &, const TaskRef &) = default;
};

// Flattened view of all tasks of an instance. Flat indices are stable for a
// given instance and follow job storage order, then task storage order.
class TaskTable {
public:
  explicit TaskTable(const Instance &inst);

  std::size_t size() const { return refs_.size(); }
  const TaskRef &ref(std::size_t flat) const { return refs_[flat]; }
  std::size_t flat(const TaskRef &ref) const;
  std::size_t flat(std::size_t job, std::size_t task) const;
  const Task &task(std::size_t flat) const;
  const Job &job_of(std::size_t flat) const;

  // Flat indices of the tasks belonging to job `job` (storage index).
  const std::vector<std::size_t> &tasks_of_job(std::size_t job) const {
    return by_job_[job];
  }

private:
  const Instance *inst_;
  std::vector<TaskRef> refs_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::size_t>> by_job_;
};

struct Violation {
  std::string rule;
  std::string detail;
};

struct InstanceCheckOptions {
  // When false, a job may own several tasks on one processor.
  bool one_task_per_processor = true;
};

std::vector<Violation> validate_instance(const Instance &inst,
                                         const InstanceCheckOptions &opts = {});

// Instance-wide quantities used by the discretization and the analysis.
struct InstanceStats {
  std::size_t num_tasks = 0;
  double w_min = 0.0;
  double w_max = 0.0;
  double r_max = 0.0;
  double v_min = 0.0; // smallest positive volume
  double v_max = 0.0;
  bool has_positive_volume = false;
};

InstanceStats instance_stats(const Instance &inst);

// True when some job has both a positive-volume Map and a positive-volume
// Reduce task, i.e. when Map-Reduce precedence actually constrains timing.
bool has_precedence(const Instance &inst);
bool all_releases_zero(const Instance &inst);

struct ScheduleEntry {
  TaskRef task;
  int processor = 1;
  double start = 0.0;
  double duration = 0.0;
  double speed = 0.0;

  double completion() const { return start + duration; }
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
};

// Energy of a single task of volume `volume` run for `duration` time units.
// Zero-volume tasks consume nothing; a positive volume with zero duration has
// undefined energy and throws ParameterError.
double task_energy(double volume, double duration, double beta);

std::vector<Violation>
validate_schedule(const Instance &inst, const Schedule &sched,
                  std::optional<double> energy_budget = std::nullopt);

// Per-job completion C_j (max over Reduce completions), in job storage order.
std::vector<double> job_completions(const Instance &inst, const Schedule &sched);
double objective(const Instance &inst, const Schedule &sched);
double energy(const Instance &inst, const Schedule &sched);
double makespan(const Schedule &sched);

// Builds a schedule entry for task `ref` started at `start` with the given
// duration; speed is derived from the volume.
ScheduleEntry make_entry(const Instance &inst, const TaskRef &ref, double start,
                         double duration);

} // namespace mrsched
