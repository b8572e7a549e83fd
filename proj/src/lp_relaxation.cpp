#include "mrsched/lp_relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mrsched {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::string task_tag(const Instance &inst, const TaskTable &table,
                     std::size_t f) {
  const TaskRef &r = table.ref(f);
  return "j" + std::to_string(inst.jobs[r.job].id) + "_k" +
         std::to_string(r.task);
}

// Jobs by ascending id, tasks by (processor, kind, storage index).
std::vector<std::size_t> ordered_tasks(const Instance &inst,
                                       const TaskTable &table) {
  std::vector<std::size_t> jobs(inst.jobs.size());
  std::iota(jobs.begin(), jobs.end(), 0);
  std::stable_sort(jobs.begin(), jobs.end(), [&](std::size_t a, std::size_t b) {
    return inst.jobs[a].id < inst.jobs[b].id;
  });
  std::vector<std::size_t> out;
  for (std::size_t j : jobs) {
    std::vector<std::size_t> ts = table.tasks_of_job(j);
    std::stable_sort(ts.begin(), ts.end(), [&](std::size_t a, std::size_t b) {
      const Task &ta = table.task(a), &tb = table.task(b);
      if (ta.processor != tb.processor)
        return ta.processor < tb.processor;
      return static_cast<int>(ta.kind) < static_cast<int>(tb.kind);
    });
    out.insert(out.end(), ts.begin(), ts.end());
  }
  return out;
}

} // namespace

std::size_t LpModel::count_rows(LpRowKind kind) const {
  return static_cast<std::size_t>(
      std::count(row_kind.begin(), row_kind.end(), kind));
}

LpModel build_lp(const Instance &inst, const SpeedGrid &speeds,
                 const TimeGrid &times) {
  if (speeds.speeds.empty())
    throw ParameterError("build_lp needs a nonempty speed grid");
  if (times.tau.size() < 2)
    throw ParameterError("build_lp needs a nonempty time grid");

  TaskTable table(inst);
  LpModel m;
  m.speeds = speeds.speeds;
  m.tau = times.tau;
  m.beta = inst.beta;
  m.energy_budget = inst.energy_budget;
  const std::size_t nint = times.num_intervals();
  const std::size_t nspeed = speeds.size();
  m.lengths.resize(nint);
  for (std::size_t t = 0; t < nint; ++t)
    m.lengths[t] = times.length(t);

  m.proc_time.assign(table.size(), std::vector<double>(nspeed, 0.0));
  for (std::size_t f = 0; f < table.size(); ++f) {
    double v = table.task(f).volume;
    if (v > 0.0)
      for (std::size_t s = 0; s < nspeed; ++s)
        m.proc_time[f][s] = v / m.speeds[s];
  }

  const std::vector<std::size_t> order = ordered_tasks(inst, table);
  LpProblem &lp = m.problem;
  constexpr double inf = std::numeric_limits<double>::infinity();

  // y columns; index[f][s][t] -> column or npos
  std::vector<std::vector<std::vector<std::size_t>>> index(table.size());
  for (std::size_t f : order) {
    const Task &task = table.task(f);
    if (!(task.volume > 0.0))
      continue;
    const double release = table.job_of(f).release;
    index[f].assign(nspeed, std::vector<std::size_t>(nint, npos));
    bool any_free = false;
    for (std::size_t s = 0; s < nspeed; ++s) {
      for (std::size_t t = 0; t < nint; ++t) {
        if (m.tau[t + 1] <= release)
          continue; // interval lies entirely before the release
        bool pinned = m.tau[t] < release;
        any_free = any_free || !pinned;
        std::size_t col = lp.add_col(0.0, pinned ? 0.0 : inf);
        m.y_vars.push_back({f, s, t, pinned});
        m.col_names.push_back("y_" + task_tag(inst, table, f) + "_s" +
                              std::to_string(s) + "_t" + std::to_string(t));
        index[f][s][t] = col;
      }
    }
    if (!any_free)
      m.infeasible_by_construction = true;
  }

  m.task_completion_col.assign(table.size(), npos);
  for (std::size_t f : order) {
    m.task_completion_col[f] = lp.add_col(0.0);
    m.col_names.push_back("C_" + task_tag(inst, table, f));
  }
  m.job_completion_col.assign(inst.jobs.size(), npos);
  {
    std::vector<std::size_t> jobs(inst.jobs.size());
    std::iota(jobs.begin(), jobs.end(), 0);
    std::stable_sort(jobs.begin(), jobs.end(),
                     [&](std::size_t a, std::size_t b) {
                       return inst.jobs[a].id < inst.jobs[b].id;
                     });
    for (std::size_t j : jobs) {
      m.job_completion_col[j] = lp.add_col(inst.jobs[j].weight);
      m.col_names.push_back("Cj_" + std::to_string(inst.jobs[j].id));
    }
  }

  auto add_row = [&](LpRowKind kind, RowSense sense, double rhs,
                     std::string name) {
    m.row_kind.push_back(kind);
    m.row_names.push_back(std::move(name));
    return lp.add_row(sense, rhs);
  };
  // fraction coefficient |I_t| / p_s
  auto frac = [&](std::size_t f, std::size_t s, std::size_t t) {
    return m.lengths[t] / m.proc_time[f][s];
  };

  // (1) every positive-volume task is fully executed
  for (std::size_t f : order) {
    if (index[f].empty())
      continue;
    std::size_t row = add_row(LpRowKind::FullyExecuted, RowSense::Equal, 1.0,
                              "exec_" + task_tag(inst, table, f));
    for (std::size_t s = 0; s < nspeed; ++s)
      for (std::size_t t = 0; t < nint; ++t)
        if (index[f][s][t] != npos)
          lp.add_entry(row, index[f][s][t], frac(f, s, t));
  }

  // (2) interval capacity on each processor
  for (int proc = 1; proc <= inst.num_processors; ++proc) {
    for (std::size_t t = 0; t < nint; ++t) {
      std::size_t row =
          add_row(LpRowKind::IntervalCapacity, RowSense::LessEqual, 1.0,
                  "cap_p" + std::to_string(proc) + "_t" + std::to_string(t));
      for (std::size_t f : order) {
        if (index[f].empty() || table.task(f).processor != proc)
          continue;
        for (std::size_t s = 0; s < nspeed; ++s)
          if (index[f][s][t] != npos)
            lp.add_entry(row, index[f][s][t], 1.0);
      }
    }
  }

  // (3) completion lower bound: C_ij - sum coef * y >= 0
  for (std::size_t f : order) {
    if (index[f].empty())
      continue;
    std::size_t row = add_row(LpRowKind::CompletionBound, RowSense::GreaterEqual,
                              0.0, "cbound_" + task_tag(inst, table, f));
    lp.add_entry(row, m.task_completion_col[f], 1.0);
    for (std::size_t s = 0; s < nspeed; ++s) {
      for (std::size_t t = 0; t < nint; ++t) {
        if (index[f][s][t] == npos)
          continue;
        double coef = t == 0
                          ? 0.5 * m.lengths[0] * (1.0 / m.proc_time[f][s] + 1.0)
                          : frac(f, s, t) * m.tau[t] + 0.5 * m.lengths[t];
        lp.add_entry(row, index[f][s][t], -coef);
      }
    }
  }

  // (4) job completion dominates every task completion
  for (std::size_t f : order) {
    std::size_t row = add_row(LpRowKind::JobCompletion, RowSense::GreaterEqual,
                              0.0, "jobc_" + task_tag(inst, table, f));
    lp.add_entry(row, m.job_completion_col[table.ref(f).job], 1.0);
    lp.add_entry(row, m.task_completion_col[f], -1.0);
  }

  // (5) energy budget
  {
    std::size_t row = add_row(LpRowKind::EnergyBudget, RowSense::LessEqual,
                              inst.energy_budget, "energy");
    for (std::size_t k = 0; k < m.y_vars.size(); ++k) {
      const YVar &y = m.y_vars[k];
      lp.add_entry(row, k,
                   m.lengths[y.interval] * std::pow(m.speeds[y.speed], inst.beta));
    }
  }

  // (6) Map prefix fraction >= Reduce prefix fraction at every prefix
  {
    std::vector<std::size_t> seen_jobs;
    for (std::size_t f0 : order) {
      std::size_t j = table.ref(f0).job;
      if (std::find(seen_jobs.begin(), seen_jobs.end(), j) != seen_jobs.end())
        continue;
      seen_jobs.push_back(j);
      std::vector<std::size_t> maps, reduces;
      for (std::size_t f : order) {
        if (table.ref(f).job != j || index[f].empty())
          continue;
        (table.task(f).kind == TaskKind::Map ? maps : reduces).push_back(f);
      }
      for (std::size_t fm : maps) {
        for (std::size_t fr : reduces) {
          for (std::size_t l = 0; l < nint; ++l) {
            std::size_t row = add_row(
                LpRowKind::Precedence, RowSense::GreaterEqual, 0.0,
                "prec_" + task_tag(inst, table, fm) + "_" +
                    task_tag(inst, table, fr) + "_l" + std::to_string(l));
            for (std::size_t s = 0; s < nspeed; ++s)
              for (std::size_t t = 0; t <= l; ++t) {
                if (index[fm][s][t] != npos)
                  lp.add_entry(row, index[fm][s][t], frac(fm, s, t));
                if (index[fr][s][t] != npos)
                  lp.add_entry(row, index[fr][s][t], -frac(fr, s, t));
              }
          }
        }
      }
    }
  }
  return m;
}

const char *to_string(LpSolveStatus status) {
  switch (status) {
  case LpSolveStatus::Optimal:
    return "optimal";
  case LpSolveStatus::Infeasible:
    return "infeasible";
  case LpSolveStatus::ToleranceFailure:
    return "tolerance-failure";
  }
  return "unknown";
}

FractionalLpSolution solve_lp(const LpModel &model, const LpSolver &solver,
                              const LpSolverConfig &config) {
  FractionalLpSolution sol;
  const std::size_t ntasks = model.task_completion_col.size();
  const std::size_t njobs = model.job_completion_col.size();
  sol.y.assign(model.y_vars.size(), 0.0);
  sol.task_completion.assign(ntasks, 0.0);
  sol.job_completion.assign(njobs, 0.0);
  if (model.infeasible_by_construction) {
    sol.status = LpSolveStatus::Infeasible;
    sol.message = "a task has no admissible interval before the horizon";
    return sol;
  }
  LpResult r = solver.solve(model.problem, config);
  sol.iterations = r.iterations;
  sol.message = r.message;
  sol.primal_residual = r.max_primal_residual;
  sol.dual_infeasibility = r.max_dual_infeasibility;
  sol.relative_gap = r.relative_gap;
  switch (r.status) {
  case LpStatus::Optimal:
    sol.status = LpSolveStatus::Optimal;
    break;
  case LpStatus::Infeasible:
    sol.status = LpSolveStatus::Infeasible;
    return sol;
  default:
    sol.status = LpSolveStatus::ToleranceFailure;
    if (r.x.empty())
      return sol;
    break;
  }
  for (std::size_t k = 0; k < model.y_vars.size(); ++k)
    sol.y[k] = r.x[k];
  for (std::size_t f = 0; f < ntasks; ++f)
    sol.task_completion[f] = r.x[model.task_completion_col[f]];
  for (std::size_t j = 0; j < njobs; ++j)
    sol.job_completion[j] = r.x[model.job_completion_col[j]];
  sol.objective = r.objective;
  return sol;
}

FractionalLpSolution solve_lp(const LpModel &model,
                              const LpSolverConfig &config) {
  return solve_lp(model, DenseSimplexSolver{}, config);
}

TaskProfiles task_profiles(const LpModel &model,
                           const FractionalLpSolution &sol) {
  const std::size_t ntasks = model.task_completion_col.size();
  const std::size_t nint = model.num_intervals();
  TaskProfiles p;
  p.fraction.assign(ntasks, std::vector<double>(nint, 0.0));
  p.time.assign(ntasks, std::vector<double>(nint, 0.0));
  p.energy.assign(ntasks, 0.0);
  for (std::size_t k = 0; k < model.y_vars.size(); ++k) {
    const YVar &y = model.y_vars[k];
    double v = sol.y[k];
    if (v == 0.0)
      continue;
    double mass = v * model.lengths[y.interval];
    p.time[y.task][y.interval] += mass;
    p.fraction[y.task][y.interval] += mass / model.proc_time[y.task][y.speed];
    p.energy[y.task] += mass * std::pow(model.speeds[y.speed], model.beta);
  }
  return p;
}

double precedence_residual(const Instance &inst, const LpModel &model,
                           const FractionalLpSolution &sol) {
  TaskTable table(inst);
  TaskProfiles prof = task_profiles(model, sol);
  double worst = 0.0;
  for (std::size_t j = 0; j < inst.jobs.size(); ++j) {
    for (std::size_t fm : table.tasks_of_job(j)) {
      const Task &tm = table.task(fm);
      if (tm.kind != TaskKind::Map || !(tm.volume > 0.0))
        continue;
      for (std::size_t fr : table.tasks_of_job(j)) {
        const Task &tr = table.task(fr);
        if (tr.kind != TaskKind::Reduce || !(tr.volume > 0.0))
          continue;
        double cm = 0.0, cr = 0.0;
        for (std::size_t l = 0; l < model.num_intervals(); ++l) {
          cm += prof.fraction[fm][l];
          cr += prof.fraction[fr][l];
          worst = std::max(worst, cr - cm);
        }
      }
    }
  }
  return worst;
}

double energy_residual(const LpModel &model, const FractionalLpSolution &sol) {
  TaskProfiles prof = task_profiles(model, sol);
  double used = std::accumulate(prof.energy.begin(), prof.energy.end(), 0.0);
  return used - model.energy_budget;
}

} // namespace mrsched
