#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mrsched/discretization.hpp"
#include "mrsched/lp_solver.hpp"
#include "mrsched/model.hpp"

namespace mrsched {

// Row families of the interval-indexed relaxation. Release pinning and
// nonnegativity are column bounds rather than rows.
enum class LpRowKind : int {
  FullyExecuted = 1,   // sum of executed fractions = 1
  IntervalCapacity = 2, // per processor and interval
  CompletionBound = 3, // task completion lower bound
  JobCompletion = 4,   // C_j >= C_ij
  EnergyBudget = 5,
  Precedence = 6,      // Map prefix fraction >= Reduce prefix fraction
};

// y_{i,j,s,t}: portion of interval t during which the task runs at speed s.
struct YVar {
  std::size_t task = 0; // flat task index
  std::size_t speed = 0;
  std::size_t interval = 0;
  bool pinned = false; // forced to zero: interval starts before the release
};

struct LpModel {
  LpProblem problem;
  std::vector<LpRowKind> row_kind;
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;

  // y columns occupy [0, y_vars.size()).
  std::vector<YVar> y_vars;
  std::vector<std::size_t> task_completion_col; // per flat task
  std::vector<std::size_t> job_completion_col;  // per job storage index
  // p_{i,j,s} = v / s, per flat task and speed index (0 for zero volume)
  std::vector<std::vector<double>> proc_time;

  std::vector<double> speeds;
  std::vector<double> tau;
  std::vector<double> lengths;
  double beta = 2.0;
  double energy_budget = 0.0;

  // Some positive-volume task has no admissible y variable.
  bool infeasible_by_construction = false;

  std::size_t count_rows(LpRowKind kind) const;
  std::size_t num_intervals() const { return lengths.size(); }
};

LpModel build_lp(const Instance &inst, const SpeedGrid &speeds,
                 const TimeGrid &times);

enum class LpSolveStatus { Optimal, Infeasible, ToleranceFailure };

const char *to_string(LpSolveStatus status);

struct FractionalLpSolution {
  LpSolveStatus status = LpSolveStatus::ToleranceFailure;
  std::vector<double> y; // per y variable, model order
  std::vector<double> task_completion;
  std::vector<double> job_completion;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  std::size_t iterations = 0;
  std::string message;
};

FractionalLpSolution solve_lp(const LpModel &model, const LpSolver &solver,
                              const LpSolverConfig &config = {});
FractionalLpSolution solve_lp(const LpModel &model,
                              const LpSolverConfig &config = {});

// Per-task, per-interval aggregates of a fractional solution.
struct TaskProfiles {
  // fraction[task][t] = sum_s y |I_t| / p_s
  std::vector<std::vector<double>> fraction;
  // time[task][t] = sum_s y |I_t|
  std::vector<std::vector<double>> time;
  // energy[task] = sum_{s,t} y |I_t| s^beta
  std::vector<double> energy;
};

TaskProfiles task_profiles(const LpModel &model,
                           const FractionalLpSolution &sol);

// Largest violation of the precedence rows and of the energy row by `sol`.
double precedence_residual(const Instance &inst, const LpModel &model,
                           const FractionalLpSolution &sol);
double energy_residual(const LpModel &model, const FractionalLpSolution &sol);

} // namespace mrsched
