#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mrsched/discretization.hpp"
#include "mrsched/lp_relaxation.hpp"
#include "mrsched/model.hpp"

namespace mrsched {

// Absolute slack on cumulative LP fractions when locating alpha-points.
inline constexpr double kAlphaFractionTol = 1e-9;

struct AlphaParams {
  double alpha = 0.72;
  double gamma = 1.0;
  double delta = 0.5;
  double lambda = 0.0;
};

// Validates the parameters; lambda must satisfy lambda < alpha v_min / s_max
// so that no alpha-point falls in the first interval.
AlphaParams make_alpha_params(double alpha, double gamma, const TimeGrid &times,
                              double v_min, double s_max);

// gamma = alpha^(-beta/(beta-1)): the stretch that keeps the energy budget.
double no_augmentation_gamma(double alpha, double beta);

// Smallest l with fractions[0] + ... + fractions[l] >= alpha - tol.
std::size_t alpha_point(const std::vector<double> &fractions, double alpha);

struct TaskPlan {
  bool active = false; // positive volume
  std::size_t alpha_point = 0;
  double processing_time = 0.0;
  double speed = 0.0;
  double availability = 0.0; // tau_{alpha_point + 1}
};

struct AlphaPlan {
  std::vector<TaskPlan> tasks;                  // per flat task
  std::vector<std::vector<std::size_t>> priority; // per processor (index p-1)
};

AlphaPlan build_plan(const Instance &inst, const LpModel &model,
                     const FractionalLpSolution &sol, const AlphaParams &params);

// Non-preemptive list scheduling: an idle processor starts the first task of
// its priority list that is available and, for a Reduce task, whose sibling
// Map tasks have completed.
Schedule list_schedule(const Instance &inst, const AlphaPlan &plan);

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;

  double slack() const { return rhs - lhs; }
};

struct Certificate {
  std::vector<BoundCheck> checks;
  std::string ratio_variant;
  double ratio = 0.0;
  double energy_factor = 1.0;
  // beta < 2 lies outside the regime where the per-task energy bound holds.
  bool certified_regime = true;

  bool ok() const;
  // Names of the failed checks, comma separated.
  std::string failures() const;
};

Certificate certify_bounds(const Instance &inst, const LpModel &model,
                           const FractionalLpSolution &sol,
                           const AlphaPlan &plan, const Schedule &sched,
                           const AlphaParams &params);

// Throws CertificationError naming the failed checks, if any.
void require_certified(const Certificate &cert);

struct AlgoMrOptions {
  double alpha = 0.72;
  std::optional<double> gamma; // default: no_augmentation_gamma
  GridOptions grids;           // grids.alpha is overwritten by alpha
  LpSolverConfig lp;
};

// Everything produced by one run, kept for reporting.
struct AlgoMrRun {
  Grids grids;
  LpModel model;
  FractionalLpSolution lp;
  AlphaParams params;
  AlphaPlan plan;
  Schedule schedule;
  Certificate certificate;
};

// Grids, LP, plan, list schedule and certificate. Throws StructuralError
// when the LP is not solved to optimality.
AlgoMrRun run_algo_mr(const Instance &inst, const AlgoMrOptions &opts);

} // namespace mrsched
