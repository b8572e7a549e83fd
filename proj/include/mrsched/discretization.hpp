#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mrsched/model.hpp"

namespace mrsched {

// Geometric speed set s_L (1+eps)^l, l = 0..k, where k is the smallest integer
// with s_L (1+eps)^k >= s_U.
struct SpeedGrid {
  double s_low = 0.0;
  double s_high = 0.0;
  double epsilon = 0.0;
  int k = 0;
  std::vector<double> speeds;

  double s_max() const { return speeds.back(); }
  std::size_t size() const { return speeds.size(); }

  // Largest grid speed not exceeding `s`, if any.
  std::optional<double> round_down(double s) const;
};

// Geometric time intervals I_t = (tau_t, tau_{t+1}], t = 0..u, with
// tau_0 = 0 and tau_t = lambda (1+delta)^(t-1).
struct TimeGrid {
  double lambda = 0.0;
  double delta = 0.0;
  int u = 0;
  std::vector<double> tau; // u + 2 endpoints

  std::size_t num_intervals() const { return static_cast<std::size_t>(u) + 1; }
  double length(std::size_t t) const { return tau[t + 1] - tau[t]; }
};

// Horizon bound on the makespan of an optimal schedule.
double compute_t_max(const Instance &inst);

// Feasible speed range [v / t_max, (E / v)^(1/(beta-1))] of a positive-volume
// task.
std::pair<double, double> speed_bounds(double volume, double t_max,
                                       double energy_budget, double beta);

SpeedGrid build_speed_grid(double s_low, double s_high, double epsilon);
TimeGrid build_time_grid(double lambda, double delta, double t_max);

struct Grids {
  double t_max = 0.0;
  SpeedGrid speeds;
  TimeGrid times;
};

struct GridOptions {
  double epsilon = 0.5;
  double delta = 0.5;
  // Multiplier f in lambda = f * alpha * v_min / s_max; must be < 1.
  double lambda_fraction = 0.5;
  double alpha = 0.72;
  // Explicit lambda; overrides lambda_fraction when set.
  std::optional<double> lambda;
  // Tighter horizon supplied by the caller; the bound above is the default.
  std::optional<double> t_max;
};

// Speed grid over [v_min / t_max, (E / v_min)^(1/(beta-1))] and the matching
// time grid.
Grids build_grids(const Instance &inst, const GridOptions &opts);

} // namespace mrsched
