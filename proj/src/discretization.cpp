#include "mrsched/discretization.hpp"

#include <algorithm>
#include <cmath>

namespace mrsched {

std::optional<double> SpeedGrid::round_down(double s) const {
  auto it = std::upper_bound(speeds.begin(), speeds.end(), s);
  if (it == speeds.begin())
    return std::nullopt;
  return *(it - 1);
}

double compute_t_max(const Instance &inst) {
  if (!(inst.energy_budget > 0.0))
    throw ParameterError("energy budget must be positive");
  if (!(inst.beta > 1.0))
    throw ParameterError("beta must exceed 1");
  InstanceStats st = instance_stats(inst);
  if (!st.has_positive_volume)
    throw ParameterError("instance has no positive-volume task");
  const double n = static_cast<double>(inst.jobs.size());
  const double per_task =
      std::pow(static_cast<double>(st.num_tasks) *
                   std::pow(st.v_max, inst.beta) / inst.energy_budget,
               1.0 / (inst.beta - 1.0));
  return (st.w_max / st.w_min) * (n * st.r_max + n * (n + 1.0) * per_task);
}

std::pair<double, double> speed_bounds(double volume, double t_max,
                                       double energy_budget, double beta) {
  if (!(volume > 0.0))
    throw ParameterError("speed bounds need a positive volume");
  if (!(t_max > 0.0) || !(energy_budget > 0.0) || !(beta > 1.0))
    throw ParameterError("invalid speed bound parameters");
  return {volume / t_max,
          std::pow(energy_budget / volume, 1.0 / (beta - 1.0))};
}

SpeedGrid build_speed_grid(double s_low, double s_high, double epsilon) {
  if (!(s_low > 0.0) || !(s_high >= s_low) || !(epsilon > 0.0) ||
      !std::isfinite(s_high))
    throw ParameterError("speed grid needs 0 < s_L <= s_U and eps > 0");
  SpeedGrid g;
  g.s_low = s_low;
  g.s_high = s_high;
  g.epsilon = epsilon;
  const double base = 1.0 + epsilon;
  int k = static_cast<int>(
      std::floor(std::log(s_high / s_low) / std::log(base))) - 1;
  k = std::max(k, 0);
  while (s_low * std::pow(base, k) < s_high)
    ++k;
  g.k = k;
  g.speeds.reserve(static_cast<std::size_t>(k) + 1);
  for (int l = 0; l <= k; ++l)
    g.speeds.push_back(s_low * std::pow(base, l));
  return g;
}

TimeGrid build_time_grid(double lambda, double delta, double t_max) {
  if (!(lambda > 0.0) || !(delta > 0.0) || !std::isfinite(t_max))
    throw ParameterError("time grid needs lambda > 0 and delta > 0");
  if (!(t_max >= lambda))
    throw ParameterError("time grid needs t_max >= lambda");
  TimeGrid g;
  g.lambda = lambda;
  g.delta = delta;
  const double base = 1.0 + delta;
  // smallest u with lambda (1+delta)^(u-1) >= t_max
  int u = static_cast<int>(
      std::floor(std::log(t_max / lambda) / std::log(base))) - 1;
  u = std::max(u, 1);
  while (lambda * std::pow(base, u - 1) < t_max)
    ++u;
  while (u > 1 && lambda * std::pow(base, u - 2) >= t_max)
    --u;
  g.u = u;
  g.tau.reserve(static_cast<std::size_t>(u) + 2);
  g.tau.push_back(0.0);
  for (int t = 1; t <= u + 1; ++t)
    g.tau.push_back(lambda * std::pow(base, t - 1));
  return g;
}

Grids build_grids(const Instance &inst, const GridOptions &opts) {
  InstanceStats st = instance_stats(inst);
  if (!st.has_positive_volume)
    throw ParameterError("instance has no positive-volume task");
  Grids g;
  g.t_max = opts.t_max ? *opts.t_max : compute_t_max(inst);
  if (!(g.t_max > 0.0))
    throw ParameterError("t_max must be positive");
  auto [lo, hi] = speed_bounds(st.v_min, g.t_max, inst.energy_budget, inst.beta);
  if (hi < lo)
    throw ParameterError("energy budget too small for the horizon: s_U < s_L");
  g.speeds = build_speed_grid(lo, hi, opts.epsilon);
  double lambda = opts.lambda ? *opts.lambda
                              : opts.lambda_fraction * opts.alpha * st.v_min /
                                    g.speeds.s_max();
  g.times = build_time_grid(lambda, opts.delta, std::max(g.t_max, lambda));
  return g;
}

} // namespace mrsched
