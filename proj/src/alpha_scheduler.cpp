#include "mrsched/alpha_scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "mrsched/list_dispatch.hpp"
#include "mrsched/ratio_analysis.hpp"

namespace mrsched {

AlphaParams make_alpha_params(double alpha, double gamma, const TimeGrid &times,
                              double v_min, double s_max) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ParameterError("alpha must lie in (0,1)");
  if (!(gamma > 0.0))
    throw ParameterError("gamma must be positive");
  if (!(times.lambda < alpha * v_min / s_max))
    throw ParameterError("lambda must be below alpha * v_min / s_max");
  return {alpha, gamma, times.delta, times.lambda};
}

double no_augmentation_gamma(double alpha, double beta) {
  return std::pow(alpha, -beta / (beta - 1.0));
}

std::size_t alpha_point(const std::vector<double> &fractions, double alpha) {
  double cum = 0.0;
  for (std::size_t l = 0; l < fractions.size(); ++l) {
    cum += fractions[l];
    if (cum >= alpha - kAlphaFractionTol)
      return l;
  }
  throw CertificationError("cumulative LP fraction never reaches alpha");
}

AlphaPlan build_plan(const Instance &inst, const LpModel &model,
                     const FractionalLpSolution &sol, const AlphaParams &params) {
  TaskTable table(inst);
  TaskProfiles prof = task_profiles(model, sol);
  AlphaPlan plan;
  plan.tasks.resize(table.size());
  plan.priority.resize(static_cast<std::size_t>(inst.num_processors));
  for (std::size_t f = 0; f < table.size(); ++f) {
    const Task &task = table.task(f);
    if (!(task.volume > 0.0))
      continue;
    TaskPlan &tp = plan.tasks[f];
    tp.active = true;
    tp.alpha_point = alpha_point(prof.fraction[f], params.alpha);
    double mass = 0.0;
    for (std::size_t t = 0; t <= tp.alpha_point; ++t)
      mass += prof.time[f][t];
    tp.processing_time = params.gamma * mass;
    if (!(tp.processing_time > 0.0))
      throw CertificationError("task with positive volume has no LP mass before "
                               "its alpha-point");
    tp.speed = task.volume / tp.processing_time;
    tp.availability = model.tau[tp.alpha_point + 1];
    plan.priority[static_cast<std::size_t>(task.processor - 1)].push_back(f);
  }
  for (auto &list : plan.priority)
    std::stable_sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      const TaskPlan &pa = plan.tasks[a], &pb = plan.tasks[b];
      if (pa.alpha_point != pb.alpha_point)
        return pa.alpha_point < pb.alpha_point;
      return table.job_of(a).id < table.job_of(b).id;
    });
  return plan;
}

Schedule list_schedule(const Instance &inst, const AlphaPlan &plan) {
  std::vector<double> avail(plan.tasks.size(), 0.0), p(plan.tasks.size(), 0.0);
  for (std::size_t f = 0; f < plan.tasks.size(); ++f) {
    avail[f] = plan.tasks[f].availability;
    p[f] = plan.tasks[f].processing_time;
  }
  return list_dispatch(inst, plan.priority, avail, p);
}

bool Certificate::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck &c) { return c.ok; });
}

std::string Certificate::failures() const {
  std::string out;
  for (const BoundCheck &c : checks)
    if (!c.ok)
      out += (out.empty() ? "" : ", ") + c.name;
  return out;
}

Certificate certify_bounds(const Instance &inst, const LpModel &model,
                           const FractionalLpSolution &sol,
                           const AlphaPlan &plan, const Schedule &sched,
                           const AlphaParams &params) {
  TaskTable table(inst);
  TaskProfiles prof = task_profiles(model, sol);
  Certificate cert;
  cert.certified_regime = inst.beta >= 2.0;
  cert.energy_factor =
      energy_augmentation_factor(params.alpha, params.gamma, inst.beta);

  auto leq = [](double lhs, double rhs) {
    return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
  };
  auto add = [&](std::string name, double lhs, double rhs) {
    cert.checks.push_back({std::move(name), lhs, rhs, leq(lhs, rhs)});
  };

  std::vector<double> completion(table.size(), 0.0);
  for (const ScheduleEntry &e : sched.entries)
    completion[table.flat(e.task)] = e.completion();

  // worst-slack aggregates keep the report short
  BoundCheck task_energy_check{"per-task energy", 0.0, 0.0, true};
  BoundCheck avail_check{"alpha-point after first interval", 0.0, 0.0, true};
  BoundCheck prefix_check{"priority prefix", 0.0, 0.0, true};
  BoundCheck map_check{"map completion", 0.0, 0.0, true};
  bool first_energy = true, first_prefix = true, first_map = true;
  auto track = [&](BoundCheck &c, bool &first, double lhs, double rhs) {
    if (first || rhs - lhs < c.slack()) {
      c.lhs = lhs;
      c.rhs = rhs;
    }
    c.ok = c.ok && leq(lhs, rhs);
    first = false;
  };

  for (std::size_t f = 0; f < table.size(); ++f) {
    const TaskPlan &tp = plan.tasks[f];
    if (!tp.active)
      continue;
    double used = task_energy(table.task(f).volume, tp.processing_time, inst.beta);
    track(task_energy_check, first_energy, used, prof.energy[f] * cert.energy_factor);
    if (tp.alpha_point == 0) {
      avail_check.ok = false;
      avail_check.lhs = 0.0;
      avail_check.rhs = 1.0;
    }
    if (table.task(f).kind == TaskKind::Map)
      track(map_check, first_map, completion[f],
            (params.gamma + 1.0) * model.tau[tp.alpha_point + 1]);
  }
  for (const auto &list : plan.priority) {
    double prefix = 0.0;
    for (std::size_t f : list) {
      prefix += plan.tasks[f].processing_time;
      track(prefix_check, first_prefix, prefix,
            params.gamma * model.tau[plan.tasks[f].alpha_point + 1]);
    }
  }
  cert.checks.push_back(task_energy_check);
  add("total energy", energy(inst, sched), inst.energy_budget * cert.energy_factor);

  RatioVariant variant = RatioVariant::General;
  if (!has_precedence(inst))
    variant = all_releases_zero(inst) ? RatioVariant::NoPrecedenceNoRelease
                                      : RatioVariant::NoPrecedence;
  cert.ratio_variant = to_string(variant);
  cert.ratio = ratio_bound(params.alpha, params.gamma, params.delta, variant);
  add("objective", objective(inst, sched), cert.ratio * sol.objective);

  cert.checks.push_back(avail_check);
  cert.checks.push_back(prefix_check);
  cert.checks.push_back(map_check);

  std::vector<Violation> v =
      validate_schedule(inst, sched, inst.energy_budget * cert.energy_factor);
  add("schedule feasibility", static_cast<double>(v.size()), 0.0);
  return cert;
}

void require_certified(const Certificate &cert) {
  if (!cert.ok())
    throw CertificationError("bound violated: " + cert.failures());
}

AlgoMrRun run_algo_mr(const Instance &inst, const AlgoMrOptions &opts) {
  AlgoMrRun run;
  GridOptions go = opts.grids;
  go.alpha = opts.alpha;
  run.grids = build_grids(inst, go);
  run.model = build_lp(inst, run.grids.speeds, run.grids.times);
  run.lp = solve_lp(run.model, opts.lp);
  if (run.lp.status != LpSolveStatus::Optimal)
    throw StructuralError(std::string("LP not solved: ") + to_string(run.lp.status) +
                          (run.lp.message.empty() ? "" : " (" + run.lp.message + ")"));
  const InstanceStats st = instance_stats(inst);
  const double gamma =
      opts.gamma ? *opts.gamma : no_augmentation_gamma(opts.alpha, inst.beta);
  run.params = make_alpha_params(opts.alpha, gamma, run.grids.times, st.v_min,
                                 run.grids.speeds.s_max());
  run.plan = build_plan(inst, run.model, run.lp, run.params);
  run.schedule = list_schedule(inst, run.plan);
  run.certificate = certify_bounds(inst, run.model, run.lp, run.plan,
                                   run.schedule, run.params);
  return run;
}

} // namespace mrsched
