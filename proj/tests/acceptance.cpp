// Acceptance suite: one PASS/FAIL line per criterion. Run without arguments
// for all criteria, or name one or more criteria to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mrsched/alpha_scheduler.hpp"
#include "mrsched/cp_fixed_order.hpp"
#include "mrsched/experiment.hpp"
#include "mrsched/generator.hpp"
#include "mrsched/oracle.hpp"
#include "mrsched/order_policies.hpp"
#include "mrsched/ratio_analysis.hpp"

using namespace mrsched;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string key;
  std::string title;
  double time_limit; // seconds, 0 = none
  std::function<Outcome()> run;
};

std::string fmt(const char *f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / x.size();
    my += std::log(y[i]) / y.size();
  }
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

const std::vector<double> kTableBetas{2, 2.2, 2.4, 2.6, 2.8, 3};
const double kTable[6][3] = {{37.52, 9.44, 6.75}, {34.89, 8.84, 6.29},
                             {33.01, 8.41, 5.97}, {31.59, 8.09, 5.72},
                             {30.50, 7.84, 5.53}, {29.62, 7.64, 5.38}};

Outcome table_ratios() {
  double worst = 0;
  const RatioVariant vs[3] = {RatioVariant::General, RatioVariant::NoPrecedence,
                              RatioVariant::NoPrecedenceNoRelease};
  for (std::size_t b = 0; b < kTableBetas.size(); ++b)
    for (int v = 0; v < 3; ++v)
      worst = std::max(worst, std::abs(optimal_ratio(kTableBetas[b], vs[v]).ratio - kTable[b][v]));
  return {worst <= 0.02, "18 entries, max abs error " + fmt("%.4f", worst) + " (tol 0.02)"};
}

Outcome tradeoff_points() {
  const std::vector<std::pair<double, std::vector<double>>> curves = {
      {2.0, {37.52, 33.32, 29.97, 27.25, 24.99, 23.10, 21.49, 20.10, 18.90, 17.84, 16.91}},
      {2.5, {32.25, 29.80, 27.75, 26.02, 24.53, 23.24, 22.11, 21.11, 20.22, 19.42, 18.69}},
      {3.0, {29.62, 27.91, 26.46, 25.20, 24.10, 23.13, 22.27, 21.49, 20.79, 20.15, 19.57}}};
  std::vector<double> levels;
  for (int k = 0; k <= 10; ++k)
    levels.push_back(k / 10.0);
  double worst = 0;
  for (const auto &[beta, want] : curves) {
    auto got = tradeoff_curve(beta, levels);
    for (std::size_t k = 0; k < want.size(); ++k)
      worst = std::max(worst, std::abs(got[k].optimum.ratio - want[k]));
  }
  return {worst <= 0.05, "33 points, max abs error " + fmt("%.4f", worst) + " (tol 0.05)"};
}

Outcome chain_closed_form() {
  double worst = 0;
  for (int n : {2, 5, 10}) {
    Instance inst = gen_chain_instance(n, 1.0);
    double cf = closed_form_chain(n, 1.0).objective;
    double s = 0;
    for (int i = 1; i <= n; ++i)
      s += std::sqrt(i);
    worst = std::max(worst, std::abs(cf - s * s) / (s * s));
    CpSolution sol = solve_cp(inst, fcfs_order(inst));
    worst = std::max(worst, std::abs(sol.objective - s * s) / (s * s));
  }
  // independent check: 1e-3 grid over the speed split of the n=2 chain
  double grid = 1e300;
  for (int k = 1; k < 1000; ++k) {
    double s1 = k * 1e-3;
    grid = std::min(grid, 2 / s1 + 1 / (1 - s1));
  }
  Instance two = gen_chain_instance(2, 1.0);
  double cp2 = solve_cp(two, fcfs_order(two)).objective;
  double grid_err = std::abs(cp2 - grid) / grid;
  bool ok = worst <= 1e-4 && grid_err <= 1e-3;
  return {ok, "n=2,5,10 max rel error " + fmt("%.2e", worst) + " (tol 1e-4); n=2 vs grid " +
                  fmt("%.2e", grid_err) + " (tol 1e-3)"};
}

Outcome algomr_certification() {
  const double alpha = optimal_ratio(2.0, RatioVariant::General).alpha;
  int runs = 0, failures = 0;
  std::string failed;
  for (int k = 0; k < 20; ++k) {
    GenConfig c;
    c.m = 2 + k % 2;
    c.n = 2 + k % 3;
    c.maps_per_job = 1;
    c.reduces_per_job = 1;
    c.energy_budget = 10.0 + 5.0 * (k % 7);
    c.beta = 2.0;
    c.seed = 1000 + static_cast<std::uint64_t>(k);
    Instance inst = generate_instance(c);
    AlgoMrOptions o;
    o.alpha = alpha;
    o.gamma = 1.0 / (alpha * alpha);
    o.grids.epsilon = 0.5;
    o.grids.delta = 0.5;
    AlgoMrRun run = run_algo_mr(inst, o);
    ++runs;
    if (!run.certificate.ok()) {
      ++failures;
      failed += " seed" + std::to_string(c.seed) + ":" + run.certificate.failures();
    }
  }
  return {runs >= 20 && failures == 0,
          std::to_string(runs) + " instances, " + std::to_string(failures) + " failed" + failed};
}

Outcome oracle_sandwich() {
  const double alpha = optimal_ratio(2.0, RatioVariant::General).alpha;
  int runs = 0, violations = 0;
  double worst_low = -INFINITY, worst_high = -INFINITY;
  for (int k = 0; k < 12; ++k) {
    GenConfig c;
    c.m = 2 + k % 2;
    c.n = 2 + k % 2;
    c.maps_per_job = 1;
    c.reduces_per_job = 1;
    c.energy_budget = 8.0 + 4.0 * (k % 5);
    c.seed = 500 + static_cast<std::uint64_t>(k);
    Instance inst = generate_instance(c);
    AlgoMrOptions o;
    o.alpha = alpha;
    AlgoMrRun run = run_algo_mr(inst, o);
    OracleResult best = brute_force_oracle(inst, oracle_speed_window(inst, run.grids.speeds));
    if (!best.feasible)
      continue;
    ++runs;
    const double lp = run.lp.objective, opt = best.objective,
                 heur = objective(inst, run.schedule);
    worst_low = std::max(worst_low, (lp - opt) / opt);
    worst_high = std::max(worst_high, (opt - heur) / heur);
    violations += lp > opt * (1 + 1e-6);
    violations += opt > heur * (1 + 1e-6);
  }
  return {runs >= 10 && violations == 0,
          std::to_string(runs) + " instances, " + std::to_string(violations) +
              " violations; max (LP-opt)/opt " + fmt("%.3g", worst_low) +
              ", max (opt-AlgoMR)/AlgoMR " + fmt("%.3g", worst_high)};
}

Outcome cp_bounds() {
  int lb_runs = 0, lb_bad = 0, ex_runs = 0, ex_bad = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    GenConfig c;
    c.m = 6;
    c.n = 3 + static_cast<int>(seed % 4);
    c.maps_per_job = 2;
    c.reduces_per_job = 2;
    c.energy_budget = 100;
    c.seed = seed;
    Instance inst = generate_instance(c);
    for (const JobOrder &o : {fcfs_order(inst), smith_order(inst)}) {
      CpSolution cp = solve_cp(inst, o);
      Schedule s = schedule_from_order(inst, o, cp.p);
      ++lb_runs;
      lb_bad += !validate_schedule(inst, s, inst.energy_budget * (1 + 1e-7)).empty() ||
                cp.objective > objective(inst, s) * (1 + 1e-9);
    }
    for (Job &j : inst.jobs)
      for (Task &t : j.tasks)
        if (t.kind == TaskKind::Reduce)
          t.volume = 0;
    for (const JobOrder &o : {fcfs_order(inst), smith_order(inst)}) {
      CpSolution cp = solve_cp(inst, o);
      double obj = objective(inst, schedule_from_order(inst, o, cp.p));
      ++ex_runs;
      ex_bad += std::abs(obj - cp.objective) > 1e-6 * cp.objective;
    }
  }
  return {lb_runs >= 20 && ex_runs >= 10 && lb_bad == 0 && ex_bad == 0,
          "lower bound " + std::to_string(lb_bad) + "/" + std::to_string(lb_runs) +
              " violations; precedence-free mismatch " + std::to_string(ex_bad) + "/" +
              std::to_string(ex_runs) + " (tol 1e-6)"};
}

Outcome counterexample_growth() {
  std::vector<double> ns{4, 8, 16}, cp_obj, sched_obj;
  for (double n : ns) {
    Instance inst = gen_fcfs_gap_instance(static_cast<int>(n));
    JobOrder o = fcfs_order(inst);
    CpSolution cp = solve_cp(inst, o);
    cp_obj.push_back(cp.objective);
    sched_obj.push_back(objective(inst, schedule_from_order(inst, o, cp.p)));
  }
  const double cp_exp = loglog_slope(ns, cp_obj), sched_exp = loglog_slope(ns, sched_obj);

  double gaps[2];
  int k = 0;
  for (double r : {100.0, 1000.0}) {
    Instance inst = gen_sr_gap_instance(3, 1e-4, r);
    gaps[k++] = solve_cp(inst, smith_order(inst)).objective -
                solve_cp(inst, fcfs_order(inst)).objective;
  }
  const double growth = gaps[1] / gaps[0];
  std::ostringstream d;
  d << "FCFS family CP objective " << cp_obj[0] << ", " << cp_obj[1] << ", " << cp_obj[2]
    << " -> exponent " << fmt("%.3f", cp_exp) << " (need >= 2.5)"
    << "; fixed-order schedule exponent " << fmt("%.3f", sched_exp)
    << "; SR gap " << fmt("%.1f", gaps[0]) << " -> " << fmt("%.1f", gaps[1]) << " = "
    << fmt("%.2f", growth) << "x (need >= 1.9)";
  return {cp_exp >= 2.5 && growth >= 1.9, d.str()};
}

Outcome desk_experiment() {
  ExperimentConfig cfg;
  cfg.gen.m = 10;
  cfg.gen.maps_per_job = 3;
  cfg.gen.reduces_per_job = 2;
  // budget scaled by the work per job relative to the 20 Map / 10 Reduce
  // setting with E = 1000 (mean work 60.5 against 330)
  cfg.gen.energy_budget = 1000.0 * 60.5 / 330.0;
  cfg.gen.seed = 1;
  cfg.ns = {3, 5, 8};
  cfg.repetitions = 10;
  cfg.dispatch = Dispatch::List;
  cfg.policies = {Policy::CpFcfs, Policy::CpSr};
  ExperimentResult res = run_experiment(cfg);
  bool ok = true;
  std::ostringstream d;
  d << "E=" << fmt("%.2f", cfg.gen.energy_budget);
  for (int n : cfg.ns) {
    const SummaryRow *f = nullptr, *s = nullptr;
    for (const SummaryRow &r : res.summary)
      if (r.n == n)
        (r.policy == Policy::CpFcfs ? f : s) = &r;
    if (!f || !s) {
      return {false, "missing summary rows"};
    }
    const bool heur = f->mean_objective <= s->mean_objective;
    const bool lb = s->mean_lb <= f->mean_lb;
    ok &= heur && lb && f->infeasible == 0 && s->infeasible == 0;
    d << "; n=" << n << " heuristic FCFS " << fmt("%.1f", f->mean_objective) << (heur ? " <= " : " > ")
      << "SR " << fmt("%.1f", s->mean_objective) << ", CP SR " << fmt("%.1f", s->mean_lb)
      << (lb ? " <= " : " > ") << "FCFS " << fmt("%.1f", f->mean_lb) << ", heuristic/CP FCFS "
      << fmt("%.2f", f->mean_ratio) << " SR " << fmt("%.2f", s->mean_ratio);
  }
  return {ok, d.str()};
}

Outcome invariant_suite() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pos(0.01, 10), beta(2, 3), u(0, 1);
  int checks = 0, bad = 0;
  // energy and duration are dual
  for (int k = 0; k < 1000; ++k, ++checks) {
    double v = pos(rng), p = pos(rng), b = 1.1 + 2.9 * u(rng);
    double e = task_energy(v, p, b);
    bad += std::abs(e * std::pow(p, b - 1) - std::pow(v, b)) > 1e-12 * std::pow(v, b);
  }
  // convexity kernel behind the energy bound
  for (int k = 0; k < 1000; ++k, ++checks) {
    int n = 1 + static_cast<int>(u(rng) * 6);
    std::vector<double> a(n), s(n);
    for (int i = 0; i < n; ++i) {
      a[i] = pos(rng);
      s[i] = pos(rng);
    }
    auto [lhs, rhs] = jensen_sides(a, s, beta(rng));
    bad += lhs > rhs * (1 + 1e-12);
  }
  // time grids telescope
  for (int k = 0; k < 200; ++k) {
    TimeGrid g = build_time_grid(0.001 + u(rng), 0.05 + u(rng), 2 + 1e4 * u(rng));
    double sum = 0;
    for (std::size_t t = 0; t < g.num_intervals(); ++t, ++checks) {
      sum += g.length(t);
      bad += std::abs(sum - g.tau[t + 1]) > 1e-12 * g.tau[t + 1];
    }
  }
  // priority-prefix and Map-completion bounds on AlgoMR runs
  for (int k = 0; k < 4; ++k) {
    GenConfig c;
    c.m = 3;
    c.n = 3;
    c.maps_per_job = 1;
    c.reduces_per_job = 1;
    c.energy_budget = 25;
    c.seed = 77 + static_cast<std::uint64_t>(k);
    AlgoMrRun run = run_algo_mr(generate_instance(c), {});
    for (const BoundCheck &b : run.certificate.checks)
      if (b.name == "priority prefix" || b.name == "map completion" ||
          b.name == "alpha-point after first interval") {
        ++checks;
        bad += !b.ok;
      }
  }
  // orders are permutations
  GenConfig c;
  c.n = 9;
  for (std::uint64_t k = 0; k < 50; ++k) {
    Instance inst = generate_instance(c, k);
    checks += 2;
    bad += !is_total_order(inst, fcfs_order(inst));
    bad += !is_total_order(inst, smith_order(inst));
  }
  return {bad == 0, std::to_string(checks) + " checks, " + std::to_string(bad) + " violations"};
}

} // namespace

int main(int argc, char **argv) {
  const std::vector<Criterion> all = {
      {"table", "optimal ratios per beta and variant", 1, table_ratios},
      {"tradeoff", "ratio against energy augmentation", 2, tradeoff_points},
      {"closed-form", "fixed-order program vs single-processor closed form", 10, chain_closed_form},
      {"certification", "AlgoMR certificate on random instances", 300, algomr_certification},
      {"sandwich", "LP <= exhaustive optimum <= AlgoMR", 0, oracle_sandwich},
      {"cp-bounds", "fixed-order program lower bound and exactness", 0, cp_bounds},
      {"counterexamples", "order counterexample growth", 0, counterexample_growth},
      {"desk-experiment", "desk-scale FCFS vs SR directions", 900, desk_experiment},
      {"invariants", "validator and invariant suite", 0, invariant_suite},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failed = 0, ran = 0;
  for (const Criterion &c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.key) == wanted.end())
      continue;
    ++ran;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception &e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0 && secs > c.time_limit) {
      out.pass = false;
      out.detail += "; exceeded " + fmt("%.0f", c.time_limit) + " s";
    }
    failed += !out.pass;
    std::printf("%s  %-16s %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", c.key.c_str(),
                c.title.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion matched\n");
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
