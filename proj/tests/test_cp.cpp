#include <doctest.h>

#include <chrono>
#include <cmath>

#include "helpers.hpp"
#include "mrsched/cp_fixed_order.hpp"
#include "mrsched/generator.hpp"
#include "mrsched/order_policies.hpp"

using namespace testing;

namespace {

// n jobs on processor 1, each with a single positive Map task.
Instance single_processor(const std::vector<double> &release, const std::vector<double> &vol,
                          double E = 1.0) {
  Instance inst = make_instance(2, E, 2, {});
  for (std::size_t j = 0; j < vol.size(); ++j)
    inst.jobs.push_back(make_job(static_cast<int>(j + 1), 1, release[j],
                                 {map_on(1, vol[j]), reduce_on(2, 0)}));
  return inst;
}

double sqrt_sum_squared(int n) {
  double s = 0;
  for (int i = 1; i <= n; ++i)
    s += std::sqrt(i);
  return s * s;
}

GenConfig small_config(std::uint64_t seed) {
  GenConfig c;
  c.m = 4;
  c.n = 4;
  c.maps_per_job = 2;
  c.reduces_per_job = 1;
  c.energy_budget = 50;
  c.seed = seed;
  return c;
}

} // namespace

TEST_CASE("evaluate_completions") {
  Instance a = single_processor({0, 0}, {1, 2});
  Completions c = evaluate_completions(a, {{1, 2}}, {1, 0, 2, 0});
  CHECK(c.job[0] == doctest::Approx(1));
  CHECK(c.job[1] == doctest::Approx(3));

  Instance b = single_processor({0, 5}, {1, 1});
  c = evaluate_completions(b, {{1, 2}}, {1, 0, 1, 0});
  CHECK(c.job[0] == doctest::Approx(1));
  CHECK(c.job[1] == doctest::Approx(6));

  c = evaluate_completions(unit_pair(), {{1}}, {1, 1});
  CHECK(c.task[0] == doctest::Approx(1));
  CHECK(c.task[1] == doctest::Approx(2));
  CHECK(c.job[0] == doctest::Approx(2));

  // the order decides who waits
  c = evaluate_completions(a, {{2, 1}}, {1, 0, 2, 0});
  CHECK(c.job[0] == doctest::Approx(3));
  CHECK(c.job[1] == doctest::Approx(2));

  CHECK_THROWS_AS(evaluate_completions(a, {{1, 1}}, {1, 0, 2, 0}), ParameterError);
}

TEST_CASE("solve_cp on closed-form cases") {
  CpSolution sym = solve_cp(unit_pair(2.0), {{1}});
  CHECK(sym.converged);
  CHECK(sym.objective == doctest::Approx(2).epsilon(1e-7));
  CHECK(sym.p[0] == doctest::Approx(1).epsilon(1e-4));
  CHECK(sym.p[1] == doctest::Approx(1).epsilon(1e-4));
  CHECK(sym.energy <= 2 * (1 + 1e-7));

  for (int n : {2, 5, 10}) {
    Instance inst = gen_chain_instance(n);
    CpSolution s = solve_cp(inst, fcfs_order(inst));
    CHECK(s.converged);
    CHECK(s.objective == doctest::Approx(sqrt_sum_squared(n)).epsilon(1e-7));
    CHECK(s.lower_bound <= s.objective);
    CHECK(s.gap <= 1e-7);
  }
  CHECK(sqrt_sum_squared(2) == doctest::Approx(3 + 2 * std::sqrt(2.0)));
  CHECK(sqrt_sum_squared(5) == doctest::Approx(70.2635).epsilon(1e-6));
}

TEST_CASE("n=2 chain against a grid search") {
  // speeds s and 1-s spend E = 1; the first job's time counts twice
  double best = 1e300;
  for (int k = 1; k < 1000; ++k) {
    double s = k * 1e-3;
    best = std::min(best, 2 / s + 1 / (1 - s));
  }
  Instance inst = gen_chain_instance(2);
  CpSolution sol = solve_cp(inst, fcfs_order(inst));
  CHECK(sol.objective <= best);
  CHECK(sol.objective == doctest::Approx(best).epsilon(1e-3));
}

TEST_CASE("closed_form_chain") {
  ChainSolution one = closed_form_chain(1, 1);
  CHECK(one.objective == doctest::Approx(1));
  CHECK(one.speeds == std::vector<double>{1});
  CHECK(closed_form_chain(2, 1).objective == doctest::Approx(3 + 2 * std::sqrt(2.0)));
  ChainSolution three = closed_form_chain(3, 2);
  CHECK(three.objective == doctest::Approx(8.59).epsilon(1e-3));
  double sum = 0;
  for (double s : three.speeds)
    sum += s;
  CHECK(sum == doctest::Approx(2)); // unit works: energy = sum of speeds
  CHECK(three.speeds[0] > three.speeds[2]);
  CHECK_THROWS_AS(closed_form_chain(3, 1, 3.0), ParameterError);
}

TEST_CASE("schedule_from_order") {
  CpSolution sym = solve_cp(unit_pair(2.0), {{1}});
  Schedule s = schedule_from_order(unit_pair(2.0), {{1}}, sym.p);
  CHECK(objective(unit_pair(2.0), s) == doctest::Approx(2).epsilon(1e-7));

  Instance free = single_processor({0, 0.5}, {2, 1}, 3);
  CpSolution cf = solve_cp(free, {{1, 2}});
  Schedule sf = schedule_from_order(free, {{1, 2}}, cf.p);
  CHECK(validate_schedule(free, sf, free.energy_budget * (1 + 1e-9)).empty());
  CHECK(std::abs(objective(free, sf) - cf.objective) <= 1e-6 * cf.objective);

  // processor 2 must run job 1's Reduce before job 2's Map and idles meanwhile
  Instance cross = make_instance(2, 10, 2, {make_job(1, 1, 0, {map_on(1, 2), reduce_on(2, 1)}),
                                            make_job(2, 1, 0, {map_on(2, 1), reduce_on(1, 1)})});
  CpSolution cc = solve_cp(cross, {{1, 2}});
  Schedule sc = schedule_from_order(cross, {{1, 2}}, cc.p);
  CHECK(validate_schedule(cross, sc, cross.energy_budget * (1 + 1e-9)).empty());
  CHECK(objective(cross, sc) > cc.objective * (1 + 1e-6));
}

TEST_CASE("lower bound and exactness on random instances") {
  int checked = 0, exact = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = generate_instance(small_config(seed));
    for (const JobOrder &o : {fcfs_order(inst), smith_order(inst)}) {
      CpSolution cp = solve_cp(inst, o);
      REQUIRE(cp.converged);
      Schedule s = schedule_from_order(inst, o, cp.p);
      CHECK(validate_schedule(inst, s, inst.energy_budget * (1 + 1e-7)).empty());
      CHECK(cp.objective <= objective(inst, s) * (1 + 1e-9));
      ++checked;
    }
    // drop the precedence by zeroing Reduce work
    for (Job &j : inst.jobs)
      for (Task &t : j.tasks)
        if (t.kind == TaskKind::Reduce)
          t.volume = 0;
    JobOrder o = fcfs_order(inst);
    CpSolution cp = solve_cp(inst, o);
    Schedule s = schedule_from_order(inst, o, cp.p);
    CHECK(std::abs(objective(inst, s) - cp.objective) <= 1e-6 * cp.objective);
    ++exact;
  }
  CHECK(checked == 20);
  CHECK(exact == 10);
}

TEST_CASE("more energy never hurts") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = generate_instance(small_config(seed));
    JobOrder o = fcfs_order(inst);
    double base = solve_cp(inst, o).objective;
    inst.energy_budget *= 1.5;
    CHECK(solve_cp(inst, o).objective <= base * (1 + 1e-7));
  }
}

TEST_CASE("energy constraint is active") {
  GenConfig c = small_config(3);
  c.releases = ReleaseProtocol::Zero;
  for (std::uint64_t k = 0; k < 5; ++k) {
    Instance inst = generate_instance(c, k);
    CpSolution s = solve_cp(inst, smith_order(inst));
    CHECK(s.energy == doctest::Approx(inst.energy_budget).epsilon(1e-5));
  }
}

TEST_CASE("desk-size solve is fast and certified") {
  GenConfig c;
  c.n = 8;
  auto t0 = std::chrono::steady_clock::now();
  Instance inst = generate_instance(c);
  CpSolution s = solve_cp(inst, fcfs_order(inst));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(s.converged);
  CHECK(s.gap <= 1e-7);
  CHECK(secs < 5.0);
}
