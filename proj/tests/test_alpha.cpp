#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mrsched/alpha_scheduler.hpp"
#include "mrsched/generator.hpp"
#include "mrsched/list_dispatch.hpp"
#include "mrsched/ratio_analysis.hpp"

using namespace testing;

namespace {

// Sets y so that task `flat` carries `mass` time units at speed index 0 in
// interval t.
void put_mass(const LpModel &m, FractionalLpSolution &sol, std::size_t flat,
              std::size_t t, double mass) {
  for (std::size_t k = 0; k < m.y_vars.size(); ++k)
    if (m.y_vars[k].task == flat && m.y_vars[k].speed == 0 && m.y_vars[k].interval == t) {
      sol.y[k] = mass / m.lengths[t];
      return;
    }
  FAIL("no such y variable");
}

} // namespace

TEST_CASE("alpha_point") {
  CHECK(alpha_point({0.3, 0.4, 0.3}, 0.5) == 1);
  CHECK(alpha_point({1.0}, 0.9) == 0);
  CHECK(alpha_point({0.3, 0.4, 0.3}, 0.71) == 2);
  // solver noise just below the threshold resolves downward
  CHECK(alpha_point({0.5 - 1e-11, 0.5}, 0.5) == 0);
  CHECK_THROWS_AS(alpha_point({0.2, 0.2}, 0.5), CertificationError);
}

TEST_CASE("build_plan") {
  Instance inst = make_instance(2, 100, 2, {make_job(1, 1, 0, {map_on(1, 7), reduce_on(2, 1)}),
                                            make_job(2, 1, 0, {map_on(1, 2), reduce_on(2, 1)})});
  SpeedGrid speeds = build_speed_grid(2, 2, 1);
  TimeGrid times = build_time_grid(1, 1, 4); // tau = 0 1 2 4 8
  LpModel m = build_lp(inst, speeds, times);
  FractionalLpSolution sol;
  sol.status = LpSolveStatus::Optimal;
  sol.y.assign(m.y_vars.size(), 0.0);
  put_mass(m, sol, 0, 2, 3.5); // v = 7 at speed 2 needs 3.5 time units
  put_mass(m, sol, 1, 3, 0.5);
  put_mass(m, sol, 2, 1, 1.0);
  put_mass(m, sol, 3, 3, 0.5);

  AlphaParams par{0.5, 1.0, 1.0, 1.0};
  AlphaPlan plan = build_plan(inst, m, sol, par);
  CHECK(plan.tasks[0].alpha_point == 2);
  CHECK(plan.tasks[0].processing_time == doctest::Approx(3.5));
  CHECK(plan.tasks[0].speed == doctest::Approx(2));
  CHECK(plan.tasks[0].availability == doctest::Approx(4));
  // job 2's Map has alpha-point 1, so it leads processor 1
  CHECK(plan.priority[0] == std::vector<std::size_t>{2, 0});
  // equal alpha-points: ascending job id
  CHECK(plan.priority[1] == std::vector<std::size_t>{1, 3});

  par.gamma = 2.0;
  AlphaPlan twice = build_plan(inst, m, sol, par);
  for (std::size_t f = 0; f < 4; ++f) {
    CHECK(twice.tasks[f].processing_time == doctest::Approx(2 * plan.tasks[f].processing_time));
    CHECK(twice.tasks[f].speed == doctest::Approx(plan.tasks[f].speed / 2));
  }

  sol.y.assign(m.y_vars.size(), 0.0);
  CHECK_THROWS_AS(build_plan(inst, m, sol, par), CertificationError);
}

TEST_CASE("list scheduling") {
  SUBCASE("single task waits for availability") {
    Instance inst = make_instance(2, 100, 2, {make_job(1, 1, 0, {map_on(1, 2), reduce_on(2, 0)})});
    Schedule s = list_dispatch(inst, {{0}, {}}, {1.0, 0.0}, {2.0, 0.0});
    CHECK(s.entries.size() == 2);
    CHECK(objective(inst, s) == doctest::Approx(3));
  }
  SUBCASE("precedence gate") {
    Instance inst = unit_pair(100);
    Schedule s = list_dispatch(inst, {{0}, {1}}, {0.0, 0.0}, {1.0, 1.0});
    for (const auto &e : s.entries)
      if (e.task.task == 1)
        CHECK(e.start == doctest::Approx(1));
    CHECK(objective(inst, s) == doctest::Approx(2));
  }
  SUBCASE("hand-traced two-job run") {
    Instance inst = make_instance(2, 100, 2, {make_job(1, 1, 0, {map_on(1, 2), reduce_on(2, 1)}),
                                              make_job(2, 1, 0, {map_on(2, 1), reduce_on(1, 1)})});
    // p1: J1 Map then J2 Reduce; p2: J1 Reduce then J2 Map
    Schedule s = list_dispatch(inst, {{0, 3}, {1, 2}}, {0, 0, 0.5, 0}, {2, 1, 1, 1});
    std::vector<double> start(4);
    for (const auto &e : s.entries)
      start[e.task.job * 2 + e.task.task] = e.start;
    CHECK(start[0] == doctest::Approx(0));
    CHECK(start[2] == doctest::Approx(0.5)); // J1 Reduce blocked, J2 Map goes first
    CHECK(start[1] == doctest::Approx(2));
    CHECK(start[3] == doctest::Approx(2));
    CHECK(validate_schedule(inst, s).empty());
    CHECK(objective(inst, s) == doctest::Approx(6));
  }
}

TEST_CASE("parameters") {
  CHECK(energy_augmentation_factor(0.6, no_augmentation_gamma(0.6, 2.5), 2.5) ==
        doctest::Approx(1));
  CHECK(ratio_bound(0.5, 1, 0, RatioVariant::General) == doctest::Approx(10));
  TimeGrid times = build_time_grid(0.1, 0.5, 10);
  CHECK_NOTHROW(make_alpha_params(0.5, 4, times, 1.0, 4.0));   // 0.1 < 0.125
  CHECK_THROWS_AS(make_alpha_params(0.5, 4, times, 1.0, 5.0), ParameterError); // 0.1 = 0.1
  CHECK_THROWS_AS(make_alpha_params(1.0, 4, times, 1.0, 1.0), ParameterError);
}

TEST_CASE("Jensen kernel holds on random vectors") {
  auto [l, r] = jensen_sides({1, 1}, {1, 2}, 3);
  CHECK(l == doctest::Approx(4.0 / 9));
  CHECK(r == doctest::Approx(0.625));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.01, 10), beta(2, 3);
  std::uniform_int_distribution<int> len(1, 6);
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    int n = len(rng);
    std::vector<double> a(n), s(n);
    for (int i = 0; i < n; ++i) {
      a[i] = pos(rng);
      s[i] = pos(rng);
    }
    auto [lhs, rhs] = jensen_sides(a, s, beta(rng));
    bad += lhs > rhs * (1 + 1e-12);
  }
  CHECK(bad == 0);
}

TEST_CASE("AlgoMR certificate on a random 4-job instance") {
  GenConfig c;
  c.m = 3;
  c.n = 4;
  c.maps_per_job = 1;
  c.reduces_per_job = 1;
  c.energy_budget = 40;
  c.seed = 21;
  Instance inst = generate_instance(c);
  AlgoMrOptions o;
  o.alpha = 0.72;
  o.gamma = 1 / (0.72 * 0.72);
  o.grids.delta = 0.5;
  AlgoMrRun run = run_algo_mr(inst, o);
  INFO(run.certificate.failures());
  CHECK(run.certificate.ok());
  CHECK(run.certificate.energy_factor == doctest::Approx(1));
  CHECK(run.certificate.ratio_variant == "general");
  CHECK(validate_schedule(inst, run.schedule, inst.energy_budget * (1 + 1e-9)).empty());
  for (const char *name : {"per-task energy", "total energy", "objective",
                           "alpha-point after first interval", "priority prefix",
                           "map completion", "schedule feasibility"}) {
    bool found = false;
    for (const auto &b : run.certificate.checks)
      found |= b.name == name;
    CHECK_MESSAGE(found, name);
  }
}

TEST_CASE("ratio variant follows the instance structure") {
  // zero-volume Reduce tasks: no precedence; zero releases: no_prec_no_release
  Instance inst = make_instance(2, 10, 2, {make_job(1, 1, 0, {map_on(1, 1), reduce_on(2, 0)}),
                                           make_job(2, 2, 0, {map_on(1, 2), reduce_on(2, 0)})});
  AlgoMrRun run = run_algo_mr(inst, {});
  CHECK(run.certificate.ratio_variant == "no_prec_no_release");
  CHECK(run.certificate.ok());
  inst.jobs[1].release = 0.3;
  CHECK(run_algo_mr(inst, {}).certificate.ratio_variant == "no_prec");

  Instance low = unit_pair(4);
  low.beta = 1.5;
  CHECK_FALSE(run_algo_mr(low, {}).certificate.certified_regime);
}
