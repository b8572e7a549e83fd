#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "mrsched/discretization.hpp"
#include "mrsched/generator.hpp"
#include "mrsched/lp_relaxation.hpp"

using namespace testing;

TEST_CASE("model sizes") {
  SpeedGrid speeds = build_speed_grid(1, 2, 1);
  TimeGrid times = build_time_grid(1, 1, 4);
  REQUIRE(speeds.size() == 2);
  REQUIRE(times.u == 3);
  LpModel m = build_lp(unit_pair(), speeds, times);
  CHECK(m.y_vars.size() == 16);
  CHECK(m.problem.num_cols() == 19);
  CHECK(m.count_rows(LpRowKind::Precedence) == 4);
  CHECK(m.count_rows(LpRowKind::FullyExecuted) == 2);
  CHECK(m.count_rows(LpRowKind::EnergyBudget) == 1);
  CHECK_FALSE(m.infeasible_by_construction);

  Instance disjoint = make_instance(4, 2, 2, {make_job(1, 1, 0, {map_on(1, 1), reduce_on(2, 1)}),
                                              make_job(2, 1, 0, {map_on(3, 1), reduce_on(4, 1)})});
  LpModel d = build_lp(disjoint, speeds, times);
  CHECK(d.count_rows(LpRowKind::IntervalCapacity) == 4 * 4);

  CHECK_THROWS_AS(build_lp(unit_pair(), SpeedGrid{}, times), ParameterError);
}

TEST_CASE("release pinning and pruning") {
  SpeedGrid speeds = build_speed_grid(1, 2, 1);
  TimeGrid times = build_time_grid(1, 1, 4); // tau = 0 1 2 4 8
  LpModel m = build_lp(unit_pair(2, 1.5), speeds, times);
  for (const YVar &y : m.y_vars) {
    // intervals ending at or before the release are never created
    CHECK(times.tau[y.interval + 1] > 1.5);
    CHECK(y.pinned == (times.tau[y.interval] < 1.5));
  }

  LpModel late = build_lp(unit_pair(2, 5.0), speeds, times);
  CHECK(late.infeasible_by_construction);
  CHECK(solve_lp(late).status == LpSolveStatus::Infeasible);
}

TEST_CASE("LP objectives on hand-solved models") {
  SpeedGrid one = build_speed_grid(1, 1, 1);
  TimeGrid times = build_time_grid(1, 1, 4);

  SUBCASE("zero-volume instance") {
    Instance z = make_instance(2, 1, 2, {make_job(1, 1, 0, {map_on(1, 0), reduce_on(2, 0)})});
    auto sol = solve_lp(build_lp(z, one, times));
    REQUIRE(sol.status == LpSolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(0).epsilon(1e-12));
  }
  SUBCASE("unit speed, ample energy") {
    // both tasks may sit entirely in I_0; bound (3) gives 1/2 |I_0| (1/p + 1) = 1
    auto sol = solve_lp(build_lp(unit_pair(1e9), one, times));
    REQUIRE(sol.status == LpSolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("unit speed, release 1") {
    // I_0 is pinned; I_1 = (1,2] gives |I_1| tau_1 / p + |I_1| / 2 = 1.5
    auto sol = solve_lp(build_lp(unit_pair(1e9, 1.0), one, times));
    REQUIRE(sol.status == LpSolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(1.5).epsilon(1e-9));
  }
  SUBCASE("relaxation stays below the best schedule") {
    Instance inst = unit_pair(2.0);
    GridOptions o;
    Grids g = build_grids(inst, o);
    auto sol = solve_lp(build_lp(inst, g.speeds, g.times));
    REQUIRE(sol.status == LpSolveStatus::Optimal);
    CHECK(sol.objective <= 2.0 + 1e-9);
    CHECK(sol.objective > 0.0);
  }
}

TEST_CASE("residuals on random instances") {
  GenConfig c;
  c.m = 3;
  c.n = 3;
  c.maps_per_job = 1;
  c.reduces_per_job = 1;
  c.energy_budget = 30;
  for (std::uint64_t k = 0; k < 4; ++k) {
    Instance inst = generate_instance(c, k);
    GridOptions o;
    Grids g = build_grids(inst, o);
    LpModel m = build_lp(inst, g.speeds, g.times);
    auto sol = solve_lp(m);
    REQUIRE(sol.status == LpSolveStatus::Optimal);
    CHECK(sol.relative_gap <= 1e-6);
    CHECK(precedence_residual(inst, m, sol) <= 1e-7);
    CHECK(energy_residual(m, sol) <= 1e-7 * inst.energy_budget);
    for (double y : sol.y)
      CHECK(y >= -1e-9);
    auto prof = task_profiles(m, sol);
    for (std::size_t f = 0; f < prof.fraction.size(); ++f) {
      double total = 0;
      for (double x : prof.fraction[f])
        total += x;
      if (m.proc_time[f][0] > 0)
        CHECK(total == doctest::Approx(1).epsilon(1e-7));
    }
  }
}

TEST_CASE("simplex on a tiny textbook problem") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  LpProblem p;
  auto x = p.add_col(-3), y = p.add_col(-5);
  auto r1 = p.add_row(RowSense::LessEqual, 4), r2 = p.add_row(RowSense::LessEqual, 12),
       r3 = p.add_row(RowSense::LessEqual, 18);
  p.add_entry(r1, x, 1);
  p.add_entry(r2, y, 2);
  p.add_entry(r3, x, 3);
  p.add_entry(r3, y, 2);
  LpResult r = DenseSimplexSolver{}.solve(p, {});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-36));
  CHECK(r.x[0] == doctest::Approx(2));
  CHECK(r.x[1] == doctest::Approx(6));
  CHECK(primal_residual(p, r.x) <= 1e-9);

  LpProblem bad;
  auto z = bad.add_col(1);
  bad.add_entry(bad.add_row(RowSense::GreaterEqual, 2), z, 1);
  bad.add_entry(bad.add_row(RowSense::LessEqual, 1), z, 1);
  CHECK(DenseSimplexSolver{}.solve(bad, {}).status == LpStatus::Infeasible);

  std::ostringstream mps;
  write_free_mps(mps, p);
  CHECK(mps.str().find("ROWS") != std::string::npos);
  CHECK(mps.str().find("ENDATA") != std::string::npos);
}
