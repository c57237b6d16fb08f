#include <algorithm>

#include "doctest.h"
#include "ipapprox/general_solver.hpp"
#include "ipapprox/generate.hpp"
#include "ipapprox/oracle.hpp"
#include "oracles.hpp"

using namespace ipapprox;

namespace {

GeneralIP g_example() { return GeneralIP{RatMatrix{{2, 3, 5}}, {10}, {1, 1, 1}, {0, 0, 0}, {3, 3, 2}}; }

ApproxParams with_eps(Rat eps) {
  ApproxParams p;
  p.epsilon = eps;
  return p;
}

// Objective of a mixed point by hand.
Rat model_objective(const MixedModel& m, const RatVector& v) {
  Rat total = 0;
  for (std::size_t j = 0; j < v.size(); ++j) total += m.lp.objective[j] * v[j];
  return total;
}

}  // namespace

TEST_CASE("build_mip1 examples") {
  SUBCASE("one shared box gives one integer variable") {
    GeneralIP g{RatMatrix{{1, 1, 1}}, {2}, {0, 0, 0}, {0, 0, 0}, {1, 1, 1}};
    auto part = partition_columns(g.H, make_rat(1, 2));
    auto mip = build_mip1(g, part);
    CHECK(mip.groups == 1);
    CHECK(mip.model.integer_vars.size() == 1);
    CHECK(mip.model.lp.lower[3] == 0);
    CHECK(mip.model.lp.upper[3] == 3);
  }
  SUBCASE("two boxes give two integer variables and m+2 rows") {
    GeneralIP g{RatMatrix{{1, make_rat(9, 10)}, {0, make_rat(1, 10)}}, {0, 0}, {0, 0}, {0, 0}, {1, 1}};
    auto mip = build_mip1(g, partition_columns(g.H, make_rat(1, 2)));
    CHECK(mip.model.integer_vars.size() == 2);
    CHECK(mip.model.lp.A.rows() == 4);
  }
}

TEST_CASE("property: original points embed into the mixed model") {
  testing::Rng rng(41);
  GenRng gen(41);
  for (int trial = 0; trial < 60; ++trial) {
    GeneralGenSpec spec;
    spec.m = static_cast<std::size_t>(rng.uniform(1, 3));
    spec.n = static_cast<std::size_t>(rng.uniform(1, 6));
    spec.bound_max = 3;
    const GeneralIP g = generate_general(spec, gen);
    const auto part = partition_columns(g.H, make_rat(1, static_cast<long>(rng.uniform(1, 5))));
    const auto mip = build_mip1(g, part);
    const auto oracle = brute_force_general(g);
    REQUIRE(oracle.feasible);
    RatVector point(mip.model.lp.A.cols());
    for (std::size_t j = 0; j < spec.n; ++j) point[j] = Rat(oracle.argmin[j]);
    for (std::size_t k = 0; k < part.groups.size(); ++k)
      for (std::size_t j : part.groups[k].members) point[spec.n + k] += Rat(oracle.argmin[j]);
    CHECK(is_feasible_point(mip.model.lp, point));
    CHECK(model_objective(mip.model, point) == oracle.opt);
    for (std::size_t k : mip.model.integer_vars) CHECK(k >= spec.n);
  }
}

TEST_CASE("restrict_lp2 on an integral mixed solution") {
  const GeneralIP g = g_example();
  const auto part = partition_columns(g.H, make_rat(1, 10));
  const auto mip = build_mip1(g, part);
  const auto mixed = solve_mip(mip.model);
  REQUIRE(mixed.status == MipStatus::Optimal);
  const auto lp2 = restrict_lp2(g, part, mixed);
  RatVector xstar(mixed.values.begin(), mixed.values.begin() + 3);
  CHECK(is_feasible_point(lp2, xstar));
  const auto vertex = solve_lp_vertex(lp2);
  REQUIRE(vertex.status == LpStatus::Optimal);
  CHECK(vertex.objective_value <= dot(g.w, xstar));
  CHECK(claim1_check(vertex, 1));
}

TEST_CASE("claim1_check counts fractional entries") {
  VertexSolution sol;
  sol.status = LpStatus::Optimal;
  sol.values = {1, 2, 3};
  CHECK(claim1_check(sol, 1));
  sol.values = {make_rat(1, 2), make_rat(1, 3), make_rat(1, 4)};
  CHECK_FALSE(claim1_check(sol, 1));
  CHECK(claim1_check(sol, 2));
}

TEST_CASE("greedy_group_round examples") {
  SUBCASE("two of three rounded up by weight") {
    auto plan = make_rounding_plan({0, 1, 2}, {make_rat(1, 2), make_rat(7, 10), make_rat(4, 5)}, {1, 2, 3});
    CHECK(plan.gamma == 2);
    CHECK(greedy_group_round(plan) == IntVector{1, 1, 0});
  }
  SUBCASE("integral group is unchanged") {
    auto plan = make_rounding_plan({0, 1}, {2, 3}, {1, 1});
    CHECK(plan.gamma == 0);
    CHECK(greedy_group_round(plan) == IntVector{2, 3});
  }
  SUBCASE("the cheaper member goes up") {
    auto plan = make_rounding_plan({0, 1}, {make_rat(1, 2), make_rat(1, 2)}, {2, 1});
    IntVector out = greedy_group_round(plan);
    // Output is aligned with plan.members, which is sorted by weight.
    IntVector by_index(2);
    for (std::size_t k = 0; k < 2; ++k) by_index[plan.members[k]] = out[k];
    CHECK(by_index == IntVector{0, 1});
  }
  SUBCASE("non-integral gamma is an invariant violation") {
    CHECK_THROWS_AS(make_rounding_plan({0}, {make_rat(1, 2)}, {1}), InvariantViolation);
  }
}

TEST_CASE("property: greedy rounding conserves the sum and does not raise the cost") {
  testing::Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform(1, 7));
    RatVector values(n);
    RatVector weights(n);
    std::vector<std::size_t> members(n);
    Rat sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
      members[k] = k;
      values[k] = make_rat(static_cast<long>(rng.uniform(-12, 12)), static_cast<long>(rng.uniform(1, 4)));
      weights[k] = Rat(static_cast<long>(rng.uniform(-3, 3)));
      sum += values[k];
    }
    // Make the total integral by adjusting the last entry.
    values[n - 1] += Rat(ceil(sum)) - sum;
    sum = Rat(ceil(sum));
    auto plan = make_rounding_plan(members, values, weights);
    IntVector out = greedy_group_round(plan);
    Rat total = 0;
    Rat cost = 0;
    Rat frac_cost = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = plan.members[k];
      CHECK((Rat(out[k]) == Rat(floor(values[j])) || Rat(out[k]) == Rat(ceil(values[j]))));
      total += Rat(out[k]);
      cost += weights[j] * Rat(out[k]);
      frac_cost += weights[j] * values[j];
    }
    CHECK(total == sum);
    CHECK(cost <= frac_cost);
    for (std::size_t k = 1; k < n; ++k) CHECK(weights[plan.members[k - 1]] <= weights[plan.members[k]]);
  }
}

TEST_CASE("solve_general examples") {
  SUBCASE("three-column equation") {
    auto r = solve_general(g_example(), with_eps(make_rat(1, 5)));
    REQUIRE(r.status == Status::Solved);
    CHECK(r.report.objective <= 2);
    const Rat act = 2 * Rat(r.x[0]) + 3 * Rat(r.x[1]) + 5 * Rat(r.x[2]);
    CHECK(abs(act - 10) <= 1);
    CHECK(r.report.bound == 1);
    CHECK(r.delta_used == make_rat(1, 10));
  }
  SUBCASE("fixed zero point") {
    auto r = solve_general(GeneralIP{RatMatrix{{1}}, {0}, {0}, {0}, {0}}, with_eps(make_rat(1, 2)));
    REQUIRE(r.status == Status::Solved);
    CHECK(r.x == IntVector{0});
    CHECK(r.report.max_abs_residual == 0);
  }
  SUBCASE("infeasible original still yields a near-feasible witness") {
    auto r = solve_general(GeneralIP{RatMatrix{{2}}, {3}, {1}, {0}, {5}}, with_eps(make_rat(1, 2)));
    REQUIRE(r.has_solution);
    CHECK((r.x == IntVector{1} || r.x == IntVector{2}));
    CHECK(abs(2 * Rat(r.x[0]) - 3) <= 1);
    CHECK(r.report.within_bound);
    CHECK(r.objective_guarantee_vacuous);
    CHECK(brute_force_general(GeneralIP{RatMatrix{{2}}, {3}, {1}, {0}, {5}}).feasible == false);
  }
  SUBCASE("rejects invalid input") {
    CHECK_THROWS_AS(solve_general(GeneralIP{RatMatrix{{2}}, {3}, {1}, {4}, {1}}, with_eps(1)), std::invalid_argument);
    CHECK_THROWS_AS(solve_general(g_example(), with_eps(0)), std::invalid_argument);
  }
}

TEST_CASE("property: solve_general against the oracle") {
  GenRng gen(43);
  const std::vector<Rat> eps{1, make_rat(1, 2), make_rat(1, 5)};
  std::size_t vertices = 0;
  PipelineObserver obs;
  obs.on_fractional_support = [&](std::string_view stage, const VertexSolution& v, std::size_t bound) {
    CHECK(stage == "general");
    CHECK(nonintegral_support(v).size() <= bound);
    ++vertices;
  };
  obs.on_lp_vertex = [&](const LinearProgram& lp, const VertexSolution& v) {
    const auto interior = strictly_interior_columns(lp, v.values);
    CHECK(is_nonsingular(lp.A.select_columns(interior)));
  };
  for (int trial = 0; trial < 60; ++trial) {
    GeneralGenSpec spec;
    spec.m = static_cast<std::size_t>(gen.uniform(1, 3));
    spec.n = static_cast<std::size_t>(gen.uniform(2, 7));
    spec.box_cap = 5e4;
    const GeneralIP g = generate_general(spec, gen);
    ApproxParams p = with_eps(gen.pick(eps));
    p.observer = &obs;
    const auto r = solve_general(g, p);
    const auto oracle = brute_force_general(g);
    REQUIRE(oracle.feasible);
    REQUIRE(r.status == Status::Solved);
    CHECK(r.report.objective <= oracle.opt);
    CHECK(r.report.within_bound);
    CHECK(r.report.bound == p.epsilon * inf_norm(g.H));
    for (std::size_t j = 0; j < spec.n; ++j) {
      CHECK(r.x[j] >= g.l[j]);
      CHECK(r.x[j] <= g.u[j]);
    }
    const auto again = solve_general(g, p);
    CHECK(again.x == r.x);
    CHECK(again.stats.lp_pivots == r.stats.lp_pivots);
  }
  CHECK(vertices >= 60);
}
