#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "ipapprox/config_solver.hpp"
#include "ipapprox/generate.hpp"
#include "ipapprox/oracle.hpp"
#include "oracles.hpp"

using namespace ipapprox;

namespace {

ApproxParams with_eps(Rat eps) {
  ApproxParams p;
  p.epsilon = eps;
  return p;
}

NFoldConfigInstance two_block_example() {
  NFoldConfigInstance inst;
  inst.blocks.push_back(ConfigBlock{RatMatrix{{1}}, {{0}, {1}}, {1}});
  inst.blocks.push_back(ConfigBlock{RatMatrix{{1}}, {{0}, {1}}, {5}});
  inst.b0 = {1};
  return inst;
}

// Cheapest 0/1 point of the restriction by trying every subset.
std::optional<Rat> brute_transport(const AssignmentRestriction& r) {
  const std::size_t n = r.cost.size();
  std::optional<Rat> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    RatVector rows(r.block_rows);
    RatVector cols(r.column_rows);
    Rat cost = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (((mask >> v) & 1U) == 0) continue;
      rows[r.var_block[v]] += 1;
      cols[r.var_column[v]] += 1;
      cost += r.cost[v];
    }
    if (rows != r.block_rhs || cols != r.column_rhs) continue;
    if (!best || cost < *best) best = cost;
  }
  return best;
}

struct TuCheck {
  std::size_t calls = 0;
  void operator()(const AssignmentRestriction& r, const RatVector& fractional, const std::vector<int>& rounded) {
    ++calls;
    REQUIRE(rounded.size() == r.cost.size());
    RatVector rows(r.block_rows);
    RatVector cols(r.column_rows);
    Rat cost = 0;
    Rat frac_cost = 0;
    for (std::size_t v = 0; v < rounded.size(); ++v) {
      CHECK((rounded[v] == 0 || rounded[v] == 1));
      rows[r.var_block[v]] += rounded[v];
      cols[r.var_column[v]] += rounded[v];
      cost += r.cost[v] * rounded[v];
      frac_cost += r.cost[v] * fractional[v];
    }
    CHECK(rows == r.block_rhs);
    CHECK(cols == r.column_rhs);
    CHECK(cost <= frac_cost);
  }
};

}  // namespace

TEST_CASE("normalize_configs examples") {
  NFoldConfigInstance inst;
  inst.blocks.push_back(ConfigBlock{RatMatrix{{1, 2}}, {{1, 1}, {0, 1}, {1, 1}}, {1, 0}});
  inst.blocks.push_back(ConfigBlock{RatMatrix{{1, 2}}, {{2, 0}}, {1, 0}});
  inst.b0 = {5};
  auto norm = normalize_configs(inst);
  REQUIRE(norm.has_value());
  CHECK(norm->tau == 2);
  CHECK(norm->padded.blocks[0].configs == std::vector<IntVector>{{1, 1}, {0, 1}});
  CHECK(norm->padded.blocks[1].configs == std::vector<IntVector>{{2, 0}, {2, 0}});
  CHECK(norm->dcal[0](0, 0) == 3);
  CHECK(norm->cost[0] == RatVector{1, 0});
  CHECK(norm->origin[0] == std::vector<std::size_t>{0, 1});

  inst.blocks[1].configs.clear();
  CHECK_FALSE(normalize_configs(inst).has_value());
}

TEST_CASE("build_mip4 examples") {
  SUBCASE("a single block with one configuration is forced") {
    NFoldConfigInstance inst;
    inst.blocks.push_back(ConfigBlock{RatMatrix{{1}}, {{3}}, {2}});
    inst.b0 = {3};
    auto norm = *normalize_configs(inst);
    auto part = partition_config_columns(norm.dcal, make_rat(1, 2));
    auto cm = build_mip4(norm, part);
    auto sol = solve_mip(cm.model);
    REQUIRE(sol.status == MipStatus::Optimal);
    CHECK(sol.values[cm.z_col(0, 0)] == 1);
    CHECK(sol.values[cm.y_col(0, 0)] == 1);
    CHECK(sol.objective_value == 6);
  }
  SUBCASE("identical blocks share linking rows") {
    auto inst = two_block_example();
    inst.blocks[1].weights = {1};
    auto norm = *normalize_configs(inst);
    auto part = partition_config_columns(norm.dcal, make_rat(1, 2));
    auto cm = build_mip4(norm, part);
    CHECK(cm.types == 1);
    CHECK(cm.model.lp.A.rows() == 1 + norm.tau + 2);
    CHECK(cm.model.integer_vars.size() == norm.tau);
  }
}

TEST_CASE("property: choice functions embed into MIP4") {
  GenRng gen(51);
  for (int trial = 0; trial < 40; ++trial) {
    ConfigGenSpec spec;
    spec.blocks = static_cast<std::size_t>(gen.uniform(1, 5));
    spec.s = static_cast<std::size_t>(gen.uniform(1, 2));
    spec.t = static_cast<std::size_t>(gen.uniform(1, 2));
    const auto inst = generate_config(spec, gen);
    const auto oracle = brute_force_config(inst);
    REQUIRE(oracle.feasible);
    const auto norm = *normalize_configs(inst);
    const auto part = partition_config_columns(norm.dcal, make_rat(1, static_cast<long>(gen.uniform(1, 4))));
    const auto cm = build_mip4(norm, part);
    RatVector point(cm.model.lp.A.cols());
    for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
      const IntVector& chosen = inst.blocks[i].configs[oracle.choices[i]];
      const auto& padded = norm.padded.blocks[i].configs;
      const std::size_t phi = static_cast<std::size_t>(std::find(padded.begin(), padded.end(), chosen) - padded.begin());
      REQUIRE(phi < norm.tau);
      point[cm.z_col(i, phi)] = 1;
      point[cm.y_col(part.block_type[i], phi)] += 1;
    }
    CHECK(is_feasible_point(cm.model.lp, point));
    CHECK(dot(cm.model.lp.objective, point) == oracle.opt);
  }
}

TEST_CASE("tu_round examples") {
  SUBCASE("two by two") {
    AssignmentRestriction r{2, 2, {0, 0, 1, 1}, {0, 1, 0, 1}, {1, 2, 2, 1}, {1, 1}, {1, 1}};
    CHECK(tu_round(r) == std::vector<int>{1, 0, 0, 1});
  }
  SUBCASE("forced by the column marginals") {
    AssignmentRestriction r{1, 2, {0, 0}, {0, 1}, {5, 3}, {1}, {0, 1}};
    CHECK(tu_round(r) == std::vector<int>{0, 1});
  }
  SUBCASE("empty restriction") {
    AssignmentRestriction r;
    CHECK(tu_round(r).empty());
  }
  SUBCASE("fractional marginal is rejected") {
    AssignmentRestriction r{1, 1, {0}, {0}, {1}, {make_rat(1, 2)}, {make_rat(1, 2)}};
    CHECK_THROWS_AS(tu_round(r), InvariantViolation);
  }
}

TEST_CASE("property: tu_round matches the cheapest integral transportation") {
  testing::Rng rng(52);
  for (int trial = 0; trial < 80; ++trial) {
    const auto blocks = static_cast<std::size_t>(rng.uniform(1, 5));
    const auto columns = static_cast<std::size_t>(rng.uniform(1, 4));
    // Two assignments with the same column counts; their average is a
    // fractional point with integral marginals.
    std::vector<std::size_t> first(blocks);
    for (auto& c : first) c = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(columns) - 1));
    std::vector<std::size_t> second = first;
    for (std::size_t k = blocks; k > 1; --k) std::swap(second[k - 1], second[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(k) - 1))]);
    AssignmentRestriction r;
    r.block_rows = blocks;
    r.column_rows = columns;
    r.block_rhs.assign(blocks, 1);
    r.column_rhs.assign(columns, 0);
    RatVector fractional;
    for (std::size_t i = 0; i < blocks; ++i) {
      r.column_rhs[first[i]] += 1;
      for (std::size_t c = 0; c < columns; ++c) {
        const int weight = (first[i] == c ? 1 : 0) + (second[i] == c ? 1 : 0);
        if (weight == 0 && !rng.coin()) continue;
        r.var_block.push_back(i);
        r.var_column.push_back(c);
        r.cost.push_back(Rat(static_cast<long>(rng.uniform(-4, 6))));
        fractional.push_back(make_rat(weight, 2));
      }
    }
    const auto rounded = tu_round(r);
    TuCheck check;
    check(r, fractional, rounded);
    Rat cost = 0;
    for (std::size_t v = 0; v < rounded.size(); ++v) cost += r.cost[v] * rounded[v];
    const auto best = brute_transport(r);
    REQUIRE(best.has_value());
    CHECK(cost == *best);
  }
}

TEST_CASE("solve_nfold_config examples") {
  SUBCASE("two blocks, cheaper block takes the unit") {
    auto r = solve_nfold_config(two_block_example(), with_eps(make_rat(1, 2)));
    REQUIRE(r.status == Status::Solved);
    CHECK(r.x == IntVector{1, 0});
    CHECK(r.choices == std::vector<std::size_t>{1, 0});
    CHECK(r.report.objective == 1);
    CHECK(r.report.max_abs_residual == 0);
    CHECK(brute_force_config(two_block_example()).opt == 1);
  }
  SUBCASE("single zero configuration") {
    NFoldConfigInstance inst;
    inst.blocks.push_back(ConfigBlock{RatMatrix{{1}}, {{0}}, {1}});
    inst.b0 = {0};
    auto r = solve_nfold_config(inst, with_eps(make_rat(1, 2)));
    REQUIRE(r.status == Status::Solved);
    CHECK(r.x == IntVector{0});
    CHECK(r.report.max_abs_residual == 0);
  }
  SUBCASE("large gap cannot be closed") {
    NFoldConfigInstance inst;
    inst.blocks.push_back(ConfigBlock{RatMatrix{{1}}, {{0}}, {1}});
    inst.b0 = {10};
    auto r = solve_nfold_config(inst, with_eps(make_rat(1, 10)));
    CHECK(r.status == Status::NearFeasibilityUnattainable);
    REQUIRE(r.has_solution);
    CHECK(r.report.max_abs_residual == 10);
    CHECK_FALSE(r.report.within_bound);
    CHECK(r.objective_guarantee_vacuous);
  }
  SUBCASE("empty configuration set is infeasible") {
    NFoldConfigInstance inst;
    inst.blocks.push_back(ConfigBlock{RatMatrix{{1}}, {}, {1}});
    inst.b0 = {0};
    auto r = solve_nfold_config(inst, with_eps(make_rat(1, 2)));
    CHECK(r.status == Status::Infeasible);
    CHECK_FALSE(r.has_solution);
  }
}

TEST_CASE("property: solve_nfold_config against the oracle") {
  GenRng gen(53);
  const std::vector<Rat> eps{1, make_rat(1, 2), make_rat(1, 5)};
  TuCheck tu;
  std::size_t supports = 0;
  std::size_t ranks = 0;
  std::size_t tau_seen = 0;
  std::size_t s_seen = 0;
  PipelineObserver obs;
  obs.on_tu_round = std::ref(tu);
  obs.on_fractional_support = [&](std::string_view, const VertexSolution& v, std::size_t bound) {
    CHECK(bound == s_seen * (2 * tau_seen + 1));
    CHECK(nonintegral_support(v).size() <= bound);
    ++supports;
  };
  obs.on_group_rank = [&](std::size_t rank, std::size_t tau) {
    CHECK(rank <= 2 * tau);
    ++ranks;
  };
  for (int trial = 0; trial < 60; ++trial) {
    ConfigGenSpec spec;
    spec.blocks = static_cast<std::size_t>(gen.uniform(1, 8));
    spec.s = static_cast<std::size_t>(gen.uniform(1, 2));
    spec.t = static_cast<std::size_t>(gen.uniform(1, 2));
    const auto inst = generate_config(spec, gen);
    ApproxParams p = with_eps(gen.pick(eps));
    p.observer = &obs;
    if (trial % 2 == 1) p.delta_override = make_rat(1, static_cast<long>(gen.uniform(1, 2)));
    tau_seen = normalize_configs(inst)->tau;
    s_seen = spec.s;
    const auto r = solve_nfold_config(inst, p);
    const auto oracle = brute_force_config(inst);
    REQUIRE(oracle.feasible);
    REQUIRE(r.status == Status::Solved);
    CHECK(r.report.objective <= oracle.opt);
    CHECK(r.report.within_bound);
    std::size_t off = 0;
    for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
      IntVector xi(r.x.begin() + static_cast<std::ptrdiff_t>(off), r.x.begin() + static_cast<std::ptrdiff_t>(off + spec.t));
      CHECK(inst.blocks[i].configs[r.choices[i]] == xi);
      off += spec.t;
    }
  }
  CHECK(supports >= 60);
  CHECK(tu.calls > 0);
  CHECK(ranks > 0);
}
