#include <algorithm>

#include "doctest.h"
#include "ipapprox/generate.hpp"
#include "ipapprox/nfold_solver.hpp"
#include "ipapprox/oracle.hpp"
#include "oracles.hpp"

using namespace ipapprox;

namespace {

ApproxParams with_eps(Rat eps) {
  ApproxParams p;
  p.epsilon = eps;
  return p;
}

NonnegBlock unit_block(Rat bi, long u, Rat w) { return NonnegBlock{RatMatrix{{1}}, RatMatrix{{1}}, {bi}, {u}, {w}}; }

bool has_note(const ApproxResult& r, const std::string& text) {
  return std::any_of(r.notes.begin(), r.notes.end(), [&](const std::string& n) { return n.find(text) != std::string::npos; });
}

// Direct window check for a major vector.
bool in_window(const ScaledBlock& b, const ColumnSplit& split, const IntVector& x, const Rat& lo, const Rat& hi) {
  for (std::size_t r = 0; r < b.A.rows(); ++r) {
    Rat act = 0;
    for (std::size_t j = 0; j < x.size(); ++j) act += b.A(r, j) * Rat(split.lambda[j]) * Rat(x[j]);
    if (act < lo || act > hi) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("normalize_blocks examples") {
  SUBCASE("zero right-hand side fixes the touched column") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(NonnegBlock{RatMatrix{{1, 1}, {0, 3}}, RatMatrix{{1, 1}}, {2, 0}, {4, 4}, {0, 0}});
    inst.b0 = {1};
    auto blocks = normalize_blocks(inst);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].A.rows() == 1);
    CHECK(blocks[0].A(0, 0) == make_rat(1, 2));
    CHECK(blocks[0].A(0, 1) == make_rat(1, 2));
    CHECK(blocks[0].row_map == std::vector<std::size_t>{0});
    CHECK(blocks[0].fixed_zero_vars == std::vector<std::size_t>{1});
  }
  SUBCASE("an all-zero row with zero right-hand side is dropped") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(NonnegBlock{RatMatrix{{1, 0}, {0, 0}}, RatMatrix{{1, 1}}, {1, 0}, {4, 4}, {0, 0}});
    inst.b0 = {1};
    auto blocks = normalize_blocks(inst);
    CHECK(blocks[0].A.rows() == 1);
    CHECK(blocks[0].fixed_zero_vars.empty());
  }
  SUBCASE("plain scaling") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(NonnegBlock{RatMatrix{{3}}, RatMatrix{{1}}, {3}, {4}, {0}});
    inst.b0 = {1};
    CHECK(normalize_blocks(inst)[0].A(0, 0) == 1);
  }
}

TEST_CASE("classify_and_split examples") {
  const Rat psi = make_rat(1, 4);
  ScaledBlock b;
  b.A = RatMatrix{{make_rat(1, 5), make_rat(1, 2), 0}, {make_rat(1, 10), 0, 0}};
  b.D = RatMatrix(1, 3);
  b.u = {3, 3, 3};
  b.w = {0, 0, 0};
  CHECK_THROWS_AS(classify_and_split(b, psi), UnsupportedInstance);
  b.fixed_zero_vars = {2};
  auto split = classify_and_split(b, psi);
  CHECK(split.kind[0] == ColumnKind::Small);
  CHECK(split.lambda[0] == 2);
  CHECK(split.major_upper[0] == 1);
  CHECK(split.minor_upper[0] == 1);
  CHECK(split.kind[1] == ColumnKind::Big);
  CHECK(split.lambda[1] == 1);
  CHECK(split.major_upper[2] == 0);
  CHECK(split.minor_upper[2] == 0);
}

TEST_CASE("enumerate_major_configs examples") {
  ScaledBlock b;
  b.A = RatMatrix{{make_rat(1, 2)}};
  b.D = RatMatrix{{1}};
  b.u = {5};
  b.w = {0};
  auto split = classify_and_split(b, make_rat(1, 8));
  auto configs = enumerate_major_configs(b, split, make_rat(1, 2), 1000);
  CHECK(configs == std::vector<IntVector>{{2}});

  b.u = {1};
  split = classify_and_split(b, make_rat(1, 8));
  CHECK(enumerate_major_configs(b, split, make_rat(1, 2), 1000).empty());

  b.u = {5};
  split = classify_and_split(b, make_rat(1, 8));
  CHECK_THROWS_AS(enumerate_major_configs(b, split, Rat(1), Rat(1), 1), ResourceLimitError);
}

TEST_CASE("property: exact window equals direct enumeration") {
  testing::Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sa = static_cast<std::size_t>(rng.uniform(1, 2));
    const auto t = static_cast<std::size_t>(rng.uniform(1, 3));
    ScaledBlock b;
    b.A = RatMatrix(sa, t);
    for (std::size_t r = 0; r < sa; ++r)
      for (std::size_t j = 0; j < t; ++j) b.A(r, j) = make_rat(static_cast<long>(rng.uniform(0, 3)), static_cast<long>(rng.uniform(1, 3)));
    for (std::size_t j = 0; j < t; ++j) {
      if (b.A(0, j) == 0) b.A(0, j) = make_rat(1, 2);
      b.u.push_back(rng.uniform(0, 4));
      b.w.push_back(0);
    }
    b.D = RatMatrix(1, t);
    const Rat psi = make_rat(1, 100);  // every column big
    const auto split = classify_and_split(b, psi);
    const Rat lo = make_rat(static_cast<long>(rng.uniform(2, 4)), 4);
    const Rat hi = lo + make_rat(static_cast<long>(rng.uniform(0, 2)), 4);
    const auto got = enumerate_major_configs(b, split, lo, hi, 1'000'000);

    std::vector<IntVector> want;
    IntVector x(t, Int(0));
    for (;;) {
      if (in_window(b, split, x, lo, hi)) want.push_back(x);
      std::size_t j = 0;
      while (j < t && x[j] == split.major_upper[j]) x[j++] = 0;
      if (j == t) break;
      x[j] += 1;
    }
    std::vector<IntVector> sorted_got = got;
    std::sort(sorted_got.begin(), sorted_got.end());
    std::sort(want.begin(), want.end());
    CHECK(sorted_got == want);
  }
}

TEST_CASE("property: split invariants and minor smallness") {
  testing::Rng rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sa = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto t = static_cast<std::size_t>(rng.uniform(1, 3));
    ScaledBlock b;
    b.A = RatMatrix(sa, t);
    for (std::size_t r = 0; r < sa; ++r)
      for (std::size_t j = 0; j < t; ++j) b.A(r, j) = make_rat(static_cast<long>(rng.uniform(0, 3)), static_cast<long>(rng.uniform(1, 60)));
    for (std::size_t j = 0; j < t; ++j) {
      if (b.A(0, j) == 0) b.A(0, j) = make_rat(1, 60);
      b.u.push_back(rng.uniform(0, 9));
      b.w.push_back(0);
    }
    b.D = RatMatrix(1, t);
    const Rat eps = make_rat(1, static_cast<long>(rng.uniform(1, 5)));
    const Rat psi = eps / Rat(static_cast<long>(4 * t));
    const auto split = classify_and_split(b, psi);
    RatVector minor_total(sa);
    for (std::size_t j = 0; j < t; ++j) {
      Rat colmax = 0;
      for (std::size_t r = 0; r < sa; ++r) colmax = std::max(colmax, b.A(r, j));
      const Int lambda = split.lambda[j];
      if (split.kind[j] == ColumnKind::Big) {
        CHECK(colmax >= psi);
        CHECK(lambda == 1);
      } else {
        CHECK(colmax < psi);
        CHECK(Rat(lambda) * colmax >= psi);
        CHECK(Rat(lambda - 1) * colmax < psi);
        CHECK(Rat(lambda) * colmax <= 2 * psi);
      }
      CHECK(split.major_upper[j] == b.u[j] / lambda);
      CHECK(split.minor_upper[j] == std::min(Int(lambda - 1), b.u[j]));
      for (std::size_t r = 0; r < sa; ++r) minor_total[r] += b.A(r, j) * Rat(split.minor_upper[j]);
      // Every value in [0, u] decomposes into an in-range major and minor part.
      for (Int v = 0; v <= b.u[j]; ++v) {
        const Int major = v / lambda;
        const Int minor = v % lambda;
        CHECK(lambda * major + minor == v);
        CHECK(major <= split.major_upper[j]);
        CHECK(minor <= split.minor_upper[j]);
      }
    }
    for (const auto& m : minor_total) CHECK(m <= eps / 2);
  }
}

TEST_CASE("build_mip6 examples") {
  auto assemble = [](const NFoldNonnegInstance& inst, const Rat& eps) {
    const auto blocks = normalize_blocks(inst);
    const std::size_t t = blocks[0].D.cols();
    const Rat psi = eps / Rat(static_cast<long>(4 * t));
    std::vector<ColumnSplit> splits;
    std::vector<std::vector<IntVector>> configs;
    for (const auto& b : blocks) {
      splits.push_back(classify_and_split(b, psi));
      configs.push_back(enumerate_major_configs(b, splits.back(), eps, 100000));
    }
    std::vector<std::size_t> rows(inst.b0.size());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    const auto norm = *normalize_configs(major_instance(blocks, splits, configs, rows, inst.b0));
    const auto part = partition_config_columns(norm.dcal, make_rat(1, 4));
    return std::make_tuple(splits, norm, build_mip6(blocks, splits, rows, norm, part, make_rat(1, 4)));
  };

  SUBCASE("no small columns means no minor variables") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(unit_block(1, 5, 1));
    inst.blocks.push_back(unit_block(1, 5, 1));
    inst.b0 = {2};
    auto [splits, norm, mip6] = assemble(inst, make_rat(1, 2));
    CHECK(mip6.minor.empty());
    CHECK(mip6.cm.model.integer_vars.size() == mip6.cm.types * norm.tau);
  }
  SUBCASE("one small column") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(NonnegBlock{RatMatrix{{10, 1}}, RatMatrix{{1, 1}}, {20}, {3, 3}, {1, 1}});
    inst.b0 = {3};
    auto [splits, norm, mip6] = assemble(inst, make_rat(1, 2));
    CHECK(splits[0].kind[1] == ColumnKind::Small);
    CHECK(splits[0].lambda[1] == 2);
    CHECK(splits[0].minor_upper[1] == 1);
    CHECK(splits[0].major_upper[1] == 1);
    REQUIRE(mip6.minor.size() == 1);
    CHECK(mip6.minor[0].block == 0);
    CHECK(mip6.minor[0].column == 1);
    CHECK(mip6.cm.model.integer_vars.size() == mip6.cm.types * norm.tau + mip6.minor_part.groups.size());
  }
}

TEST_CASE("solve_nfold examples") {
  SUBCASE("single block cannot reach the coupling value") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(unit_block(1, 5, 1));
    inst.b0 = {2};
    auto r = solve_nfold(inst, with_eps(make_rat(1, 2)));
    CHECK_FALSE(brute_force_nfold(inst).feasible);
    CHECK(r.status == Status::Infeasible);
    REQUIRE(r.has_solution);
    CHECK(r.x == IntVector{1});
    CHECK(r.report.residual[0] == -1);
    CHECK(r.report.within_bound);
    CHECK(r.objective_guarantee_vacuous);
  }
  SUBCASE("two unit blocks") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(unit_block(1, 5, 1));
    inst.blocks.push_back(unit_block(1, 5, 1));
    inst.b0 = {2};
    auto r = solve_nfold(inst, with_eps(make_rat(1, 2)));
    REQUIRE(r.status == Status::Solved);
    CHECK(r.x == IntVector{1, 1});
    CHECK(r.report.max_abs_residual == 0);
    CHECK(r.report.objective == 2);
    CHECK(brute_force_nfold(inst).opt == 2);
  }
  SUBCASE("threshold boundary counts as big") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(NonnegBlock{RatMatrix{{make_rat(1, 10), 1}}, RatMatrix{{1, 1}}, {1}, {3, 3}, {1, 1}});
    inst.b0 = {1};
    auto r = solve_nfold(inst, with_eps(make_rat(4, 5)));
    CHECK(has_note(r, "every column is big"));
    REQUIRE(r.status == Status::Solved);
    CHECK(r.report.within_bound);
  }
  SUBCASE("unfixed zero column is unsupported") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(NonnegBlock{RatMatrix{{1, 0}}, RatMatrix{{1, 1}}, {1}, {3, 3}, {1, 1}});
    inst.b0 = {1};
    CHECK_THROWS_AS(solve_nfold(inst, with_eps(make_rat(1, 2))), UnsupportedInstance);
  }
  SUBCASE("all bounds zero") {
    NFoldNonnegInstance inst;
    inst.blocks.push_back(unit_block(0, 0, 1));
    inst.b0 = {0};
    CHECK(brute_force_nfold(inst).opt == 0);
    inst.b0 = {1};
    CHECK_FALSE(brute_force_nfold(inst).feasible);
  }
}

TEST_CASE("property: solve_nfold against the oracle") {
  GenRng gen(63);
  const std::vector<Rat> eps{1, make_rat(1, 2), make_rat(1, 5)};
  std::size_t small_cases = 0;
  PipelineObserver obs;
  obs.on_fractional_support = [&](std::string_view, const VertexSolution& v, std::size_t bound) {
    CHECK(nonintegral_support(v).size() <= bound);
  };
  for (int trial = 0; trial < 60; ++trial) {
    NonnegGenSpec spec;
    spec.blocks = static_cast<std::size_t>(gen.uniform(1, 4));
    spec.sa = static_cast<std::size_t>(gen.uniform(1, 2));
    spec.sd = static_cast<std::size_t>(gen.uniform(1, 2));
    spec.t = static_cast<std::size_t>(gen.uniform(1, 2));
    const auto inst = generate_nonneg(spec, gen);
    ApproxParams p = with_eps(gen.pick(eps));
    p.observer = &obs;
    const auto r = solve_nfold(inst, p);
    const auto oracle = brute_force_nfold(inst);
    REQUIRE(oracle.feasible);
    REQUIRE(r.status == Status::Solved);
    CHECK(r.report.within_bound);
    CHECK(r.report.objective <= oracle.opt);
    if (has_note(r, "small columns")) ++small_cases;

    // Independent window check on the original data.
    const RatVector act = nonneg_activity(inst, r.x);
    const RatVector rhs = nonneg_rhs(inst);
    for (std::size_t k = 0; k < act.size(); ++k) {
      CHECK(act[k] >= (1 - p.epsilon) * rhs[k]);
      CHECK(act[k] <= (1 + p.epsilon) * rhs[k]);
    }

    // The oracle's major parts are inside the enumerated windows.
    const auto blocks = normalize_blocks(inst);
    const Rat psi = p.epsilon / Rat(static_cast<long>(4 * spec.t));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto split = classify_and_split(blocks[i], psi);
      const auto configs = enumerate_major_configs(blocks[i], split, p.epsilon, 1'000'000);
      IntVector major(spec.t);
      for (std::size_t j = 0; j < spec.t; ++j) major[j] = oracle.argmin[i * spec.t + j] / split.lambda[j];
      CHECK(std::find(configs.begin(), configs.end(), major) != configs.end());
    }
  }
  CHECK(small_cases > 0);
}
