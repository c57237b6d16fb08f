#include "ipapprox/nfold_solver.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ipapprox/errors.hpp"
#include "ipapprox/general_solver.hpp"
#include "ipapprox/witness.hpp"

namespace ipapprox {

std::vector<ScaledBlock> normalize_blocks(const NFoldNonnegInstance& inst) {
  std::vector<ScaledBlock> out;
  for (const auto& blk : inst.blocks) {
    ScaledBlock sb;
    sb.D = blk.D;
    sb.u = blk.u;
    sb.w = blk.w;
    std::set<std::size_t> fixed;
    std::vector<RatVector> rows;
    for (std::size_t r = 0; r < blk.A.rows(); ++r) {
      const auto row = blk.A.row(r);
      if (sgn(blk.bi[r]) == 0) {
        for (std::size_t j = 0; j < row.size(); ++j)
          if (sgn(row[j]) != 0) fixed.insert(j);
        continue;
      }
      RatVector scaled(row.begin(), row.end());
      for (auto& e : scaled) e /= blk.bi[r];
      rows.push_back(std::move(scaled));
      sb.row_map.push_back(r);
    }
    sb.A = RatMatrix::from_rows(rows, blk.A.cols());
    sb.fixed_zero_vars.assign(fixed.begin(), fixed.end());
    out.push_back(std::move(sb));
  }
  return out;
}

namespace {

bool is_fixed(const ScaledBlock& b, std::size_t j) {
  return std::binary_search(b.fixed_zero_vars.begin(), b.fixed_zero_vars.end(), j);
}

}  // namespace

ColumnSplit classify_and_split(const ScaledBlock& block, const Rat& psi) {
  const std::size_t t = block.A.cols();
  ColumnSplit split;
  for (std::size_t j = 0; j < t; ++j) {
    if (is_fixed(block, j)) {
      split.kind.push_back(ColumnKind::Big);
      split.lambda.emplace_back(1);
      split.major_upper.emplace_back(0);
      split.minor_upper.emplace_back(0);
      continue;
    }
    Rat top = 0;
    for (std::size_t r = 0; r < block.A.rows(); ++r) top = std::max(top, block.A(r, j));
    if (sgn(top) == 0) {
      throw UnsupportedInstance("ZeroColumnUnsupported: column " + std::to_string(j) +
                                " of A is zero on every row with a positive right-hand side");
    }
    if (top >= psi) {
      split.kind.push_back(ColumnKind::Big);
      split.lambda.emplace_back(1);
      split.major_upper.push_back(block.u[j]);
      split.minor_upper.emplace_back(0);
      continue;
    }
    const Int lambda = ceil(Rat(psi / top));
    split.kind.push_back(ColumnKind::Small);
    split.lambda.push_back(lambda);
    split.major_upper.push_back(block.u[j] / lambda);
    split.minor_upper.push_back(std::min(Int(lambda - 1), block.u[j]));
  }
  return split;
}

std::vector<IntVector> enumerate_major_configs(const ScaledBlock& block, const ColumnSplit& split,
                                               const Rat& lo, const Rat& hi, std::uint64_t limit) {
  const std::size_t t = block.A.cols();
  const std::size_t rows = block.A.rows();
  std::vector<RatVector> unit(t, RatVector(rows));
  for (std::size_t j = 0; j < t; ++j)
    for (std::size_t r = 0; r < rows; ++r) unit[j][r] = block.A(r, j) * Rat(split.lambda[j]);

  std::vector<IntVector> out;
  IntVector x(t, Int(0));
  RatVector activity(rows, Rat(0));
  std::uint64_t nodes = 0;
  // Entries are nonnegative, so exceeding `hi` on any row prunes the branch.
  auto over = [&] {
    for (std::size_t r = 0; r < rows; ++r)
      if (activity[r] > hi) return true;
    return false;
  };
  std::function<void(std::size_t)> descend = [&](std::size_t j) {
    if (++nodes > limit) {
      throw ResourceLimitError("major configuration enumeration exceeded " + std::to_string(limit) + " nodes");
    }
    if (j == t) {
      for (std::size_t r = 0; r < rows; ++r)
        if (activity[r] < lo) return;
      out.push_back(x);
      return;
    }
    for (Int v = 0; v <= split.major_upper[j]; ++v) {
      x[j] = v;
      if (v > 0)
        for (std::size_t r = 0; r < rows; ++r) activity[r] += unit[j][r];
      if (over()) break;
      descend(j + 1);
    }
    for (std::size_t r = 0; r < rows; ++r) activity[r] -= unit[j][r] * Rat(x[j]);
    x[j] = 0;
  };
  descend(0);
  return out;
}

std::vector<IntVector> enumerate_major_configs(const ScaledBlock& block, const ColumnSplit& split,
                                               const Rat& epsilon, std::uint64_t limit) {
  return enumerate_major_configs(block, split, 1 - epsilon / 2, 1 + epsilon / 2, limit);
}

namespace {

// Config instance over major vectors: D^i λ and w^i λ folded in, coupling
// restricted to `rows`.
std::string join(const std::vector<std::string>& parts) {
  std::ostringstream out;
  for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? "; " : "") << parts[i];
  return out.str();
}

}  // namespace

NFoldConfigInstance major_instance(const std::vector<ScaledBlock>& blocks, const std::vector<ColumnSplit>& splits,
                                   const std::vector<std::vector<IntVector>>& configs,
                                   const std::vector<std::size_t>& rows, const RatVector& b0) {
  NFoldConfigInstance ci;
  for (std::size_t r : rows) ci.b0.push_back(b0[r]);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::size_t t = blocks[i].D.cols();
    ConfigBlock cb;
    cb.D = RatMatrix(rows.size(), t);
    for (std::size_t j = 0; j < t; ++j) {
      const Rat lambda(splits[i].lambda[j]);
      for (std::size_t k = 0; k < rows.size(); ++k) cb.D(k, j) = blocks[i].D(rows[k], j) * lambda;
      cb.weights.push_back(blocks[i].w[j] * lambda);
    }
    cb.configs = configs[i];
    ci.blocks.push_back(std::move(cb));
  }
  return ci;
}

Mip6 build_mip6(const std::vector<ScaledBlock>& blocks, const std::vector<ColumnSplit>& splits,
                const std::vector<std::size_t>& rows, const NormalizedConfigs& norm,
                const ConfigBoxPartition& part, const Rat& delta2) {
  Mip6 out;
  out.cm = build_mip4(norm, part);
  const std::size_t s = rows.size();
  std::vector<RatVector> minor_cols;
  Rat scale2 = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = 0; j < blocks[i].D.cols(); ++j) {
      if (splits[i].kind[j] != ColumnKind::Small || sgn(splits[i].minor_upper[j]) == 0) continue;
      out.minor.push_back({i, j});
      RatVector col(s);
      for (std::size_t k = 0; k < s; ++k) col[k] = blocks[i].D(rows[k], j);
      scale2 = std::max(scale2, inf_norm(col));
      minor_cols.push_back(std::move(col));
    }
  }
  if (sgn(scale2) == 0) scale2 = 1;
  out.minor_part = partition_vectors(minor_cols, delta2, scale2);

  const LinearProgram& base = out.cm.model.lp;
  const std::size_t M = out.minor.size();
  const std::size_t G = out.minor_part.groups.size();
  const std::size_t base_rows = base.A.rows();
  const std::size_t base_cols = base.A.cols();
  out.minor0 = base_cols;
  out.group0 = base_cols + M;
  out.group_row0 = base_rows;

  LinearProgram lp;
  lp.A = RatMatrix(base_rows + G, base_cols + M + G);
  for (std::size_t r = 0; r < base_rows; ++r)
    for (std::size_t c = 0; c < base_cols; ++c) lp.A(r, c) = base.A(r, c);
  lp.rhs = base.rhs;
  lp.rhs.resize(base_rows + G, Rat(0));
  lp.lower = base.lower;
  lp.upper = base.upper;
  lp.objective = base.objective;
  for (std::size_t v = 0; v < M; ++v) {
    const auto [i, j] = out.minor[v];
    const std::size_t c = out.minor0 + v;
    for (std::size_t k = 0; k < s; ++k) lp.A(k, c) = out.minor_part.residuals[v][k];
    lp.A(out.group_row0 + out.minor_part.column_group[v], c) = 1;
    lp.lower.emplace_back(0);
    lp.upper.emplace_back(splits[i].minor_upper[j]);
    lp.objective.push_back(blocks[i].w[j]);
  }
  for (std::size_t d = 0; d < G; ++d) {
    const auto& g = out.minor_part.groups[d];
    const std::size_t c = out.group0 + d;
    Int hi = 0;
    for (std::size_t v : g.members) hi += splits[out.minor[v].block].minor_upper[out.minor[v].column];
    for (std::size_t k = 0; k < s; ++k) lp.A(k, c) = g.canonical[k];
    lp.A(out.group_row0 + d, c) = -1;
    lp.lower.emplace_back(0);
    lp.upper.emplace_back(hi);
    lp.objective.emplace_back(0);
  }
  out.cm.model.lp = std::move(lp);
  for (std::size_t d = 0; d < G; ++d) out.cm.model.integer_vars.push_back(out.group0 + d);
  return out;
}

ApproxResult solve_nfold(const NFoldNonnegInstance& inst, const ApproxParams& params) {
  const Validation v = validate_nonneg(inst);
  if (!v.ok()) throw std::invalid_argument(join(v.errors));
  const Rat& eps = params.epsilon;
  if (sgn(eps) <= 0) throw std::invalid_argument("epsilon must be positive");
  const PipelineObserver* obs = params.observer;
  auto report = [&](const IntVector& x) { return violation_report(inst, x, ViolationMode::multiplicative(eps)); };

  ApproxResult result;
  auto fallback = [&](const std::string& why) {
    const GeneralIP flat = flatten(inst);
    RatVector radius;
    for (const auto& b : flat.b) radius.push_back(eps * b);
    FallbackOutcome fb = infeasible_fallback({flat, radius, flat.b}, params);
    result.stats.bb_nodes += fb.stats.bb_nodes;
    result.stats.lp_pivots += fb.stats.lp_pivots;
    result.status = fb.status;
    result.objective_guarantee_vacuous = true;
    result.notes.push_back(why);
    result.notes.push_back(fb.note);
    if (fb.witness) {
      result.has_solution = true;
      result.x = std::move(*fb.witness);
      result.report = report(result.x);
    }
    return result;
  };

  // Coupling rows with b0 = 0 force every variable they touch to zero.
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < inst.b0.size(); ++r)
    if (sgn(inst.b0[r]) > 0) rows.push_back(r);
  std::vector<ScaledBlock> blocks = normalize_blocks(inst);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::set<std::size_t> fixed(blocks[i].fixed_zero_vars.begin(), blocks[i].fixed_zero_vars.end());
    for (std::size_t r = 0; r < inst.b0.size(); ++r) {
      if (sgn(inst.b0[r]) > 0) continue;
      for (std::size_t j = 0; j < blocks[i].D.cols(); ++j)
        if (sgn(blocks[i].D(r, j)) != 0) fixed.insert(j);
    }
    blocks[i].fixed_zero_vars.assign(fixed.begin(), fixed.end());
  }
  // Without positive coupling rows the coupling holds trivially; a zero row
  // keeps the configuration model well formed.
  const bool no_rows = rows.empty();
  NFoldNonnegInstance work = inst;
  if (no_rows) {
    rows.push_back(0);
    for (auto& b : blocks) b.D = RatMatrix(1, b.D.cols());
    work.b0 = RatVector{0};
  }
  Rat beta = 0;
  for (std::size_t r : rows)
    if (sgn(work.b0[r]) > 0 && (sgn(beta) == 0 || work.b0[r] < beta)) beta = work.b0[r];
  if (sgn(beta) == 0) beta = 1;

  const std::size_t t = blocks.front().D.cols();
  const Rat psi = eps / Rat(static_cast<unsigned long>(4 * t));
  std::vector<ColumnSplit> splits;
  bool all_big = true;
  for (const auto& b : blocks) {
    splits.push_back(classify_and_split(b, psi));
    for (auto k : splits.back().kind) all_big = all_big && k == ColumnKind::Big;
  }

  std::vector<std::vector<IntVector>> configs;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    configs.push_back(all_big ? enumerate_major_configs(blocks[i], splits[i], Rat(1), Rat(1), params.enumeration_limit)
                              : enumerate_major_configs(blocks[i], splits[i], eps, params.enumeration_limit));
    if (configs.back().empty()) {
      return fallback("block " + std::to_string(i) + " has no configuration inside its window");
    }
  }
  const NFoldConfigInstance major = major_instance(blocks, splits, configs, rows, work.b0);
  const auto norm = normalize_configs(major);
  const std::size_t s = rows.size();
  const std::size_t support7 = s * (2 * norm->tau + 1);
  Rat scale1 = 0;
  for (const auto& m : norm->dcal) scale1 = std::max(scale1, inf_norm(m));
  if (sgn(scale1) == 0) scale1 = 1;
  Rat delta1 = params.delta_override ? *params.delta_override
                                     : Rat(eps * beta / Rat(static_cast<unsigned long>(4 * support7)) / scale1);

  if (all_big) {
    result.notes.push_back("every column is big: configurations are the exact solutions of each block");
    auto major_report = [&](const IntVector& x) { return report(x); };
    const Rat delta = params.delta_override ? *params.delta_override
                                            : Rat(eps * beta / Rat(static_cast<unsigned long>(support7)) / scale1);
    ConfigCoreOutcome core = config_core(*norm, delta, major_report, params);
    result.stats = core.stats;
    result.delta_used = core.delta_used;
    result.refinements = core.refinements;
    if (core.mip_infeasible) return fallback("configuration model infeasible");
    result.status = Status::Solved;
    result.has_solution = true;
    result.x = std::move(core.x);
    result.report = std::move(core.report);
    return result;
  }

  result.notes.push_back("small columns present: major/minor split with minor bound min(λ−1, u)");
  // Minor-part smallness: Σ_small A_j·minor bound <= ε/2 on every row.
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t r = 0; r < blocks[i].A.rows(); ++r) {
      Rat total = 0;
      for (std::size_t j = 0; j < t; ++j) total += blocks[i].A(r, j) * Rat(splits[i].minor_upper[j]);
      if (total > eps / 2) throw InvariantViolation("minor part of block " + std::to_string(i) + " exceeds ε/2");
    }
  }
  Rat delta2_base = eps / Rat(static_cast<unsigned long>(8 * s));
  {
    Rat d2 = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (std::size_t j = 0; j < t; ++j)
        if (splits[i].kind[j] == ColumnKind::Small)
          for (std::size_t r : rows) d2 = std::max(d2, blocks[i].D(r, j));
    if (d2 > beta) delta2_base *= beta / d2;
  }
  Rat delta2 = params.delta_override ? *params.delta_override : delta2_base;

  for (std::size_t round = 0;; ++round) {
    const ConfigBoxPartition part = partition_config_columns(norm->dcal, delta1);
    const Mip6 mip6 = build_mip6(blocks, splits, rows, *norm, part, delta2);
    result.delta_used = part.delta;
    result.refinements = round;
    const MixedSolution mixed = solve_mip(mip6.cm.model, mip_options(params));
    result.stats.bb_nodes += mixed.nodes;
    result.stats.lp_pivots += mixed.lp_pivots;
    if (mixed.status != MipStatus::Optimal) return fallback("mixed model infeasible");

    // Configuration part, everything else fixed.
    const LinearProgram lp7 = fix_assignment_lp(mip6.cm, mixed.values);
    const VertexSolution v7 = solve_lp_vertex(lp7);
    result.stats.lp_pivots += v7.pivots;
    if (v7.status != LpStatus::Optimal) throw InvariantViolation("configuration LP lost feasibility");
    if (obs && obs->on_lp_vertex) obs->on_lp_vertex(lp7, v7);
    if (obs && obs->on_fractional_support) obs->on_fractional_support("nfold-config", v7, support7);
    if (nonintegral_support(v7).size() > support7) {
      throw InvariantViolation("configuration vertex exceeds s(2τ+1) fractional entries");
    }
    if (obs && obs->on_group_rank) report_group_ranks(mip6.cm, part, v7.values, *obs);
    const std::vector<std::size_t> chosen = round_assignment(mip6.cm, part, *norm, mixed.values, v7.values, obs);

    // Minor part: residual activity and group totals fixed.
    const std::size_t M = mip6.minor.size();
    IntVector minor(M);
    if (M > 0) {
      LinearProgram lp8;
      const std::size_t G = mip6.minor_part.groups.size();
      lp8.A = RatMatrix(s + G, M);
      lp8.rhs.assign(s + G, Rat(0));
      for (std::size_t k = 0; k < M; ++k) {
        const Rat& xv = mixed.values[mip6.minor0 + k];
        for (std::size_t r = 0; r < s; ++r) {
          lp8.A(r, k) = mip6.minor_part.residuals[k][r];
          lp8.rhs[r] += mip6.minor_part.residuals[k][r] * xv;
        }
        lp8.A(s + mip6.minor_part.column_group[k], k) = 1;
        lp8.rhs[s + mip6.minor_part.column_group[k]] += xv;
        lp8.lower.push_back(mip6.cm.model.lp.lower[mip6.minor0 + k]);
        lp8.upper.push_back(mip6.cm.model.lp.upper[mip6.minor0 + k]);
        lp8.objective.push_back(mip6.cm.model.lp.objective[mip6.minor0 + k]);
      }
      const VertexSolution v8 = solve_lp_vertex(lp8);
      result.stats.lp_pivots += v8.pivots;
      if (v8.status != LpStatus::Optimal) throw InvariantViolation("minor LP lost feasibility");
      if (obs && obs->on_lp_vertex) obs->on_lp_vertex(lp8, v8);
      if (obs && obs->on_fractional_support) obs->on_fractional_support("nfold-minor", v8, 2 * s);
      if (nonintegral_support(v8).size() > 2 * s) throw InvariantViolation("minor vertex exceeds 2s fractional entries");
      for (const auto& g : mip6.minor_part.groups) {
        const GroupRoundingPlan plan = make_rounding_plan(g.members, v8.values, lp8.objective);
        const IntVector rounded = greedy_group_round(plan);
        for (std::size_t k = 0; k < plan.members.size(); ++k) minor[plan.members[k]] = rounded[k];
      }
    }

    IntVector x(blocks.size() * t, Int(0));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const IntVector& p = norm->padded.blocks[i].configs[chosen[i]];
      for (std::size_t j = 0; j < t; ++j) x[i * t + j] = splits[i].lambda[j] * p[j];
    }
    for (std::size_t k = 0; k < M; ++k) x[mip6.minor[k].block * t + mip6.minor[k].column] += minor[k];
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      RatVector change(blocks[i].A.rows(), Rat(0));
      for (std::size_t j = 0; j < t; ++j) {
        Int& xj = x[i * t + j];
        if (xj <= blocks[i].u[j]) continue;
        const Int cut = xj - blocks[i].u[j];
        for (std::size_t r = 0; r < change.size(); ++r) change[r] += blocks[i].A(r, j) * Rat(cut);
        xj = blocks[i].u[j];
        ++clamped;
      }
      for (const auto& c : change) {
        if (c >= 2 * psi * Rat(static_cast<unsigned long>(t))) {
          throw InvariantViolation("clamping moved a row of block " + std::to_string(i) + " by " + to_string(c));
        }
      }
    }

    ViolationReport rep = report(x);
    if (rep.within_bound) {
      if (clamped > 0) result.notes.push_back("clamped " + std::to_string(clamped) + " variables to their upper bound");
      result.notes.push_back("minor box width " + to_string(mip6.minor_part.delta));
      result.status = Status::Solved;
      result.has_solution = true;
      result.x = std::move(x);
      result.report = std::move(rep);
      return result;
    }
    if (round >= params.refinement_limit) {
      throw ResourceLimitError("multiplicative window still violated after " + std::to_string(round) +
                               " refinements");
    }
    delta1 = part.delta / 2;
    delta2 = mip6.minor_part.delta / 2;
  }
}

}  // namespace ipapprox
