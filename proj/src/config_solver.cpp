#include "ipapprox/config_solver.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "ipapprox/errors.hpp"
#include "ipapprox/witness.hpp"

namespace ipapprox {

std::optional<NormalizedConfigs> normalize_configs(const NFoldConfigInstance& inst) {
  NormalizedConfigs norm;
  norm.padded.b0 = inst.b0;
  for (const auto& blk : inst.blocks) {
    if (blk.configs.empty()) return std::nullopt;
  }
  std::vector<std::vector<std::size_t>> kept(inst.blocks.size());
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    const auto& configs = inst.blocks[i].configs;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      bool seen = false;
      for (std::size_t k : kept[i]) seen = seen || configs[k] == configs[c];
      if (!seen) kept[i].push_back(c);
    }
    norm.tau = std::max(norm.tau, kept[i].size());
  }
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    const auto& blk = inst.blocks[i];
    ConfigBlock out{blk.D, {}, blk.weights};
    std::vector<std::size_t> origin = kept[i];
    while (origin.size() < norm.tau) origin.push_back(kept[i].front());
    RatMatrix dcal(blk.D.rows(), norm.tau);
    RatVector cost;
    for (std::size_t phi = 0; phi < norm.tau; ++phi) {
      const IntVector& p = blk.configs[origin[phi]];
      out.configs.push_back(p);
      const RatVector col = blk.D.multiply(p);
      for (std::size_t r = 0; r < col.size(); ++r) dcal(r, phi) = col[r];
      cost.push_back(dot(blk.weights, p));
    }
    norm.padded.blocks.push_back(std::move(out));
    norm.origin.push_back(std::move(origin));
    norm.dcal.push_back(std::move(dcal));
    norm.cost.push_back(std::move(cost));
  }
  return norm;
}

ConfigModel build_mip4(const NormalizedConfigs& norm, const ConfigBoxPartition& part) {
  const std::size_t n = norm.padded.blocks.size();
  const std::size_t tau = norm.tau;
  const std::size_t s = norm.padded.b0.size();
  const std::size_t K = part.types.size();
  ConfigModel cm;
  cm.blocks = n;
  cm.tau = tau;
  cm.types = K;
  LinearProgram& lp = cm.model.lp;
  const std::size_t cols = n * tau + K * tau;
  const std::size_t link0 = s;
  const std::size_t sel0 = s + K * tau;
  lp.A = RatMatrix(sel0 + n, cols);
  lp.rhs.assign(sel0 + n, Rat(0));
  for (std::size_t r = 0; r < s; ++r) lp.rhs[r] = norm.padded.b0[r];
  lp.lower.assign(cols, Rat(0));
  lp.upper.assign(cols, Rat(1));
  lp.objective.assign(cols, Rat(0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = part.block_type[i];
    for (std::size_t phi = 0; phi < tau; ++phi) {
      const std::size_t z = cm.z_col(i, phi);
      for (std::size_t r = 0; r < s; ++r) lp.A(r, z) = part.residuals[i](r, phi);
      lp.A(link0 + k * tau + phi, z) = 1;
      lp.A(sel0 + i, z) = 1;
      lp.objective[z] = norm.cost[i][phi];
    }
    lp.rhs[sel0 + i] = 1;
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t phi = 0; phi < tau; ++phi) {
      const std::size_t y = cm.y_col(k, phi);
      for (std::size_t r = 0; r < s; ++r) lp.A(r, y) = part.types[k].canonicals[phi][r];
      lp.A(link0 + k * tau + phi, y) = -1;
      lp.upper[y] = Rat(static_cast<unsigned long>(part.types[k].members.size()));
      cm.model.integer_vars.push_back(y);
    }
  }
  return cm;
}

std::vector<int> tu_round(const AssignmentRestriction& res) {
  const std::size_t vars = res.cost.size();
  if (vars == 0) return {};
  for (const auto& v : res.block_rhs)
    if (!is_integer(v)) throw InvariantViolation("tu_round: non-integral block marginal " + to_string(v));
  for (const auto& v : res.column_rhs)
    if (!is_integer(v)) throw InvariantViolation("tu_round: non-integral column marginal " + to_string(v));
  LinearProgram lp;
  lp.A = RatMatrix(res.block_rows + res.column_rows, vars);
  lp.rhs = res.block_rhs;
  lp.rhs.insert(lp.rhs.end(), res.column_rhs.begin(), res.column_rhs.end());
  for (std::size_t v = 0; v < vars; ++v) {
    lp.A(res.var_block[v], v) = 1;
    lp.A(res.block_rows + res.var_column[v], v) = 1;
  }
  lp.lower.assign(vars, Rat(0));
  lp.upper.assign(vars, Rat(1));
  lp.objective = res.cost;
  const VertexSolution sol = solve_lp_vertex(lp);
  if (sol.status != LpStatus::Optimal) throw InvariantViolation("tu_round: restriction is infeasible");
  std::vector<int> out(vars);
  for (std::size_t v = 0; v < vars; ++v) {
    if (!is_integer(sol.values[v])) throw InvariantViolation("tu_round: fractional vertex");
    out[v] = sgn(sol.values[v]) > 0 ? 1 : 0;
  }
  return out;
}

LinearProgram fix_assignment_lp(const ConfigModel& cm, const RatVector& values) {
  const LinearProgram& full = cm.model.lp;
  const std::size_t zcols = cm.blocks * cm.tau;
  std::vector<std::size_t> keep(zcols);
  for (std::size_t c = 0; c < zcols; ++c) keep[c] = c;
  LinearProgram lp;
  lp.A = full.A.select_columns(keep);
  lp.rhs = full.rhs;
  for (std::size_t r = 0; r < full.A.rows(); ++r)
    for (std::size_t c = zcols; c < full.A.cols(); ++c)
      if (sgn(full.A(r, c)) != 0) lp.rhs[r] -= full.A(r, c) * values[c];
  lp.lower.assign(full.lower.begin(), full.lower.begin() + static_cast<std::ptrdiff_t>(zcols));
  lp.upper.assign(full.upper.begin(), full.upper.begin() + static_cast<std::ptrdiff_t>(zcols));
  lp.objective.assign(full.objective.begin(), full.objective.begin() + static_cast<std::ptrdiff_t>(zcols));
  return lp;
}

void report_group_ranks(const ConfigModel& cm, const ConfigBoxPartition& part, const RatVector& z,
                        const PipelineObserver& obs) {
  for (std::size_t k = 0; k < part.types.size(); ++k) {
    std::vector<std::pair<std::size_t, std::size_t>> frac_entries;
    for (std::size_t i : part.types[k].members)
      for (std::size_t phi = 0; phi < cm.tau; ++phi)
        if (!is_integer(z[cm.z_col(i, phi)])) frac_entries.emplace_back(i, phi);
    if (frac_entries.empty()) continue;
    const auto& members = part.types[k].members;
    RatMatrix B(cm.tau + members.size(), frac_entries.size());
    for (std::size_t c = 0; c < frac_entries.size(); ++c) {
      const auto [i, phi] = frac_entries[c];
      B(phi, c) = 1;
      const auto pos = std::find(members.begin(), members.end(), i) - members.begin();
      B(cm.tau + static_cast<std::size_t>(pos), c) = 1;
    }
    obs.on_group_rank(rank_exact(B), cm.tau);
  }
}

std::vector<std::size_t> round_assignment(const ConfigModel& cm, const ConfigBoxPartition& part,
                                          const NormalizedConfigs& norm, const RatVector& values,
                                          const RatVector& z, const PipelineObserver* obs) {
  AssignmentRestriction res;
  std::vector<std::size_t> block_row(cm.blocks, SIZE_MAX);
  std::vector<std::size_t> column_row(cm.types * cm.tau, SIZE_MAX);
  std::vector<std::pair<std::size_t, std::size_t>> var_entry;
  RatVector fractional;
  for (std::size_t i = 0; i < cm.blocks; ++i) {
    for (std::size_t phi = 0; phi < cm.tau; ++phi) {
      const Rat& v = z[cm.z_col(i, phi)];
      if (is_integer(v)) continue;
      const std::size_t kc = part.block_type[i] * cm.tau + phi;
      if (block_row[i] == SIZE_MAX) {
        block_row[i] = res.block_rows++;
        res.block_rhs.emplace_back(1);
      }
      if (column_row[kc] == SIZE_MAX) {
        column_row[kc] = res.column_rows++;
        res.column_rhs.push_back(values[cm.y_col(part.block_type[i], phi)]);
      }
      res.var_block.push_back(block_row[i]);
      res.var_column.push_back(column_row[kc]);
      res.cost.push_back(norm.cost[i][phi]);
      var_entry.emplace_back(i, phi);
      fractional.push_back(v);
    }
  }
  // Integral entries already use up part of each marginal.
  for (std::size_t i = 0; i < cm.blocks; ++i) {
    for (std::size_t phi = 0; phi < cm.tau; ++phi) {
      const Rat& v = z[cm.z_col(i, phi)];
      if (!is_integer(v) || sgn(v) == 0) continue;
      if (block_row[i] != SIZE_MAX) res.block_rhs[block_row[i]] -= v;
      const std::size_t kc = part.block_type[i] * cm.tau + phi;
      if (column_row[kc] != SIZE_MAX) res.column_rhs[column_row[kc]] -= v;
    }
  }
  const std::vector<int> rounded = tu_round(res);
  if (obs && obs->on_tu_round) obs->on_tu_round(res, fractional, rounded);

  std::vector<std::size_t> chosen(cm.blocks, SIZE_MAX);
  for (std::size_t i = 0; i < cm.blocks; ++i)
    for (std::size_t phi = 0; phi < cm.tau; ++phi)
      if (z[cm.z_col(i, phi)] == 1) chosen[i] = phi;
  for (std::size_t v = 0; v < rounded.size(); ++v) {
    if (rounded[v] == 0) continue;
    const auto [i, phi] = var_entry[v];
    if (chosen[i] != SIZE_MAX) throw InvariantViolation("rounding selected two configurations for one block");
    chosen[i] = phi;
  }
  for (std::size_t i = 0; i < cm.blocks; ++i)
    if (chosen[i] == SIZE_MAX) throw InvariantViolation("rounding left a block without a configuration");
  return chosen;
}

ConfigCoreOutcome config_core(const NormalizedConfigs& norm, Rat delta,
                              const std::function<ViolationReport(const IntVector&)>& report,
                              const ApproxParams& params) {
  const std::size_t s = norm.padded.b0.size();
  const std::size_t support_bound = s * (2 * norm.tau + 1);
  const PipelineObserver* obs = params.observer;
  ConfigCoreOutcome out;
  for (std::size_t round = 0;; ++round) {
    const ConfigBoxPartition part = partition_config_columns(norm.dcal, delta);
    out.delta_used = part.delta;
    out.refinements = round;
    const ConfigModel cm = build_mip4(norm, part);
    const MixedSolution mixed = solve_mip(cm.model, mip_options(params));
    out.stats.bb_nodes += mixed.nodes;
    out.stats.lp_pivots += mixed.lp_pivots;
    if (mixed.status != MipStatus::Optimal) {
      out.mip_infeasible = true;
      return out;
    }

    const LinearProgram lp = fix_assignment_lp(cm, mixed.values);
    const VertexSolution vertex = solve_lp_vertex(lp);
    out.stats.lp_pivots += vertex.pivots;
    if (vertex.status != LpStatus::Optimal) throw InvariantViolation("fixed-y LP lost feasibility");
    if (obs && obs->on_lp_vertex) obs->on_lp_vertex(lp, vertex);
    if (obs && obs->on_fractional_support) obs->on_fractional_support("config", vertex, support_bound);
    const std::size_t support = nonintegral_support(vertex).size();
    if (support > support_bound) {
      throw InvariantViolation("fixed-y vertex has " + std::to_string(support) +
                               " fractional entries, more than s(2τ+1) = " + std::to_string(support_bound));
    }
    if (obs && obs->on_group_rank) report_group_ranks(cm, part, vertex.values, *obs);

    out.chosen = round_assignment(cm, part, norm, mixed.values, vertex.values, obs);
    out.x.clear();
    for (std::size_t i = 0; i < cm.blocks; ++i) {
      const IntVector& p = norm.padded.blocks[i].configs[out.chosen[i]];
      out.x.insert(out.x.end(), p.begin(), p.end());
    }
    out.report = report(out.x);
    if (out.report.within_bound) return out;
    if (round >= params.refinement_limit) {
      throw ResourceLimitError("violation " + to_string(out.report.max_abs_residual) + " still outside bound " +
                               to_string(out.report.bound) + " after " + std::to_string(round) + " refinements");
    }
    delta = part.delta / 2;
  }
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream out;
  for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? "; " : "") << parts[i];
  return out.str();
}

// Choice variables z_{iφ} over the deduplicated configurations, coupling
// rows within `radius`, selection rows exact.
ToleranceSystem config_tolerance_system(const NormalizedConfigs& norm, const RatVector& radius,
                                        const RatVector& weight) {
  const std::size_t n = norm.padded.blocks.size();
  const std::size_t s = norm.padded.b0.size();
  const std::size_t tau = norm.tau;
  ToleranceSystem sys;
  sys.ip.H = RatMatrix(s + n, n * tau);
  sys.ip.b = norm.padded.b0;
  sys.ip.b.resize(s + n, Rat(1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t phi = 0; phi < tau; ++phi) {
      const std::size_t c = i * tau + phi;
      for (std::size_t r = 0; r < s; ++r) sys.ip.H(r, c) = norm.dcal[i](r, phi);
      sys.ip.H(s + i, c) = 1;
      sys.ip.w.push_back(norm.cost[i][phi]);
      sys.ip.l.emplace_back(0);
      // Padding copies are never needed by a witness.
      const bool copy = phi > 0 && norm.origin[i][phi] == norm.origin[i][0];
      sys.ip.u.emplace_back(copy ? 0 : 1);
    }
  }
  sys.radius = radius;
  sys.radius.resize(s + n, Rat(0));
  sys.weight = weight;
  sys.weight.resize(s + n, Rat(0));
  return sys;
}

}  // namespace

ApproxResult solve_nfold_config(const NFoldConfigInstance& inst, const ApproxParams& params) {
  const Validation v = validate_config(inst);
  if (!v.ok()) throw std::invalid_argument(join(v.errors));
  if (sgn(params.epsilon) <= 0) throw std::invalid_argument("epsilon must be positive");
  const Rat bound = params.epsilon * v.delta;
  auto report = [&](const IntVector& x) { return violation_report(inst, x, ViolationMode::additive(bound)); };

  ApproxResult result;
  const auto norm = normalize_configs(inst);
  if (!norm) {
    result.status = Status::Infeasible;
    result.notes.push_back("some block has an empty configuration set");
    return result;
  }
  const std::size_t s = inst.b0.size();
  const std::size_t t = inst.blocks.front().D.cols();
  Int k = kappa(inst);
  if (k == 0) k = 1;
  const Rat delta = params.delta_override
                        ? *params.delta_override
                        : Rat(params.epsilon / Rat(static_cast<unsigned long>(s * (2 * norm->tau + 1) * t)) / Rat(k));

  ConfigCoreOutcome core = config_core(*norm, delta, report, params);
  result.stats = core.stats;
  result.delta_used = core.delta_used;
  result.refinements = core.refinements;
  if (core.mip_infeasible) {
    const ToleranceSystem sys = config_tolerance_system(*norm, RatVector(s, bound), RatVector(s, Rat(1)));
    FallbackOutcome fb = infeasible_fallback(sys, params);
    result.stats.bb_nodes += fb.stats.bb_nodes;
    result.stats.lp_pivots += fb.stats.lp_pivots;
    result.status = fb.status;
    result.objective_guarantee_vacuous = true;
    result.notes.push_back(fb.note);
    if (fb.witness) {
      result.has_solution = true;
      for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
        for (std::size_t phi = 0; phi < norm->tau; ++phi) {
          if ((*fb.witness)[i * norm->tau + phi] != 1) continue;
          result.choices.push_back(norm->origin[i][phi]);
          const IntVector& p = norm->padded.blocks[i].configs[phi];
          result.x.insert(result.x.end(), p.begin(), p.end());
        }
      }
      result.report = report(result.x);
    }
    return result;
  }
  result.status = Status::Solved;
  result.has_solution = true;
  result.x = std::move(core.x);
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) result.choices.push_back(norm->origin[i][core.chosen[i]]);
  result.report = std::move(core.report);
  return result;
}

}  // namespace ipapprox
