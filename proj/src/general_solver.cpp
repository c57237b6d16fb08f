#include "ipapprox/general_solver.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ipapprox/errors.hpp"
#include "ipapprox/witness.hpp"

namespace ipapprox {

Mip1 build_mip1(const GeneralIP& inst, const BoxPartition& part) {
  const std::size_t m = inst.H.rows();
  const std::size_t n = inst.H.cols();
  const std::size_t K = part.groups.size();
  Mip1 out;
  out.n = n;
  out.groups = K;
  LinearProgram& lp = out.model.lp;
  lp.A = RatMatrix(m + K, n + K);
  lp.rhs = inst.b;
  lp.rhs.resize(m + K, Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < m; ++r) lp.A(r, j) = part.residuals[j][r];
    lp.A(m + part.column_group[j], j) = 1;
    lp.lower.emplace_back(inst.l[j]);
    lp.upper.emplace_back(inst.u[j]);
    lp.objective.push_back(inst.w[j]);
  }
  for (std::size_t k = 0; k < K; ++k) {
    const auto& g = part.groups[k];
    Int lo = 0;
    Int hi = 0;
    for (std::size_t j : g.members) {
      lo += inst.l[j];
      hi += inst.u[j];
    }
    for (std::size_t r = 0; r < m; ++r) lp.A(r, n + k) = g.canonical[r];
    lp.A(m + k, n + k) = -1;
    lp.lower.emplace_back(lo);
    lp.upper.emplace_back(hi);
    lp.objective.emplace_back(0);
    out.model.integer_vars.push_back(n + k);
  }
  return out;
}

LinearProgram restrict_lp2(const GeneralIP& inst, const BoxPartition& part, const MixedSolution& mixed) {
  if (mixed.status != MipStatus::Optimal) throw std::invalid_argument("restrict_lp2: mixed solution not optimal");
  const std::size_t m = inst.H.rows();
  const std::size_t n = inst.H.cols();
  const std::size_t K = part.groups.size();
  LinearProgram lp;
  lp.A = RatMatrix(m + K, n);
  lp.rhs.assign(m + K, Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    const Rat& xj = mixed.values[j];
    for (std::size_t r = 0; r < m; ++r) {
      lp.A(r, j) = part.residuals[j][r];
      lp.rhs[r] += part.residuals[j][r] * xj;
    }
    lp.A(m + part.column_group[j], j) = 1;
    lp.rhs[m + part.column_group[j]] += xj;
    lp.lower.emplace_back(inst.l[j]);
    lp.upper.emplace_back(inst.u[j]);
  }
  lp.objective = inst.w;
  return lp;
}

bool claim1_check(const VertexSolution& sol, std::size_t m) {
  return nonintegral_support(sol).size() <= 2 * m;
}

GroupRoundingPlan make_rounding_plan(const std::vector<std::size_t>& members, const RatVector& values,
                                     const RatVector& weights) {
  GroupRoundingPlan plan;
  plan.members = members;
  std::stable_sort(plan.members.begin(), plan.members.end(), [&](std::size_t a, std::size_t b) {
    if (weights[a] != weights[b]) return weights[a] < weights[b];
    return a < b;
  });
  Rat total = 0;
  for (std::size_t j : plan.members) {
    plan.floors.push_back(floor(values[j]));
    plan.fractional.push_back(frac(values[j]));
    plan.weights.push_back(weights[j]);
    total += plan.fractional.back();
  }
  if (!is_integer(total)) {
    throw InvariantViolation("group rounding: fractional parts sum to " + to_string(total));
  }
  plan.gamma = total.get_num();
  return plan;
}

IntVector greedy_group_round(const GroupRoundingPlan& plan) {
  IntVector out = plan.floors;
  Int remaining = plan.gamma;
  for (std::size_t k = 0; k < out.size() && remaining > 0; ++k) {
    if (sgn(plan.fractional[k]) == 0) continue;
    out[k] += 1;
    remaining -= 1;
  }
  if (remaining != 0) throw InvariantViolation("group rounding: gamma exceeds the fractional members");
  return out;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream out;
  for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? "; " : "") << parts[i];
  return out.str();
}

}  // namespace

ApproxResult solve_general(const GeneralIP& inst, const ApproxParams& params) {
  const Validation v = validate_general(inst);
  if (!v.ok()) throw std::invalid_argument(join(v.errors));
  if (sgn(params.epsilon) <= 0) throw std::invalid_argument("epsilon must be positive");
  const std::size_t m = inst.H.rows();
  const std::size_t n = inst.H.cols();
  const Rat bound = params.epsilon * v.delta;
  const PipelineObserver* obs = params.observer;
  auto report = [&](const IntVector& x) { return violation_report(inst, x, ViolationMode::additive(bound)); };

  ApproxResult result;
  Rat delta = params.delta_override ? *params.delta_override : params.epsilon / Rat(2 * m);
  for (std::size_t round = 0;; ++round) {
    const BoxPartition part = partition_columns(inst.H, delta);
    result.delta_used = part.delta;
    result.refinements = round;

    const Mip1 mip1 = build_mip1(inst, part);
    const MixedSolution mixed = solve_mip(mip1.model, mip_options(params));
    result.stats.bb_nodes += mixed.nodes;
    result.stats.lp_pivots += mixed.lp_pivots;
    if (mixed.status != MipStatus::Optimal) {
      ToleranceSystem sys{inst, RatVector(m, bound), RatVector(m, Rat(1))};
      FallbackOutcome fb = infeasible_fallback(sys, params);
      result.stats.bb_nodes += fb.stats.bb_nodes;
      result.stats.lp_pivots += fb.stats.lp_pivots;
      result.status = fb.status;
      result.objective_guarantee_vacuous = true;
      result.notes.push_back(fb.note);
      if (fb.witness) {
        result.has_solution = true;
        result.x = std::move(*fb.witness);
        result.report = report(result.x);
      }
      return result;
    }

    const LinearProgram lp2 = restrict_lp2(inst, part, mixed);
    const VertexSolution vertex = solve_lp_vertex(lp2);
    result.stats.lp_pivots += vertex.pivots;
    if (vertex.status != LpStatus::Optimal) throw InvariantViolation("restricted LP lost feasibility");
    if (obs && obs->on_lp_vertex) obs->on_lp_vertex(lp2, vertex);
    if (obs && obs->on_fractional_support) obs->on_fractional_support("general", vertex, 2 * m);
    if (!claim1_check(vertex, m)) {
      throw InvariantViolation("vertex has " + std::to_string(nonintegral_support(vertex).size()) +
                               " fractional entries, more than 2m = " + std::to_string(2 * m));
    }

    IntVector x(n);
    for (const auto& g : part.groups) {
      const GroupRoundingPlan plan = make_rounding_plan(g.members, vertex.values, inst.w);
      const IntVector rounded = greedy_group_round(plan);
      for (std::size_t k = 0; k < plan.members.size(); ++k) x[plan.members[k]] = rounded[k];
    }

    ViolationReport rep = report(x);
    if (rep.within_bound) {
      result.status = Status::Solved;
      result.has_solution = true;
      result.x = std::move(x);
      result.report = std::move(rep);
      return result;
    }
    if (round >= params.refinement_limit) {
      throw ResourceLimitError("violation " + to_string(rep.max_abs_residual) + " exceeds " +
                               to_string(bound) + " after " + std::to_string(round) + " refinements");
    }
    delta = part.delta / 2;
  }
}

}  // namespace ipapprox
