#include "ipapprox/witness.hpp"

#include <algorithm>

namespace ipapprox {

MipOptions mip_options(const ApproxParams& params) {
  MipOptions opt;
  opt.node_limit = params.node_limit;
  if (params.observer && params.observer->on_lp_vertex) {
    const PipelineObserver* obs = params.observer;
    opt.on_node_lp = [obs](const LinearProgram& lp, const VertexSolution& sol) { obs->on_lp_vertex(lp, sol); };
  }
  return opt;
}

namespace {

// Largest |H_r x − b_r| over the bound box.
RatVector row_spans(const GeneralIP& ip) {
  RatVector span(ip.H.rows());
  for (std::size_t r = 0; r < ip.H.rows(); ++r) {
    Rat s = abs(ip.b[r]);
    for (std::size_t j = 0; j < ip.H.cols(); ++j) {
      const Rat big = std::max(abs(Rat(ip.l[j])), abs(Rat(ip.u[j])));
      s += abs(ip.H(r, j)) * big;
    }
    span[r] = s;
  }
  return span;
}

IntVector integer_part(const RatVector& values, std::size_t n) {
  IntVector x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = values[j].get_num();
  return x;
}

}  // namespace

std::optional<Witness> cheapest_within_radius(const ToleranceSystem& sys, const ApproxParams& params) {
  const GeneralIP& ip = sys.ip;
  const std::size_t m = ip.H.rows();
  const std::size_t n = ip.H.cols();
  // Columns: x (integer), then one deviation e_r per row with H x − e = b.
  MixedModel model;
  model.lp.A = RatMatrix(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) model.lp.A(r, j) = ip.H(r, j);
    model.lp.A(r, n + r) = -1;
  }
  model.lp.rhs = ip.b;
  for (std::size_t j = 0; j < n; ++j) {
    model.lp.lower.emplace_back(ip.l[j]);
    model.lp.upper.emplace_back(ip.u[j]);
    model.lp.objective.push_back(ip.w[j]);
    model.integer_vars.push_back(j);
  }
  for (std::size_t r = 0; r < m; ++r) {
    model.lp.lower.push_back(-sys.radius[r]);
    model.lp.upper.push_back(sys.radius[r]);
    model.lp.objective.emplace_back(0);
  }
  const MixedSolution sol = solve_mip(model, mip_options(params));
  if (sol.status != MipStatus::Optimal) return std::nullopt;
  return Witness{integer_part(sol.values, n), {sol.lp_pivots, sol.nodes}};
}

std::optional<Witness> least_violation(const ToleranceSystem& sys, const ApproxParams& params) {
  const GeneralIP& ip = sys.ip;
  const std::size_t m = ip.H.rows();
  const std::size_t n = ip.H.cols();
  const RatVector span = row_spans(ip);
  Rat theta_max = 0;
  for (std::size_t r = 0; r < m; ++r) {
    if (sgn(sys.weight[r]) > 0) theta_max = std::max(theta_max, Rat(span[r] / sys.weight[r]));
  }
  // Columns: x | p (m) | q (m) | s (m) | θ.
  //   H x − p + q = b
  //   p + q + s − weight·θ = 0
  const std::size_t cols = n + 3 * m + 1;
  const std::size_t theta = n + 3 * m;
  MixedModel model;
  model.lp.A = RatMatrix(2 * m, cols);
  model.lp.rhs.assign(2 * m, Rat(0));
  model.lp.lower.assign(cols, Rat(0));
  model.lp.upper.assign(cols, Rat(0));
  model.lp.objective.assign(cols, Rat(0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) model.lp.A(r, j) = ip.H(r, j);
    model.lp.A(r, n + r) = -1;
    model.lp.A(r, n + m + r) = 1;
    model.lp.rhs[r] = ip.b[r];
    model.lp.A(m + r, n + r) = 1;
    model.lp.A(m + r, n + m + r) = 1;
    model.lp.A(m + r, n + 2 * m + r) = 1;
    model.lp.A(m + r, theta) = -sys.weight[r];
    const Rat cap = sgn(sys.weight[r]) > 0 ? span[r] : Rat(0);
    model.lp.upper[n + r] = cap;
    model.lp.upper[n + m + r] = cap;
    model.lp.upper[n + 2 * m + r] = sgn(sys.weight[r]) > 0 ? Rat(sys.weight[r] * theta_max) : Rat(0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    model.lp.lower[j] = ip.l[j];
    model.lp.upper[j] = ip.u[j];
    model.integer_vars.push_back(j);
  }
  model.lp.upper[theta] = theta_max;
  model.lp.objective[theta] = 1;
  const MixedSolution sol = solve_mip(model, mip_options(params));
  if (sol.status != MipStatus::Optimal) return std::nullopt;
  return Witness{integer_part(sol.values, n), {sol.lp_pivots, sol.nodes}};
}

FallbackOutcome infeasible_fallback(const ToleranceSystem& sys, const ApproxParams& params) {
  FallbackOutcome out;
  if (auto w = cheapest_within_radius(sys, params)) {
    out.stats = w->stats;
    out.witness = std::move(w->x);
    out.note = "original infeasible; witness is the cheapest point within the permitted violation";
    return out;
  }
  if (auto w = least_violation(sys, params)) {
    out.stats = w->stats;
    out.status = Status::NearFeasibilityUnattainable;
    out.witness = std::move(w->x);
    out.note = "no point within the permitted violation; witness minimizes the weighted violation";
    return out;
  }
  out.note = "no integer point satisfies the exactly enforced rows";
  return out;
}

}  // namespace ipapprox
