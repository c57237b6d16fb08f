#include "ipapprox/mip.hpp"

#include <optional>
#include <string>
#include <utility>

namespace ipapprox {

void check_well_formed(const MixedModel& model) {
  check_well_formed(model.lp);
  for (std::size_t j : model.integer_vars) {
    if (j >= model.lp.A.cols()) {
      throw std::invalid_argument("mixed model: integer index out of range");
    }
    if (!is_integer(model.lp.lower[j]) || !is_integer(model.lp.upper[j])) {
      throw std::invalid_argument("mixed model: integer column " + std::to_string(j) +
                                  " has a fractional bound");
    }
  }
}

namespace {

struct Node {
  // Bounds of the integer columns, in model.integer_vars order.
  RatVector lower;
  RatVector upper;
};

}  // namespace

MixedSolution solve_mip(const MixedModel& model, const MipOptions& options) {
  check_well_formed(model);
  const auto& ints = model.integer_vars;

  LinearProgram lp = model.lp;
  MixedSolution result;
  std::optional<Rat> incumbent;

  std::vector<Node> stack;
  {
    Node root;
    for (std::size_t j : ints) {
      root.lower.push_back(lp.lower[j]);
      root.upper.push_back(lp.upper[j]);
    }
    stack.push_back(std::move(root));
  }

  bool root_done = false;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (++result.nodes > options.node_limit) {
      throw ResourceLimitError("branch-and-bound node limit of " +
                               std::to_string(options.node_limit) + " exceeded");
    }
    for (std::size_t k = 0; k < ints.size(); ++k) {
      lp.lower[ints[k]] = node.lower[k];
      lp.upper[ints[k]] = node.upper[k];
    }
    VertexSolution relax = solve_lp_vertex(lp);
    result.lp_pivots += relax.pivots;
    if (!root_done) {
      root_done = true;
      if (relax.status == LpStatus::Optimal) result.root_bound = relax.objective_value;
    }
    if (relax.status == LpStatus::Unbounded) {
      throw std::logic_error("branch-and-bound: unbounded relaxation with finite bounds");
    }
    if (relax.status != LpStatus::Optimal) continue;
    if (options.on_node_lp) options.on_node_lp(lp, relax);
    if (incumbent && relax.objective_value >= *incumbent) continue;

    // Farthest from an integer, smallest index on ties.
    std::optional<std::size_t> branch;
    Rat best_distance = 0;
    for (std::size_t k = 0; k < ints.size(); ++k) {
      const Rat f = frac(relax.values[ints[k]]);
      if (sgn(f) == 0) continue;
      Rat distance = f < Rat(1, 2) ? f : Rat(1 - f);
      if (!branch || distance > best_distance) {
        branch = k;
        best_distance = distance;
      }
    }

    if (!branch) {
      incumbent = relax.objective_value;
      result.status = MipStatus::Optimal;
      result.values = std::move(relax.values);
      result.objective_value = relax.objective_value;
      continue;
    }

    const std::size_t k = *branch;
    const Rat& v = relax.values[ints[k]];
    Node down = node;
    down.upper[k] = Rat(floor(v));
    Node up = std::move(node);
    up.lower[k] = Rat(ceil(v));
    // The child nearer the relaxation value is explored first (popped last).
    if (frac(v) > Rat(1, 2)) {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    } else {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    }
  }
  return result;
}

}  // namespace ipapprox
