#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ipapprox/errors.hpp"
#include "ipapprox/simplex.hpp"

namespace ipapprox {

/// A linear program in which the listed columns must take integer values.
struct MixedModel {
  LinearProgram lp;
  std::vector<std::size_t> integer_vars;
};

enum class MipStatus { Optimal, Infeasible };

struct MixedSolution {
  MipStatus status = MipStatus::Infeasible;
  RatVector values;
  Rat objective_value = 0;
  /// Objective of the root relaxation (meaningful when it was feasible).
  Rat root_bound = 0;
  std::uint64_t nodes = 0;
  std::uint64_t lp_pivots = 0;
};

struct MipOptions {
  std::uint64_t node_limit = 1'000'000;
  /// Called with every node relaxation that solved to optimality.
  std::function<void(const LinearProgram&, const VertexSolution&)> on_node_lp;
};

/// Throws std::invalid_argument if an integer column has a fractional bound
/// or an index is out of range.
void check_well_formed(const MixedModel& model);

/// Exact depth-first branch-and-bound. Branches on the integer column
/// farthest from integrality (smallest index on ties), explores the child
/// nearer the relaxation value first, and prunes with exact comparisons
/// against the incumbent. Throws ResourceLimitError past the node limit.
MixedSolution solve_mip(const MixedModel& model, const MipOptions& options = {});

}  // namespace ipapprox
