#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ipapprox/instance.hpp"
#include "ipapprox/simplex.hpp"

namespace ipapprox {

enum class Status {
  /// An integer point within the permitted violation, objective <= OPT.
  Solved,
  /// No integer point within the permitted violation exists; the witness
  /// minimizes the weighted violation instead.
  NearFeasibilityUnattainable,
  /// The original program has no solution.
  Infeasible,
};

std::string_view to_string(Status s);

struct SolveStats {
  std::uint64_t lp_pivots = 0;
  std::uint64_t bb_nodes = 0;
};

struct ApproxResult {
  Status status = Status::Infeasible;
  /// Whether `x` holds a point. Always true unless status is Infeasible.
  bool has_solution = false;
  /// The solution; n-fold forms concatenate the blocks.
  IntVector x;
  /// Configuration forms: the index into each block's original P^i.
  std::vector<std::size_t> choices;
  ViolationReport report;
  /// Set when the original is infeasible, so no OPT exists to compare with.
  bool objective_guarantee_vacuous = false;
  Rat delta_used;
  std::size_t refinements = 0;
  SolveStats stats;
  std::vector<std::string> notes;
};

struct AssignmentRestriction;

/// Optional hooks into the pipelines, used by the test suites.
struct PipelineObserver {
  /// Every optimal vertex solution computed, including search-tree nodes.
  std::function<void(const LinearProgram&, const VertexSolution&)> on_lp_vertex;
  /// The vertex solution that is about to be rounded, with the support bound
  /// it must satisfy.
  std::function<void(std::string_view stage, const VertexSolution&, std::size_t bound)>
      on_fractional_support;
  /// The restriction, its fractional point, and the rounded 0/1 values.
  std::function<void(const AssignmentRestriction&, const RatVector& fractional,
                     const std::vector<int>& rounded)>
      on_tu_round;
  /// Rank of one type group's assignment rows over its fractional columns.
  std::function<void(std::size_t rank, std::size_t tau)> on_group_rank;
};

}  // namespace ipapprox
