#pragma once

#include <cstddef>
#include <vector>

#include "ipapprox/boxing.hpp"
#include "ipapprox/instance.hpp"
#include "ipapprox/mip.hpp"
#include "ipapprox/result.hpp"

namespace ipapprox {

/// Columns 0..n−1 are the original x (continuous), column n + k is the
/// integer group total y_k of box group k.
struct Mip1 {
  MixedModel model;
  std::size_t n = 0;
  std::size_t groups = 0;
};

/// Coupling rows Σ_k v_k y_k + Σ_j h̃_j x_j = b, then one row
/// Σ_{j∈I_k} x_j − y_k = 0 per occupied box.
Mip1 build_mip1(const GeneralIP& inst, const BoxPartition& part);

/// The LP over x that keeps the residual activity and every group total
/// at the values attained by the mixed solution.
LinearProgram restrict_lp2(const GeneralIP& inst, const BoxPartition& part, const MixedSolution& mixed);

/// |nisupp| <= 2m.
bool claim1_check(const VertexSolution& sol, std::size_t m);

struct GroupRoundingPlan {
  /// Sorted by nondecreasing weight, ties by index.
  std::vector<std::size_t> members;
  IntVector floors;
  RatVector fractional;
  RatVector weights;
  Int gamma;
};

/// Plan for one group from its members' values and weights. Throws
/// InvariantViolation if the fractional parts do not sum to an integer.
GroupRoundingPlan make_rounding_plan(const std::vector<std::size_t>& members, const RatVector& values,
                                     const RatVector& weights);

/// Rounds up the first γ fractional members of the plan and floors the
/// rest. The result is aligned with plan.members.
IntVector greedy_group_round(const GroupRoundingPlan& plan);

/// Near-feasible integer point with ‖H x − b‖∞ <= ε‖H‖∞ and objective at
/// most the optimum.
ApproxResult solve_general(const GeneralIP& inst, const ApproxParams& params);

}  // namespace ipapprox
