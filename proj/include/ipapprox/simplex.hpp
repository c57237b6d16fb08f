#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ipapprox/matrix.hpp"

namespace ipapprox {

/// minimize objective·x  s.t.  A x = rhs,  lower <= x <= upper (all finite).
struct LinearProgram {
  RatMatrix A;
  RatVector rhs;
  RatVector lower;
  RatVector upper;
  RatVector objective;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct VertexSolution {
  LpStatus status = LpStatus::Infeasible;
  RatVector values;
  /// Structural columns that are basic at termination, ascending.
  std::vector<std::size_t> basis;
  Rat objective_value = 0;
  std::uint64_t pivots = 0;
};

/// Throws std::invalid_argument on dimension mismatch or crossed bounds.
void check_well_formed(const LinearProgram& lp);

/// Exact bounded-variable primal simplex (artificial-variable phase 1,
/// Bland's rule in both phases, smallest-index ratio-test ties). Optimal
/// results are basic: every non-basic column sits at a bound, so the
/// columns strictly inside their bounds are linearly independent.
VertexSolution solve_lp_vertex(const LinearProgram& lp);

/// Indices whose value is not an integer.
std::vector<std::size_t> nonintegral_support(const VertexSolution& sol);
std::vector<std::size_t> nonintegral_support(const RatVector& values);

/// Columns of the solution strictly between their bounds.
std::vector<std::size_t> strictly_interior_columns(const LinearProgram& lp,
                                                    const RatVector& values);

/// Exact feasibility check of a point (equalities and bounds).
bool is_feasible_point(const LinearProgram& lp, const RatVector& x);

}  // namespace ipapprox
