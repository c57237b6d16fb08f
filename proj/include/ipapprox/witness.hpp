#pragma once

#include <optional>

#include "ipapprox/instance.hpp"
#include "ipapprox/mip.hpp"
#include "ipapprox/result.hpp"

namespace ipapprox {

/// An integer system H x = b, l <= x <= u, with a permitted deviation per
/// row. Row r may deviate by at most radius[r]; `weight[r]` scales row r in
/// the minimum-violation search (zero means the row must hold exactly).
struct ToleranceSystem {
  GeneralIP ip;
  RatVector radius;
  RatVector weight;
};

struct Witness {
  IntVector x;
  SolveStats stats;
};

/// Cheapest integer point with every row inside its radius.
std::optional<Witness> cheapest_within_radius(const ToleranceSystem& sys, const ApproxParams& params);

/// Integer point minimizing θ subject to |H x − b|_r <= θ·weight[r].
std::optional<Witness> least_violation(const ToleranceSystem& sys, const ApproxParams& params);

struct FallbackOutcome {
  /// Infeasible when a point within every radius exists or no point exists
  /// at all; NearFeasibilityUnattainable otherwise.
  Status status = Status::Infeasible;
  std::optional<IntVector> witness;
  SolveStats stats;
  std::string note;
};

/// Run once a pipeline has proved the original infeasible: looks for the
/// cheapest point within the radii, then for the least violating point.
FallbackOutcome infeasible_fallback(const ToleranceSystem& sys, const ApproxParams& params);

/// Search options that forward node relaxations to the observer.
MipOptions mip_options(const ApproxParams& params);

}  // namespace ipapprox
