#pragma once

#include <cstddef>
#include <vector>

#include "ipapprox/boxing.hpp"
#include "ipapprox/config_solver.hpp"
#include "ipapprox/instance.hpp"
#include "ipapprox/result.hpp"

namespace ipapprox {

struct ScaledBlock {
  /// Surviving rows of A, each divided by its right-hand side (now 1).
  RatMatrix A;
  /// Original row index of each surviving row.
  std::vector<std::size_t> row_map;
  /// Columns forced to zero, ascending.
  std::vector<std::size_t> fixed_zero_vars;
  RatMatrix D;
  IntVector u;
  RatVector w;
};

/// Rows with right-hand side 0 fix every variable with a nonzero entry
/// there and are dropped; all-zero such rows are simply dropped. The
/// remaining rows are scaled to right-hand side 1.
std::vector<ScaledBlock> normalize_blocks(const NFoldNonnegInstance& inst);

enum class ColumnKind { Big, Small };

struct ColumnSplit {
  std::vector<ColumnKind> kind;
  IntVector lambda;
  IntVector major_upper;
  IntVector minor_upper;
};

/// Big columns have an entry >= ψ and λ = 1. A small column gets the least
/// λ with λ·max_r A_rj >= ψ; its major part ranges over [0, ⌊u/λ⌋] and its
/// minor part over [0, min(λ−1, u)]. Fixed columns are big with both bounds
/// 0. Throws UnsupportedInstance on an unfixed all-zero column.
ColumnSplit classify_and_split(const ScaledBlock& block, const Rat& psi);

/// Every major vector x' with Σ_j λ_j A_j x'_j inside [lo, hi] on each row.
/// Throws ResourceLimitError after `limit` search nodes.
std::vector<IntVector> enumerate_major_configs(const ScaledBlock& block, const ColumnSplit& split,
                                               const Rat& lo, const Rat& hi, std::uint64_t limit);

/// The window [1 − ε/2, 1 + ε/2].
std::vector<IntVector> enumerate_major_configs(const ScaledBlock& block, const ColumnSplit& split,
                                               const Rat& epsilon, std::uint64_t limit);

/// Configuration instance over the coupling rows `rows`, with λ_j folded
/// into column j of D and w.
NFoldConfigInstance major_instance(const std::vector<ScaledBlock>& blocks, const std::vector<ColumnSplit>& splits,
                                   const std::vector<std::vector<IntVector>>& configs,
                                   const std::vector<std::size_t>& rows, const RatVector& b0);

struct MinorVar {
  std::size_t block;
  std::size_t column;
};

/// The configuration model over major vectors, extended by the minor
/// columns x'' (one per small column with a positive minor bound) and one
/// integer group total y_d per occupied box of their D columns.
struct Mip6 {
  ConfigModel cm;
  std::vector<MinorVar> minor;
  BoxPartition minor_part;
  std::size_t minor0 = 0;  // first x'' column
  std::size_t group0 = 0;  // first y_d column
  std::size_t group_row0 = 0;
};

/// `rows` selects the coupling rows (those with positive b0) and `norm`
/// holds the major configurations with λ folded into D and w.
Mip6 build_mip6(const std::vector<ScaledBlock>& blocks, const std::vector<ColumnSplit>& splits,
                const std::vector<std::size_t>& rows, const NormalizedConfigs& norm,
                const ConfigBoxPartition& part, const Rat& delta2);

/// Near-feasible point with (1−ε)b <= activity <= (1+ε)b on every row of
/// the original instance and objective at most the optimum.
ApproxResult solve_nfold(const NFoldNonnegInstance& inst, const ApproxParams& params);

}  // namespace ipapprox
