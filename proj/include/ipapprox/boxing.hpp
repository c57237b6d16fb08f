#pragma once

#include <cstddef>
#include <vector>

#include "ipapprox/matrix.hpp"

namespace ipapprox {

/// One λ per coordinate; the box is Π ((λ_i−1)·δ·scale, λ_i·δ·scale].
using BoxIndex = IntVector;

/// Largest 1/N (N integer) not exceeding delta. Throws unless delta > 0.
Rat snap_delta(const Rat& delta);

/// λ_i = ⌈v_i / (δ·scale)⌉ clamped to [1 − 1/δ, 1/δ], with δ snapped first.
/// Throws std::invalid_argument if some |v_i| exceeds scale.
BoxIndex box_index(const RatVector& v, const Rat& delta, const Rat& scale);

/// Lower corner of the box: (λ_i − 1)·δ·scale.
RatVector canonical_vector(const BoxIndex& idx, const Rat& delta, const Rat& scale);

struct BoxGroup {
  BoxIndex index;
  std::vector<std::size_t> members;  // ascending
  RatVector canonical;
};

struct BoxPartition {
  Rat delta;  // snapped
  Rat scale;
  /// Occupied boxes only, ordered by index.
  std::vector<BoxGroup> groups;
  /// Position in `groups` of each column.
  std::vector<std::size_t> column_group;
  /// column_j − canonical of its box.
  std::vector<RatVector> residuals;
};

/// Boxes the given vectors with side delta·scale.
BoxPartition partition_vectors(const std::vector<RatVector>& vectors, const Rat& delta,
                               const Rat& scale);

/// Boxes the columns of H with scale ‖H‖∞ (1 if H is zero).
BoxPartition partition_columns(const RatMatrix& H, const Rat& delta);

struct TypeGroup {
  /// Box index of each of the τ columns.
  std::vector<BoxIndex> key;
  std::vector<std::size_t> members;  // block indices, ascending
  /// τ canonical vectors.
  std::vector<RatVector> canonicals;
};

struct ConfigBoxPartition {
  Rat delta;
  Rat scale;
  std::vector<TypeGroup> types;
  std::vector<std::size_t> block_type;
  /// Per block, the s × τ matrix of column residuals.
  std::vector<RatMatrix> residuals;
};

/// Types the blocks by the box indices of their configuration columns,
/// with scale max_i ‖𝒟^i‖∞ (1 if all are zero), unless `scale` is given.
ConfigBoxPartition partition_config_columns(const std::vector<RatMatrix>& dcal, const Rat& delta);
ConfigBoxPartition partition_config_columns(const std::vector<RatMatrix>& dcal, const Rat& delta,
                                            const Rat& scale);

}  // namespace ipapprox
