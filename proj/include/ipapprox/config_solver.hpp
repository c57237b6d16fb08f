#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ipapprox/boxing.hpp"
#include "ipapprox/instance.hpp"
#include "ipapprox/mip.hpp"
#include "ipapprox/result.hpp"

namespace ipapprox {

struct NormalizedConfigs {
  std::size_t tau = 0;
  /// Deduplicated configurations, each block padded to τ.
  NFoldConfigInstance padded;
  /// origin[i][φ]: index in the original P^i of padded configuration φ.
  std::vector<std::vector<std::size_t>> origin;
  /// 𝒟^i = (D^i p^i_1 … D^i p^i_τ), s × τ.
  std::vector<RatMatrix> dcal;
  /// cost[i][φ] = w^i · p^i_φ.
  std::vector<RatVector> cost;
};

/// Removes duplicate configurations and pads every block to τ by repeating
/// its first one. Returns nullopt when some block has no configuration.
std::optional<NormalizedConfigs> normalize_configs(const NFoldConfigInstance& inst);

struct ConfigModel {
  MixedModel model;
  std::size_t blocks = 0;
  std::size_t tau = 0;
  std::size_t types = 0;
  std::size_t z_col(std::size_t i, std::size_t phi) const { return i * tau + phi; }
  std::size_t y_col(std::size_t k, std::size_t phi) const { return blocks * tau + k * tau + phi; }
};

/// s coupling rows in canonical-plus-residual form, one linking row per
/// (occupied type, φ), one selection row per block.
ConfigModel build_mip4(const NormalizedConfigs& norm, const ConfigBoxPartition& part);

/// Bipartite system over fractional assignment entries: each variable lies
/// in exactly one block row and one (type, φ) row, so the constraint
/// matrix is totally unimodular.
struct AssignmentRestriction {
  std::size_t block_rows = 0;
  std::size_t column_rows = 0;
  std::vector<std::size_t> var_block;
  std::vector<std::size_t> var_column;
  RatVector cost;
  RatVector block_rhs;
  RatVector column_rhs;
};

/// Optimal 0/1 point of the restriction, found as a vertex of its LP.
/// Throws InvariantViolation on a non-integral right-hand side or vertex.
std::vector<int> tu_round(const AssignmentRestriction& restriction);

/// The LP over the z columns of `cm` with every other column fixed at its
/// value in `values`.
LinearProgram fix_assignment_lp(const ConfigModel& cm, const RatVector& values);

/// Selected configuration per block: entries of z equal to 1 are kept and
/// the fractional ones are rounded with tu_round. `values` supplies y.
std::vector<std::size_t> round_assignment(const ConfigModel& cm, const ConfigBoxPartition& part,
                                          const NormalizedConfigs& norm, const RatVector& values,
                                          const RatVector& z, const PipelineObserver* obs);

/// Reports, per type group, the rank of its linking and selection rows over
/// the group's fractional z columns.
void report_group_ranks(const ConfigModel& cm, const ConfigBoxPartition& part, const RatVector& z,
                        const PipelineObserver& obs);

struct ConfigCoreOutcome {
  bool mip_infeasible = false;
  /// Chosen padded configuration per block.
  std::vector<std::size_t> chosen;
  IntVector x;
  ViolationReport report;
  Rat delta_used;
  std::size_t refinements = 0;
  SolveStats stats;
};

/// The configuration pipeline starting from width `delta`, halving it until
/// `report(x)` is within bound or the refinement limit is reached.
ConfigCoreOutcome config_core(const NormalizedConfigs& norm, Rat delta,
                              const std::function<ViolationReport(const IntVector&)>& report,
                              const ApproxParams& params);

/// Near-feasible choice of one configuration per block with
/// ‖Σ D^i x^i − b0‖∞ <= ε·max_i‖D^i‖∞ and objective at most the optimum.
ApproxResult solve_nfold_config(const NFoldConfigInstance& inst, const ApproxParams& params);

}  // namespace ipapprox
