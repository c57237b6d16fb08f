#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ipapprox/instance.hpp"

namespace ipapprox {

/// max Σ profit_j x_j  s.t.  Σ_j weight_rj x_j <= capacity_r,  x ∈ {0,1}^n.
struct KnapsackInstance {
  RatVector profits;
  std::vector<RatVector> weights;  // one row per dimension
  RatVector capacities;
};

/// Rows are scaled by the lcm of their denominators, so slacks are
/// integers: H = [W | I], b = capacities, w = (−profits, 0).
struct KnapsackReduction {
  GeneralIP ip;
  std::size_t items = 0;
  /// Factor applied to each row.
  IntVector row_scale;
};

struct KnapsackSolution {
  IntVector items;
  IntVector slacks;
};

KnapsackReduction knapsack_to_general(const KnapsackInstance& inst);
KnapsackSolution decode_knapsack(const KnapsackReduction& red, const IntVector& x);
IntVector encode_knapsack(const KnapsackReduction& red, const KnapsackSolution& sol);

/// Unrelated machines: p[i][h] is the time of job i on machine h.
struct SchedulingInstance {
  std::vector<RatVector> p;
  Rat cmax;
  std::optional<std::vector<RatVector>> costs;
};

/// Job blocks come first: block i picks a unit vector e_h with D^i =
/// diag(p_i). Every machine then gets slack blocks, each a single piece of
/// slack capacity with configurations {0, e_h}, so the load constraints
/// become equalities Σ load + slack = ⌊Cmax⌋ while κ = 1 and t = m.
struct ScheduleEncoding {
  NFoldConfigInstance inst;
  std::size_t jobs = 0;
  std::size_t machines = 0;
  /// lcm of the processing-time denominators; times are multiplied by it.
  Int scale;
  /// Machine of each slack block, in block order after the jobs.
  std::vector<std::size_t> slack_machine;
};

struct Schedule {
  std::vector<std::size_t> machine;  // per job
  std::vector<std::size_t> slack_choice;  // per slack block, 0 or 1
};

ScheduleEncoding scheduling_to_config(const SchedulingInstance& inst);
/// As scheduling_to_config with w^i = c_i, so the objective is the total
/// assignment cost.
ScheduleEncoding gap_to_config(const SchedulingInstance& inst);
Schedule decode_schedule(const ScheduleEncoding& enc, const std::vector<std::size_t>& choices);
std::vector<std::size_t> encode_schedule(const ScheduleEncoding& enc, const Schedule& schedule);

/// Largest machine load in the original (unscaled) times.
Rat makespan(const SchedulingInstance& inst, const std::vector<std::size_t>& machine);
Rat max_processing_time(const SchedulingInstance& inst);
/// Σ c_{i, machine(i)}, zero without costs.
Rat assignment_cost(const SchedulingInstance& inst, const std::vector<std::size_t>& machine);

}  // namespace ipapprox
