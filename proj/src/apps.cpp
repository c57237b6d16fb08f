#include "ipapprox/apps.hpp"

#include <algorithm>
#include <stdexcept>

namespace ipapprox {

namespace {

Int lcm_of_denominators(const RatVector& v, Int acc = 1) {
  for (const auto& e : v) mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), e.get_den_mpz_t());
  return acc;
}

}  // namespace

KnapsackReduction knapsack_to_general(const KnapsackInstance& inst) {
  const std::size_t n = inst.profits.size();
  const std::size_t m = inst.capacities.size();
  if (inst.weights.size() != m) throw std::invalid_argument("knapsack: one weight row per capacity");
  for (const auto& row : inst.weights)
    if (row.size() != n) throw std::invalid_argument("knapsack: weight row length differs from item count");
  for (const auto& p : inst.profits)
    if (sgn(p) < 0) throw std::invalid_argument("knapsack: negative profit");
  for (std::size_t r = 0; r < m; ++r) {
    if (sgn(inst.capacities[r]) < 0) throw std::invalid_argument("knapsack: negative capacity");
    for (const auto& e : inst.weights[r])
      if (sgn(e) < 0) throw std::invalid_argument("knapsack: negative weight");
  }
  KnapsackReduction red;
  red.items = n;
  red.ip.H = RatMatrix(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    const Int f = lcm_of_denominators(inst.weights[r], lcm_of_denominators({inst.capacities[r]}));
    red.row_scale.push_back(f);
    for (std::size_t j = 0; j < n; ++j) red.ip.H(r, j) = inst.weights[r][j] * Rat(f);
    red.ip.H(r, n + r) = 1;
    red.ip.b.push_back(inst.capacities[r] * Rat(f));
  }
  for (std::size_t j = 0; j < n; ++j) {
    red.ip.w.push_back(-inst.profits[j]);
    red.ip.l.emplace_back(0);
    red.ip.u.emplace_back(1);
  }
  for (std::size_t r = 0; r < m; ++r) {
    red.ip.w.emplace_back(0);
    red.ip.l.emplace_back(0);
    red.ip.u.push_back(red.ip.b[r].get_num());
  }
  return red;
}

KnapsackSolution decode_knapsack(const KnapsackReduction& red, const IntVector& x) {
  if (x.size() != red.ip.H.cols()) throw std::invalid_argument("decode_knapsack: dimension mismatch");
  KnapsackSolution sol;
  sol.items.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(red.items));
  sol.slacks.assign(x.begin() + static_cast<std::ptrdiff_t>(red.items), x.end());
  return sol;
}

IntVector encode_knapsack(const KnapsackReduction& red, const KnapsackSolution& sol) {
  IntVector x = sol.items;
  x.insert(x.end(), sol.slacks.begin(), sol.slacks.end());
  if (x.size() != red.ip.H.cols()) throw std::invalid_argument("encode_knapsack: dimension mismatch");
  return x;
}

namespace {

ScheduleEncoding encode(const SchedulingInstance& inst, bool with_costs) {
  const std::size_t n = inst.p.size();
  if (n == 0) throw std::invalid_argument("scheduling: no jobs");
  const std::size_t m = inst.p.front().size();
  if (m == 0) throw std::invalid_argument("scheduling: no machines");
  if (sgn(inst.cmax) < 0) throw std::invalid_argument("scheduling: negative Cmax");
  Int scale = 1;
  for (const auto& row : inst.p) {
    if (row.size() != m) throw std::invalid_argument("scheduling: ragged processing-time matrix");
    for (const auto& e : row)
      if (sgn(e) < 0) throw std::invalid_argument("scheduling: negative processing time");
    scale = lcm_of_denominators(row, scale);
  }
  if (with_costs) {
    if (!inst.costs || inst.costs->size() != n) throw std::invalid_argument("scheduling: costs must have one row per job");
    for (const auto& row : *inst.costs) {
      if (row.size() != m) throw std::invalid_argument("scheduling: ragged cost matrix");
      for (const auto& e : row)
        if (sgn(e) < 0) throw std::invalid_argument("scheduling: negative cost");
    }
  }

  ScheduleEncoding enc;
  enc.jobs = n;
  enc.machines = m;
  enc.scale = scale;
  const Rat f(scale);
  const Int capacity = floor(Rat(inst.cmax * f));
  enc.inst.b0.assign(m, Rat(capacity));
  Int pmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ConfigBlock blk;
    blk.D = RatMatrix(m, m);
    for (std::size_t h = 0; h < m; ++h) {
      blk.D(h, h) = inst.p[i][h] * f;
      pmax = std::max(pmax, Int(blk.D(h, h).get_num()));
      IntVector e(m, Int(0));
      e[h] = 1;
      blk.configs.push_back(std::move(e));
      blk.weights.push_back(with_costs ? (*inst.costs)[i][h] : Rat(0));
    }
    enc.inst.blocks.push_back(std::move(blk));
  }
  if (pmax == 0) pmax = 1;
  // Slack pieces: ⌊C/P⌋ pieces of P plus a binary decomposition of
  // min(P − 1, C), which together reach every value in [0, C].
  std::vector<Int> pieces;
  for (Int k = capacity / pmax; k > 0; --k) pieces.push_back(pmax);
  Int rest = std::min(Int(pmax - 1), capacity);
  for (Int piece = 1; rest > 0; piece *= 2) {
    const Int take = std::min(piece, rest);
    pieces.push_back(take);
    rest -= take;
  }
  for (std::size_t h = 0; h < m; ++h) {
    for (const auto& piece : pieces) {
      ConfigBlock blk;
      blk.D = RatMatrix(m, m);
      blk.D(h, h) = Rat(piece);
      IntVector e(m, Int(0));
      blk.configs.push_back(e);
      e[h] = 1;
      blk.configs.push_back(std::move(e));
      blk.weights.assign(m, Rat(0));
      enc.inst.blocks.push_back(std::move(blk));
      enc.slack_machine.push_back(h);
    }
  }
  return enc;
}

}  // namespace

ScheduleEncoding scheduling_to_config(const SchedulingInstance& inst) { return encode(inst, false); }

ScheduleEncoding gap_to_config(const SchedulingInstance& inst) { return encode(inst, true); }

Schedule decode_schedule(const ScheduleEncoding& enc, const std::vector<std::size_t>& choices) {
  if (choices.size() != enc.inst.blocks.size()) throw std::invalid_argument("decode_schedule: one choice per block");
  Schedule s;
  s.machine.assign(choices.begin(), choices.begin() + static_cast<std::ptrdiff_t>(enc.jobs));
  s.slack_choice.assign(choices.begin() + static_cast<std::ptrdiff_t>(enc.jobs), choices.end());
  return s;
}

std::vector<std::size_t> encode_schedule(const ScheduleEncoding& enc, const Schedule& schedule) {
  std::vector<std::size_t> choices = schedule.machine;
  choices.insert(choices.end(), schedule.slack_choice.begin(), schedule.slack_choice.end());
  if (choices.size() != enc.inst.blocks.size()) throw std::invalid_argument("encode_schedule: one choice per block");
  return choices;
}

Rat makespan(const SchedulingInstance& inst, const std::vector<std::size_t>& machine) {
  const std::size_t m = inst.p.empty() ? 0 : inst.p.front().size();
  RatVector load(m);
  for (std::size_t i = 0; i < machine.size(); ++i) load[machine[i]] += inst.p[i][machine[i]];
  Rat best = 0;
  for (const auto& l : load) best = std::max(best, l);
  return best;
}

Rat max_processing_time(const SchedulingInstance& inst) {
  Rat best = 0;
  for (const auto& row : inst.p)
    for (const auto& e : row) best = std::max(best, e);
  return best;
}

Rat assignment_cost(const SchedulingInstance& inst, const std::vector<std::size_t>& machine) {
  if (!inst.costs) return 0;
  Rat total = 0;
  for (std::size_t i = 0; i < machine.size(); ++i) total += (*inst.costs)[i][machine[i]];
  return total;
}

}  // namespace ipapprox
