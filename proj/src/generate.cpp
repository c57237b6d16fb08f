#include "ipapprox/generate.hpp"

#include <stdexcept>

namespace ipapprox {

std::int64_t GenRng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("GenRng::uniform: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

namespace {

RatMatrix random_matrix(GenRng& rng, std::size_t rows, std::size_t cols, std::int64_t lo, std::int64_t hi) {
  RatMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = Rat(static_cast<long>(rng.uniform(lo, hi)));
  return m;
}

}  // namespace

GeneralIP generate_general(const GeneralGenSpec& spec, GenRng& rng) {
  GeneralIP g;
  g.H = random_matrix(rng, spec.m, spec.n, -spec.delta_max, spec.delta_max);
  IntVector x0(spec.n);
  double points = 1;
  for (std::size_t j = 0; j < spec.n; ++j) {
    const std::int64_t lo = rng.uniform(-spec.bound_max / 2, 0);
    std::int64_t width = rng.uniform(1, spec.bound_max);
    while (width > 0 && points * static_cast<double>(width + 1) > spec.box_cap) --width;
    points *= static_cast<double>(width + 1);
    g.l.push_back(Int(static_cast<long>(lo)));
    g.u.push_back(Int(static_cast<long>(lo + width)));
    x0[j] = Int(static_cast<long>(lo + rng.uniform(0, width)));
    g.w.push_back(Rat(static_cast<long>(rng.uniform(-5, 5))));
  }
  g.b = g.H.multiply(x0);
  return g;
}

NFoldConfigInstance generate_config(const ConfigGenSpec& spec, GenRng& rng) {
  NFoldConfigInstance inst;
  inst.b0.assign(spec.s, Rat(0));
  for (std::size_t i = 0; i < spec.blocks; ++i) {
    ConfigBlock b;
    b.D = random_matrix(rng, spec.s, spec.t, -spec.delta_max, spec.delta_max);
    const auto count = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(spec.configs_max)));
    for (std::size_t c = 0; c < count; ++c) {
      IntVector p(spec.t);
      for (auto& e : p) e = Int(static_cast<long>(rng.uniform(-spec.kappa_max, spec.kappa_max)));
      b.configs.push_back(std::move(p));
    }
    for (std::size_t j = 0; j < spec.t; ++j) b.weights.push_back(Rat(static_cast<long>(rng.uniform(-5, 5))));
    const RatVector col = b.D.multiply(rng.pick(b.configs));
    for (std::size_t r = 0; r < spec.s; ++r) inst.b0[r] += col[r];
    inst.blocks.push_back(std::move(b));
  }
  return inst;
}

NFoldNonnegInstance generate_nonneg(const NonnegGenSpec& spec, GenRng& rng) {
  NFoldNonnegInstance inst;
  inst.b0.assign(spec.sd, Rat(0));
  const bool mixed = spec.mixed_columns && spec.t >= 2 && rng.coin();
  for (std::size_t i = 0; i < spec.blocks; ++i) {
    NonnegBlock b;
    b.A = random_matrix(rng, spec.sa, spec.t, 0, spec.delta_max);
    if (mixed) {
      for (std::size_t r = 0; r < spec.sa; ++r) {
        b.A(r, 0) = Rat(static_cast<long>(rng.uniform(0, 1)));
        b.A(r, 1) = Rat(static_cast<long>(rng.uniform(15, 30)));
      }
      b.A(0, 0) = 1;
    }
    // No all-zero columns in A.
    for (std::size_t j = 0; j < spec.t; ++j) {
      bool nonzero = false;
      for (std::size_t r = 0; r < spec.sa; ++r) nonzero = nonzero || b.A(r, j) != 0;
      if (!nonzero) b.A(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(spec.sa) - 1)), j) = 1;
    }
    b.D = random_matrix(rng, spec.sd, spec.t, 0, spec.delta_max);
    IntVector x0(spec.t);
    for (std::size_t j = 0; j < spec.t; ++j) {
      const std::int64_t u = rng.uniform(0, spec.u_max);
      b.u.push_back(Int(static_cast<long>(u)));
      x0[j] = Int(static_cast<long>(rng.uniform(0, u)));
      b.w.push_back(Rat(static_cast<long>(rng.uniform(-5, 5))));
    }
    b.bi = b.A.multiply(x0);
    const RatVector d = b.D.multiply(x0);
    for (std::size_t r = 0; r < spec.sd; ++r) inst.b0[r] += d[r];
    inst.blocks.push_back(std::move(b));
  }
  return inst;
}

SchedulingInstance generate_scheduling(const SchedulingGenSpec& spec, GenRng& rng) {
  SchedulingInstance s;
  for (std::size_t i = 0; i < spec.jobs; ++i) {
    RatVector row;
    for (std::size_t h = 0; h < spec.machines; ++h) row.push_back(Rat(static_cast<long>(rng.uniform(1, spec.p_max))));
    s.p.push_back(std::move(row));
  }
  if (spec.with_costs) {
    std::vector<RatVector> costs;
    for (std::size_t i = 0; i < spec.jobs; ++i) {
      RatVector row;
      for (std::size_t h = 0; h < spec.machines; ++h) row.push_back(Rat(static_cast<long>(rng.uniform(0, 5))));
      costs.push_back(std::move(row));
    }
    s.costs = std::move(costs);
  }
  std::vector<std::size_t> machine(spec.jobs);
  for (auto& h : machine) h = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(spec.machines) - 1));
  s.cmax = makespan(s, machine);
  return s;
}

}  // namespace ipapprox
