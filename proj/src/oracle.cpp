#include "ipapprox/oracle.hpp"

#include <limits>
#include <optional>
#include <thread>

#include "ipapprox/errors.hpp"

namespace ipapprox {

namespace {

// Level k offers options; option o adds delta[k][o] to the running row
// activity and cost[k][o] to the objective. A leaf is feasible when the
// activity equals target. Options are visited in order, so leaves are
// reached in lexicographic order of the option indices.
struct Problem {
  std::vector<std::vector<std::vector<Int>>> delta;
  std::vector<std::vector<Rat>> cost;
  std::vector<Int> target;
};

struct Best {
  bool found = false;
  Rat value;
  std::vector<std::size_t> path;
  std::uint64_t leaves = 0;
};

template <class T>
class Enumerator {
 public:
  Enumerator(const Problem& p, std::vector<std::vector<std::vector<T>>> delta, std::vector<T> target)
      : p_(p), delta_(std::move(delta)), target_(std::move(target)) {}

  Best run(const std::vector<std::size_t>& first_options) {
    Best best;
    const std::size_t rows = target_.size();
    std::vector<T> activity(rows, T(0));
    std::vector<std::size_t> path(delta_.size());
    if (delta_.empty()) {
      visit_leaf(activity, path, best);
      return best;
    }
    for (std::size_t o : first_options) {
      path[0] = o;
      add(activity, delta_[0][o]);
      descend(1, activity, path, best);
      sub(activity, delta_[0][o]);
    }
    return best;
  }

 private:
  static void add(std::vector<T>& a, const std::vector<T>& d) {
    for (std::size_t r = 0; r < a.size(); ++r) a[r] += d[r];
  }
  static void sub(std::vector<T>& a, const std::vector<T>& d) {
    for (std::size_t r = 0; r < a.size(); ++r) a[r] -= d[r];
  }

  void descend(std::size_t level, std::vector<T>& activity, std::vector<std::size_t>& path, Best& best) {
    if (level == delta_.size()) {
      visit_leaf(activity, path, best);
      return;
    }
    const auto& options = delta_[level];
    for (std::size_t o = 0; o < options.size(); ++o) {
      path[level] = o;
      add(activity, options[o]);
      descend(level + 1, activity, path, best);
      sub(activity, options[o]);
    }
  }

  void visit_leaf(const std::vector<T>& activity, const std::vector<std::size_t>& path, Best& best) {
    ++best.leaves;
    if (activity != target_) return;
    Rat value = 0;
    for (std::size_t k = 0; k < path.size(); ++k) value += p_.cost[k][path[k]];
    if (!best.found || value < best.value) {
      best.found = true;
      best.value = std::move(value);
      best.path = path;
    }
  }

  const Problem& p_;
  std::vector<std::vector<std::vector<T>>> delta_;
  std::vector<T> target_;
};

bool fits_int64(const Problem& p) {
  const Int limit = Int(1) << 60;
  for (std::size_t r = 0; r < p.target.size(); ++r) {
    Int total = abs(p.target[r]);
    for (const auto& level : p.delta) {
      Int worst = 0;
      for (const auto& d : level) worst = std::max(worst, Int(abs(d[r])));
      total += worst;
    }
    if (total >= limit) return false;
  }
  return true;
}

Best run_slice(const Problem& p, const std::vector<std::size_t>& first) {
  if (fits_int64(p)) {
    std::vector<std::vector<std::vector<std::int64_t>>> delta(p.delta.size());
    for (std::size_t k = 0; k < p.delta.size(); ++k)
      for (const auto& d : p.delta[k]) {
        std::vector<std::int64_t> v;
        for (const auto& e : d) v.push_back(to_int64(e));
        delta[k].push_back(std::move(v));
      }
    std::vector<std::int64_t> target;
    for (const auto& e : p.target) target.push_back(to_int64(e));
    return Enumerator<std::int64_t>(p, std::move(delta), std::move(target)).run(first);
  }
  return Enumerator<Int>(p, p.delta, p.target).run(first);
}

Best solve_problem(const Problem& p, const OracleOptions& options) {
  Int size = 1;
  for (const auto& level : p.delta) size *= static_cast<unsigned long>(level.size());
  if (size > Int(static_cast<unsigned long>(options.cap))) {
    throw ResourceLimitError("oracle: " + to_string(size) + " candidate points exceed the cap of " +
                             std::to_string(options.cap));
  }
  if (p.delta.empty() || size == 0) return run_slice(p, {});

  const std::size_t first_count = p.delta.front().size();
  const unsigned workers = std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(first_count)));
  // Contiguous slices of the first level keep every slice in
  // lexicographic order, so the reduction keeps the earliest optimum.
  std::vector<std::vector<std::size_t>> slices(workers);
  for (std::size_t o = 0; o < first_count; ++o) slices[o * workers / first_count].push_back(o);
  std::vector<Best> partial(workers);
  if (workers == 1) {
    partial[0] = run_slice(p, slices[0]);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] { partial[w] = run_slice(p, slices[w]); });
    }
    for (auto& th : threads) th.join();
  }
  Best best;
  for (auto& b : partial) {
    best.leaves += b.leaves;
    if (b.found && (!best.found || b.value < best.value)) {
      best.found = true;
      best.value = b.value;
      best.path = b.path;
    }
  }
  return best;
}

// Multiplies each row by the lcm of its denominators.
std::vector<Int> row_scales(const std::vector<RatVector>& rows_by_source, std::size_t rows) {
  std::vector<Int> scale(rows, Int(1));
  for (const auto& v : rows_by_source)
    for (std::size_t r = 0; r < rows; ++r) mpz_lcm(scale[r].get_mpz_t(), scale[r].get_mpz_t(), v[r].get_den_mpz_t());
  return scale;
}

std::vector<Int> scaled(const RatVector& v, const std::vector<Int>& scale) {
  std::vector<Int> out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r) {
    const Rat e = v[r] * Rat(scale[r]);
    out[r] = e.get_num();
  }
  return out;
}

}  // namespace

OracleResult brute_force_general(const GeneralIP& inst, const OracleOptions& options) {
  const std::size_t m = inst.H.rows();
  const std::size_t n = inst.H.cols();
  std::vector<RatVector> sources;
  for (std::size_t j = 0; j < n; ++j) sources.push_back(inst.H.column(j));
  sources.push_back(inst.b);
  const std::vector<Int> scale = row_scales(sources, m);

  Problem p;
  p.target = scaled(inst.b, scale);
  std::vector<IntVector> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<Int> col = scaled(inst.H.column(j), scale);
    std::vector<std::vector<Int>> level;
    std::vector<Rat> cost;
    for (Int v = inst.l[j]; v <= inst.u[j]; ++v) {
      std::vector<Int> d(m);
      for (std::size_t r = 0; r < m; ++r) d[r] = col[r] * v;
      level.push_back(std::move(d));
      cost.push_back(inst.w[j] * Rat(v));
      values[j].push_back(v);
    }
    p.delta.push_back(std::move(level));
    p.cost.push_back(std::move(cost));
  }
  const Best best = solve_problem(p, options);
  OracleResult out;
  out.points = best.leaves;
  out.feasible = best.found;
  if (best.found) {
    out.opt = best.value;
    for (std::size_t j = 0; j < n; ++j) out.argmin.push_back(values[j][best.path[j]]);
  }
  return out;
}

OracleResult brute_force_config(const NFoldConfigInstance& inst, const OracleOptions& options) {
  const std::size_t s = inst.b0.size();
  std::vector<std::vector<RatVector>> columns(inst.blocks.size());
  std::vector<RatVector> sources{inst.b0};
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    for (const auto& cfg : inst.blocks[i].configs) {
      columns[i].push_back(inst.blocks[i].D.multiply(cfg));
      sources.push_back(columns[i].back());
    }
  }
  const std::vector<Int> scale = row_scales(sources, s);
  Problem p;
  p.target = scaled(inst.b0, scale);
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    std::vector<std::vector<Int>> level;
    std::vector<Rat> cost;
    for (std::size_t c = 0; c < columns[i].size(); ++c) {
      level.push_back(scaled(columns[i][c], scale));
      cost.push_back(dot(inst.blocks[i].weights, inst.blocks[i].configs[c]));
    }
    p.delta.push_back(std::move(level));
    p.cost.push_back(std::move(cost));
  }
  const Best best = solve_problem(p, options);
  OracleResult out;
  out.points = best.leaves;
  out.feasible = best.found;
  if (best.found) {
    out.opt = best.value;
    out.choices = best.path;
    for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
      const auto& cfg = inst.blocks[i].configs[best.path[i]];
      out.argmin.insert(out.argmin.end(), cfg.begin(), cfg.end());
    }
  }
  return out;
}

OracleResult brute_force_nfold(const NFoldNonnegInstance& inst, const OracleOptions& options) {
  return brute_force_general(flatten(inst), options);
}

}  // namespace ipapprox
