#pragma once

#include <cstdint>
#include <random>

#include "ipapprox/apps.hpp"
#include "ipapprox/instance.hpp"

namespace ipapprox {

/// Seeded draws by plain modulo reduction.
class GenRng {
 public:
  explicit GenRng(std::uint64_t seed) : engine_(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin() { return (engine_() & 1U) != 0; }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(v.size()) - 1))]; }

 private:
  std::mt19937_64 engine_;
};

struct GeneralGenSpec {
  std::size_t m = 2;
  std::size_t n = 6;
  std::int64_t delta_max = 5;   // |H entries|
  std::int64_t bound_max = 5;   // width of each [l, u]
  /// Cap on prod (u_j - l_j + 1).
  double box_cap = 2e6;
};

struct ConfigGenSpec {
  std::size_t blocks = 4;
  std::size_t s = 2;
  std::size_t t = 2;
  std::int64_t delta_max = 3;   // |D entries|
  std::int64_t kappa_max = 2;   // |configuration entries|
  std::size_t configs_max = 4;
};

struct NonnegGenSpec {
  std::size_t blocks = 3;
  std::size_t sa = 2;
  std::size_t sd = 2;
  std::size_t t = 2;
  std::int64_t delta_max = 3;
  std::int64_t u_max = 3;
  /// When set (and t >= 2), some blocks get one column with large A entries
  /// next to one with tiny entries.
  bool mixed_columns = true;
};

struct SchedulingGenSpec {
  std::size_t jobs = 5;
  std::size_t machines = 2;
  std::int64_t p_max = 5;
  bool with_costs = false;
};

/// Every generator plants an integer point, so the instances are feasible
/// by construction.
GeneralIP generate_general(const GeneralGenSpec& spec, GenRng& rng);
NFoldConfigInstance generate_config(const ConfigGenSpec& spec, GenRng& rng);
NFoldNonnegInstance generate_nonneg(const NonnegGenSpec& spec, GenRng& rng);
/// cmax is the makespan of a random assignment.
SchedulingInstance generate_scheduling(const SchedulingGenSpec& spec, GenRng& rng);

}  // namespace ipapprox
