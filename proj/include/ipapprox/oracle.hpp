#pragma once

#include <cstdint>
#include <vector>

#include "ipapprox/instance.hpp"

namespace ipapprox {

struct OracleOptions {
  /// Largest number of candidate points enumerated before failing.
  std::uint64_t cap = 10'000'000;
  /// Threads sharing the enumeration. The result does not depend on it.
  unsigned workers = 1;
};

struct OracleResult {
  bool feasible = false;
  Rat opt;
  /// Lexicographically first optimal point.
  IntVector argmin;
  /// Configuration form: chosen index per block.
  std::vector<std::size_t> choices;
  std::uint64_t points = 0;
};

/// Exact optimum over the bound box. Throws ResourceLimitError past the cap.
OracleResult brute_force_general(const GeneralIP& inst, const OracleOptions& options = {});
/// Exact optimum over all choice functions.
OracleResult brute_force_config(const NFoldConfigInstance& inst, const OracleOptions& options = {});
/// Exact optimum over the full box 0 <= x <= u.
OracleResult brute_force_nfold(const NFoldNonnegInstance& inst, const OracleOptions& options = {});

}  // namespace ipapprox
