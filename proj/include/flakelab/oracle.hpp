#pragma once

#include <cstdint>
#include <vector>

#include "flakelab/rerun_stats.hpp"

namespace flakelab {

struct OracleRow {
  RateTriple rates;
  std::size_t n = 0;
  double analytic = 0.0;
  double simulated = 0.0;
  bool within_tolerance = false;
};

/// Rate triples spanning no-skip, some-skip and rare-failure regimes.
std::vector<RateTriple> oracle_rate_grid();
inline const std::vector<std::size_t> kOracleRunCounts = {1, 2, 5, 10, 50, 170};

/// Compares unveil_probability with monte_carlo_unveil over the grid. Each
/// cell gets its own seed derived from `seed` so cells are independent.
std::vector<OracleRow> run_unveil_oracle(std::size_t trials, std::uint64_t seed, double tolerance);

}  // namespace flakelab
