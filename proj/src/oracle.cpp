#include "flakelab/oracle.hpp"

#include <cmath>

namespace flakelab {

std::vector<RateTriple> oracle_rate_grid() {
  std::vector<RateTriple> grid;
  for (double pass : {0.02, 0.1, 0.3, 0.5, 0.7, 0.9, 0.98}) {
    grid.push_back({pass, 1.0 - pass, 0.0});
  }
  for (double pass : {0.1, 0.4, 0.6, 0.85}) {
    for (double skip : {0.05, 0.3}) {
      const double fail = 1.0 - pass - skip;
      if (fail > 0.0) grid.push_back({pass, fail, skip});
    }
  }
  // Rates that do not exhaust the probability mass.
  grid.push_back({0.5, 0.25, 0.25});
  grid.push_back({0.3, 0.3, 0.1});
  grid.push_back({0.995, 0.005, 0.0});
  grid.push_back({1.0, 0.0, 0.0});
  grid.push_back({0.0, 1.0, 0.0});
  grid.push_back({0.0, 0.0, 1.0});
  return grid;
}

std::vector<OracleRow> run_unveil_oracle(std::size_t trials, std::uint64_t seed, double tolerance) {
  std::vector<OracleRow> rows;
  std::uint64_t cell = 0;
  for (const auto& rates : oracle_rate_grid()) {
    for (auto n : kOracleRunCounts) {
      OracleRow row;
      row.rates = rates;
      row.n = n;
      row.analytic = unveil_probability(rates, n);
      row.simulated = monte_carlo_unveil(rates, n, trials, seed + 0x9e3779b97f4a7c15ULL * ++cell);
      row.within_tolerance = std::abs(row.analytic - row.simulated) <= tolerance;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace flakelab
