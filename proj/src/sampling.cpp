#include "flakelab/sampling.hpp"

#include "flakelab/error.hpp"
#include "flakelab/random.hpp"

namespace flakelab {

std::vector<TestId> stratified_sample(const std::map<std::string, std::set<TestId>>& tests_by_project, std::size_t k,
                                      std::uint64_t seed) {
  std::vector<const std::set<TestId>*> pool;
  for (const auto& [_, tests] : tests_by_project) {
    if (!tests.empty()) pool.push_back(&tests);
  }
  if (k > pool.size()) {
    throw Error(ErrorCode::NotEnoughProjects,
                "asked for " + std::to_string(k) + " projects, only " + std::to_string(pool.size()) + " available");
  }

  std::mt19937_64 rng(seed);
  std::vector<TestId> sample;
  sample.reserve(k);
  // Partial Fisher-Yates over the project pool.
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + uniform_below(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
    const auto& tests = *pool[i];
    auto it = tests.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(uniform_below(rng, tests.size())));
    sample.push_back(*it);
  }
  return sample;
}

}  // namespace flakelab
