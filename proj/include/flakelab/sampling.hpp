#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "flakelab/test_id.hpp"

namespace flakelab {

/// Picks k distinct projects uniformly among those with at least one test,
/// then one test uniformly from each. Deterministic for a seed; the result
/// is in selection order. Throws Error(NotEnoughProjects).
std::vector<TestId> stratified_sample(const std::map<std::string, std::set<TestId>>& tests_by_project, std::size_t k,
                                      std::uint64_t seed);

}  // namespace flakelab
