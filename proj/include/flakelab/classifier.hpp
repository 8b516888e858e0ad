#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flakelab/keywords.hpp"
#include "flakelab/matrix.hpp"

namespace flakelab {

enum class RootCause { NotFlaky, InsufficientData, Infrastructure, OrderDependent, NonOrderDependent };
enum class OdKind { Victim, Brittle, Undetermined };

std::string_view to_string(RootCause c);
std::string_view to_string(OdKind k);

struct Classification {
  TestId test;
  RootCause label = RootCause::NotFlaky;
  /// Set only for OrderDependent; Undetermined until isolation runs are known.
  std::optional<OdKind> od_kind;
  /// Keyword suggestions, only for NonOrderDependent.
  std::vector<CategoryHint> hints;
};

/// Minimum number of PASS/FAIL/ERROR executions needed to judge a test.
inline constexpr std::size_t kMinExecutions = 2;

/// At least one PASS and at least one FAIL/ERROR.
bool is_flaky(const VerdictCounts& counts);

/// Flakiness inside a single iteration. Throws Error(UnknownIteration).
bool flaky_within_iteration(const VerdictMatrix& matrix, std::size_t test_row, std::size_t iteration_id);
bool flaky_within_iteration(const VerdictMatrix& matrix, const TestId& test, std::size_t iteration_id);

/// Root cause from the same-order and shuffled halves of a campaign. Rules
/// are applied in this order:
///   1. not flaky over all runs of both halves           -> NotFlaky
///   2. no iteration of either half is flaky on its own   -> Infrastructure
///   3. flaky over the same-order runs                    -> NonOrderDependent
///   4. otherwise (flaky only once the order is shuffled) -> OrderDependent
/// Infrastructure is checked first: its condition excludes within-iteration
/// flakiness, which both other labels normally show.
///
/// Throws Error(InsufficientData) with fewer than kMinExecutions PASS/FAIL/
/// ERROR executions, and Error(UnknownTest) if the test is in neither matrix.
RootCause classify_root_cause(const VerdictMatrix& same_order, const VerdictMatrix& shuffled, const TestId& test);

/// All PASS -> Victim, all FAIL/ERROR -> Brittle, anything else (mixture,
/// SKIP, ABSENT, empty) -> Undetermined.
OdKind classify_od_kind(std::span<const Verdict> isolation_verdicts);

struct ClassifyInputs {
  /// Isolation verdicts per OD test; OD tests without an entry stay Undetermined.
  std::map<TestId, std::vector<Verdict>> isolation;
  /// Traced qualified call names per test.
  std::map<TestId, std::vector<std::string>> traces;
  /// Test source text per test.
  std::map<TestId, std::string> sources;
  const KeywordTable* keywords = &KeywordTable::defaults();
};

/// Classifies every test of a campaign matrix; InsufficientData becomes a
/// label here instead of an error. Output follows matrix.tests() order.
std::vector<Classification> classify_campaign(const VerdictMatrix& matrix, const ClassifyInputs& inputs = {});

}  // namespace flakelab
