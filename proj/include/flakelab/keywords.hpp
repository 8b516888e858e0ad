#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flakelab {

enum class FlakinessCategory { AsyncWait, Concurrency, IO, Network, Time, Random, UnorderedCollection };

std::string_view to_string(FlakinessCategory c);
std::optional<FlakinessCategory> parse_category(std::string_view text);

enum class HintSource { Trace, TestSource };

struct CategoryHint {
  FlakinessCategory category;
  std::set<std::string> matched_keywords;  // never empty
  std::set<HintSource> sources;

  friend bool operator==(const CategoryHint&, const CategoryHint&) = default;
};

struct KeywordRule {
  FlakinessCategory category;
  std::string keyword;  // dotted name, e.g. "pathlib.Path.is_dir"
};

/// Category -> characteristic API names. The default table holds the
/// keywords obtained by tracing minimal flaky examples of each category.
class KeywordTable {
 public:
  KeywordTable() = default;
  explicit KeywordTable(std::vector<KeywordRule> rules) : rules_(std::move(rules)) {}

  static const KeywordTable& defaults();

  /// `category,keyword` CSV with header. Throws Error(ConfigError).
  static KeywordTable load(std::istream& in);
  static KeywordTable load_file(const std::string& path);

  const std::vector<KeywordRule>& rules() const { return rules_; }

 private:
  std::vector<KeywordRule> rules_;
};

/// True when the dotted keyword occurs as a run of whole segments of the
/// dotted call name: "time" matches "time.sleep" but not "datetime_util".
bool matches_call(std::string_view call_name, std::string_view keyword);

/// True when the keyword occurs in the text with no identifier character
/// directly before or after it.
bool matches_source(std::string_view source, std::string_view keyword);

/// One hint per category with a keyword found in the trace or source. Hints
/// only support a manual decision; several categories may fire together.
/// Result is ordered by category.
std::vector<CategoryHint> keyword_hints(std::span<const std::string> trace_calls, std::string_view test_source,
                                        const KeywordTable& table = KeywordTable::defaults());

}  // namespace flakelab
