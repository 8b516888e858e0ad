#include "flakelab/keywords.hpp"

#include <fstream>
#include <map>

#include "flakelab/csv.hpp"
#include "flakelab/error.hpp"

namespace flakelab {

std::string_view to_string(FlakinessCategory c) {
  switch (c) {
    case FlakinessCategory::AsyncWait: return "AsyncWait";
    case FlakinessCategory::Concurrency: return "Concurrency";
    case FlakinessCategory::IO: return "IO";
    case FlakinessCategory::Network: return "Network";
    case FlakinessCategory::Time: return "Time";
    case FlakinessCategory::Random: return "Random";
    case FlakinessCategory::UnorderedCollection: return "UnorderedCollection";
  }
  return "";
}

std::optional<FlakinessCategory> parse_category(std::string_view text) {
  for (auto c : {FlakinessCategory::AsyncWait, FlakinessCategory::Concurrency, FlakinessCategory::IO,
                 FlakinessCategory::Network, FlakinessCategory::Time, FlakinessCategory::Random,
                 FlakinessCategory::UnorderedCollection}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

const KeywordTable& KeywordTable::defaults() {
  static const KeywordTable table({
      {FlakinessCategory::AsyncWait, "sleep"},
      {FlakinessCategory::Concurrency, "thread"},
      {FlakinessCategory::Concurrency, "threading"},
      {FlakinessCategory::IO, "builtins.stat"},
      {FlakinessCategory::IO, "pathlib.Path.is_dir"},
      {FlakinessCategory::Network, "requests"},
      {FlakinessCategory::Time, "time"},
      {FlakinessCategory::Random, "random"},
      {FlakinessCategory::UnorderedCollection, "__hash__"},
      {FlakinessCategory::UnorderedCollection, "builtins.set.__contains__"},
  });
  return table;
}

KeywordTable KeywordTable::load(std::istream& in) {
  std::vector<std::string> fields;
  if (!csv::read_row(in, fields) || fields != std::vector<std::string>{"category", "keyword"}) {
    throw Error(ErrorCode::ConfigError, "keyword table needs a 'category,keyword' header");
  }
  std::vector<KeywordRule> rules;
  while (csv::read_row(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2 || fields[1].empty()) throw Error(ErrorCode::ConfigError, "bad keyword row");
    const auto category = parse_category(fields[0]);
    if (!category) throw Error(ErrorCode::ConfigError, "unknown category " + fields[0]);
    rules.push_back({*category, fields[1]});
  }
  return KeywordTable(std::move(rules));
}

KeywordTable KeywordTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read keyword table " + path);
  return load(in);
}

bool matches_call(std::string_view call_name, std::string_view keyword) {
  if (keyword.empty()) return false;
  std::size_t pos = 0;
  while ((pos = call_name.find(keyword, pos)) != std::string_view::npos) {
    const auto end = pos + keyword.size();
    const bool starts_segment = pos == 0 || call_name[pos - 1] == '.';
    const bool ends_segment = end == call_name.size() || call_name[end] == '.';
    if (starts_segment && ends_segment) return true;
    ++pos;
  }
  return false;
}

namespace {

bool is_identifier_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

bool matches_source(std::string_view source, std::string_view keyword) {
  if (keyword.empty()) return false;
  std::size_t pos = 0;
  while ((pos = source.find(keyword, pos)) != std::string_view::npos) {
    const auto end = pos + keyword.size();
    const bool left = pos == 0 || !is_identifier_char(source[pos - 1]);
    const bool right = end == source.size() || !is_identifier_char(source[end]);
    if (left && right) return true;
    ++pos;
  }
  return false;
}

std::vector<CategoryHint> keyword_hints(std::span<const std::string> trace_calls, std::string_view test_source,
                                        const KeywordTable& table) {
  std::map<FlakinessCategory, CategoryHint> hits;
  const auto record = [&](const KeywordRule& rule, HintSource source) {
    auto [it, _] = hits.try_emplace(rule.category, CategoryHint{rule.category, {}, {}});
    it->second.matched_keywords.insert(rule.keyword);
    it->second.sources.insert(source);
  };
  for (const auto& rule : table.rules()) {
    for (const auto& call : trace_calls) {
      if (matches_call(call, rule.keyword)) {
        record(rule, HintSource::Trace);
        break;
      }
    }
    if (matches_source(test_source, rule.keyword)) record(rule, HintSource::TestSource);
  }
  std::vector<CategoryHint> out;
  for (auto& [_, hint] : hits) out.push_back(std::move(hint));
  return out;
}

}  // namespace flakelab
