#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "flakelab/classifier.hpp"

namespace flakelab {

struct ProjectMeta {
  std::string project_id;
  std::size_t tests_total = 0;
  /// e.g. "topic" -> {...}, "dev_status" -> {"4 - Beta"}
  std::map<std::string, std::vector<std::string>> tags;
  std::size_t flaky_tests = 0;
};

inline constexpr std::string_view kUnspecified = "UNSPECIFIED";

struct GroupRow {
  std::string tag_value;
  std::size_t flaky_projects = 0;
  std::size_t projects = 0;
  double flakiness_rate = 0.0;
  double avg_tests = 0.0;
};

/// One row per tag value; a project with several values counts in each, one
/// without the key lands in UNSPECIFIED. Rows are sorted by rate descending
/// (ties by value), with UNSPECIFIED always last.
std::vector<GroupRow> group_rates(std::span<const ProjectMeta> projects, const std::string& tag_key);

struct CategoryTable {
  std::size_t tests = 0;
  std::size_t not_flaky = 0;
  std::size_t insufficient_data = 0;
  std::size_t infrastructure = 0;
  std::size_t order_dependent = 0;
  std::size_t victims = 0;
  std::size_t brittles = 0;
  std::size_t od_undetermined = 0;
  std::size_t non_order_dependent = 0;

  std::size_t flaky() const { return infrastructure + order_dependent + non_order_dependent; }
  /// Share among flaky tests; 0 when nothing is flaky.
  double share(std::size_t count) const;
};

CategoryTable category_table(std::span<const Classification> classifications);

/// Percentage with one decimal, e.g. 0.0532 -> "5.3%".
std::string format_percent(double ratio);

/// Column-aligned plain-text rendering of a header plus rows.
void write_text_table(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

/// Tabular forms shared by the CSV and text outputs.
std::vector<std::string> group_rows_header();
std::vector<std::vector<std::string>> group_rows_cells(std::span<const GroupRow> rows, bool percent);
std::vector<std::string> category_header();
std::vector<std::vector<std::string>> category_cells(const CategoryTable& table, bool percent);

}  // namespace flakelab
