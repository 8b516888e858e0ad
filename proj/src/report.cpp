#include "flakelab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "flakelab/csv.hpp"

namespace flakelab {

std::vector<GroupRow> group_rates(std::span<const ProjectMeta> projects, const std::string& tag_key) {
  struct Acc {
    std::size_t flaky = 0;
    std::size_t count = 0;
    std::size_t tests = 0;
  };
  std::map<std::string, Acc> groups;
  for (const auto& project : projects) {
    std::set<std::string> values;
    if (auto it = project.tags.find(tag_key); it != project.tags.end()) values.insert(it->second.begin(), it->second.end());
    if (values.empty()) values.insert(std::string(kUnspecified));
    for (const auto& value : values) {
      auto& acc = groups[value];
      ++acc.count;
      acc.tests += project.tests_total;
      if (project.flaky_tests > 0) ++acc.flaky;
    }
  }

  std::vector<GroupRow> rows;
  for (const auto& [value, acc] : groups) {
    GroupRow row;
    row.tag_value = value;
    row.flaky_projects = acc.flaky;
    row.projects = acc.count;
    row.flakiness_rate = static_cast<double>(acc.flaky) / static_cast<double>(acc.count);
    row.avg_tests = static_cast<double>(acc.tests) / static_cast<double>(acc.count);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const GroupRow& a, const GroupRow& b) {
    const bool a_unspec = a.tag_value == kUnspecified;
    const bool b_unspec = b.tag_value == kUnspecified;
    if (a_unspec != b_unspec) return b_unspec;
    return a.flakiness_rate > b.flakiness_rate;
  });
  return rows;
}

double CategoryTable::share(std::size_t count) const {
  const auto total = flaky();
  return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

CategoryTable category_table(std::span<const Classification> classifications) {
  CategoryTable t;
  for (const auto& c : classifications) {
    ++t.tests;
    switch (c.label) {
      case RootCause::NotFlaky: ++t.not_flaky; break;
      case RootCause::InsufficientData: ++t.insufficient_data; break;
      case RootCause::Infrastructure: ++t.infrastructure; break;
      case RootCause::NonOrderDependent: ++t.non_order_dependent; break;
      case RootCause::OrderDependent:
        ++t.order_dependent;
        switch (c.od_kind.value_or(OdKind::Undetermined)) {
          case OdKind::Victim: ++t.victims; break;
          case OdKind::Brittle: ++t.brittles; break;
          case OdKind::Undetermined: ++t.od_undetermined; break;
        }
        break;
    }
  }
  return t;
}

std::string format_percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", ratio * 100.0);
  return buf;
}

void write_text_table(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  const auto line = [&](const std::vector<std::string>& cells) {
    std::string text;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < cells.size() ? cells[i] : "";
      // First column left-aligned, the rest right-aligned.
      if (i == 0) {
        text += cell + std::string(width[i] - cell.size(), ' ');
      } else {
        text += "  " + std::string(width[i] - cell.size(), ' ') + cell;
      }
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
  for (const auto& row : rows) line(row);
}

std::vector<std::string> group_rows_header() {
  return {"tag_value", "flaky_projects", "projects", "flakiness_rate", "avg_tests"};
}

std::vector<std::vector<std::string>> group_rows_cells(std::span<const GroupRow> rows, bool percent) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    char avg[32];
    std::snprintf(avg, sizeof avg, "%.1f", r.avg_tests);
    cells.push_back({r.tag_value, std::to_string(r.flaky_projects), std::to_string(r.projects),
                     percent ? format_percent(r.flakiness_rate) : csv::format_double(r.flakiness_rate),
                     percent ? std::string(avg) : csv::format_double(r.avg_tests)});
  }
  return cells;
}

std::vector<std::string> category_header() { return {"category", "tests", "share_of_flaky"}; }

std::vector<std::vector<std::string>> category_cells(const CategoryTable& t, bool percent) {
  const auto share = [&](std::size_t n) {
    return percent ? format_percent(t.share(n)) : csv::format_double(t.share(n));
  };
  return {
      {"Infrastructure", std::to_string(t.infrastructure), share(t.infrastructure)},
      {"OrderDependent", std::to_string(t.order_dependent), share(t.order_dependent)},
      {"OrderDependent/Victim", std::to_string(t.victims), share(t.victims)},
      {"OrderDependent/Brittle", std::to_string(t.brittles), share(t.brittles)},
      {"OrderDependent/Undetermined", std::to_string(t.od_undetermined), share(t.od_undetermined)},
      {"NonOrderDependent", std::to_string(t.non_order_dependent), share(t.non_order_dependent)},
      {"Flaky", std::to_string(t.flaky()), share(t.flaky())},
      {"NotFlaky", std::to_string(t.not_flaky), ""},
      {"InsufficientData", std::to_string(t.insufficient_data), ""},
      {"Total", std::to_string(t.tests), ""},
  };
}

}  // namespace flakelab
