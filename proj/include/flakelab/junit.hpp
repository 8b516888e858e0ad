#pragma once

#include <span>
#include <string>
#include <vector>

#include "flakelab/test_id.hpp"
#include "flakelab/verdict.hpp"

namespace flakelab {

struct ReportEntry {
  TestId test;
  Verdict verdict = Verdict::Pass;
  double duration_s = 0.0;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

struct ParsedReport {
  std::vector<ReportEntry> entries;
  /// Human-readable notes about tolerated oddities (duplicate testcases).
  std::vector<std::string> warnings;
};

/// Parses a JUnit-XML report (`testsuites` or `testsuite` root).
///
/// Each `testcase` yields one entry: a `failure` child maps to FAIL, `error`
/// to ERROR, `skipped` to SKIP, none of these to PASS. When a testcase has
/// several such children the most severe wins (ERROR over FAIL over SKIP).
/// The suite path comes from the `file` attribute; the class is `classname`
/// with the module prefix derived from `file` stripped. A repeated testcase
/// keeps its last occurrence and adds a warning.
///
/// Throws Error(MalformedXml) or Error(EmptyReport).
ParsedReport parse_junit_report(std::span<const char> xml_bytes);
ParsedReport parse_junit_report(const std::string& xml_text);

/// Reads and parses a report file. Throws Error(ReportMissing) if the file
/// cannot be opened.
ParsedReport parse_junit_file(const std::string& path);

}  // namespace flakelab
