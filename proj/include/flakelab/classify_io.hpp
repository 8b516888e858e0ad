#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "flakelab/classifier.hpp"

namespace flakelab {

/// test_id,label,od_kind,hint_categories,matched_keywords
/// od_kind is empty unless the label is OrderDependent; categories and
/// keywords are semicolon-joined.
void write_classifications(std::ostream& out, std::span<const Classification> rows);

/// Isolation verdict file: test_id,run,verdict.
void write_isolation(std::ostream& out, const std::map<TestId, std::vector<Verdict>>& isolation);
std::map<TestId, std::vector<Verdict>> read_isolation(std::istream& in);

/// Reads every *.trace file below dir. The first line of a trace file is the
/// canonical test id; each further non-empty line is one qualified call name.
/// Calls from several runs of the same test are concatenated.
std::map<TestId, std::vector<std::string>> load_traces(const std::string& dir);

/// Source text of each test's suite file, resolved against source_root.
/// Tests whose file cannot be read are left out.
std::map<TestId, std::string> load_sources(std::span<const TestId> tests, const std::string& source_root);

}  // namespace flakelab
