#include "flakelab/classify_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "flakelab/csv.hpp"
#include "flakelab/error.hpp"

namespace flakelab {

namespace fs = std::filesystem;

void write_classifications(std::ostream& out, std::span<const Classification> rows) {
  csv::write_row(out, {"test_id", "label", "od_kind", "hint_categories", "matched_keywords"});
  for (const auto& c : rows) {
    std::string categories;
    std::string keywords;
    for (const auto& hint : c.hints) {
      if (!categories.empty()) categories += ';';
      categories += to_string(hint.category);
      for (const auto& kw : hint.matched_keywords) {
        if (!keywords.empty()) keywords += ';';
        keywords += kw;
      }
    }
    csv::write_row(out, {c.test.canonical(), std::string(to_string(c.label)),
                         c.od_kind ? std::string(to_string(*c.od_kind)) : "", categories, keywords});
  }
}

void write_isolation(std::ostream& out, const std::map<TestId, std::vector<Verdict>>& isolation) {
  csv::write_row(out, {"test_id", "run", "verdict"});
  for (const auto& [test, verdicts] : isolation) {
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      csv::write_row(out, {test.canonical(), std::to_string(i), std::string(to_string(verdicts[i]))});
    }
  }
}

std::map<TestId, std::vector<Verdict>> read_isolation(std::istream& in) {
  std::vector<std::string> fields;
  if (!csv::read_row(in, fields) || fields != std::vector<std::string>{"test_id", "run", "verdict"}) {
    throw Error(ErrorCode::MalformedArchive, "unexpected isolation header");
  }
  std::map<TestId, std::map<std::uint64_t, Verdict>> by_run;
  while (csv::read_row(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 3) throw Error(ErrorCode::MalformedArchive, "isolation row needs 3 fields");
    const auto verdict = parse_verdict(fields[2]);
    if (!verdict) throw Error(ErrorCode::MalformedArchive, "bad verdict " + fields[2]);
    by_run[TestId::parse(fields[0])][csv::parse_u64(fields[1])] = *verdict;
  }
  std::map<TestId, std::vector<Verdict>> out;
  for (const auto& [test, runs] : by_run) {
    auto& list = out[test];
    for (const auto& [_, v] : runs) list.push_back(v);
  }
  return out;
}

std::map<TestId, std::vector<std::string>> load_traces(const std::string& dir) {
  std::map<TestId, std::vector<std::string>> traces;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, "trace directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".trace") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path);
    std::string line;
    if (!std::getline(in, line) || line.empty()) continue;
    auto& calls = traces[TestId::parse(line)];
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) calls.push_back(line);
    }
  }
  return traces;
}

std::map<TestId, std::string> load_sources(std::span<const TestId> tests, const std::string& source_root) {
  std::map<std::string, std::optional<std::string>> cache;
  std::map<TestId, std::string> out;
  for (const auto& test : tests) {
    if (test.suite_path.empty()) continue;
    auto [it, fresh] = cache.try_emplace(test.suite_path);
    if (fresh) {
      std::ifstream in(fs::path(source_root) / test.suite_path, std::ios::binary);
      if (in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        it->second = buf.str();
      }
    }
    if (it->second) out.emplace(test, *it->second);
  }
  return out;
}

}  // namespace flakelab
