#include "flakelab/junit.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "flakelab/error.hpp"

namespace flakelab {

namespace pt = boost::property_tree;

namespace {

std::string attribute(const pt::ptree& node, const char* name) {
  if (const auto attrs = node.get_child_optional("<xmlattr>")) {
    return attrs->get<std::string>(name, "");
  }
  return {};
}

double parse_time(const std::string& text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  return res.ec == std::errc{} && value >= 0.0 ? value : 0.0;
}

// "pkg/tests/test_io.py" -> "pkg.tests.test_io"
std::string module_of(std::string file) {
  if (file.size() > 3 && file.ends_with(".py")) file.resize(file.size() - 3);
  for (auto& c : file) {
    if (c == '/' || c == '\\') c = '.';
  }
  return file;
}

int severity(Verdict v) {
  switch (v) {
    case Verdict::Error: return 3;
    case Verdict::Fail: return 2;
    case Verdict::Skip: return 1;
    default: return 0;
  }
}

ReportEntry to_entry(const pt::ptree& testcase) {
  ReportEntry entry;
  const auto file = attribute(testcase, "file");
  const auto classname = attribute(testcase, "classname");
  auto [name, params] = split_parametrization(attribute(testcase, "name"));

  entry.test.suite_path = file;
  entry.test.test_name = std::move(name);
  entry.test.parametrization = std::move(params);
  if (!file.empty()) {
    const auto module = module_of(file);
    if (classname == module) {
      entry.test.class_name.clear();
    } else if (classname.starts_with(module + ".")) {
      entry.test.class_name = classname.substr(module.size() + 1);
    } else {
      entry.test.class_name = classname;
    }
  } else {
    entry.test.class_name = classname;
  }
  if (entry.test.test_name.empty()) {
    throw Error(ErrorCode::MalformedXml, "testcase without name attribute");
  }

  entry.verdict = Verdict::Pass;
  for (const auto& [tag, child] : testcase) {
    Verdict v = Verdict::Pass;
    if (tag == "failure") {
      v = Verdict::Fail;
    } else if (tag == "error") {
      v = Verdict::Error;
    } else if (tag == "skipped") {
      v = Verdict::Skip;
    }
    if (severity(v) > severity(entry.verdict)) entry.verdict = v;
  }
  entry.duration_s = parse_time(attribute(testcase, "time"));
  return entry;
}

void collect(const pt::ptree& suite, std::vector<const pt::ptree*>& cases) {
  for (const auto& [tag, child] : suite) {
    if (tag == "testcase") {
      cases.push_back(&child);
    } else if (tag == "testsuite") {
      collect(child, cases);
    }
  }
}

}  // namespace

ParsedReport parse_junit_report(const std::string& xml_text) {
  pt::ptree tree;
  try {
    std::istringstream in(xml_text);
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::MalformedXml, e.message());
  }

  std::vector<const pt::ptree*> cases;
  bool has_root = false;
  for (const auto& [tag, child] : tree) {
    if (tag == "testsuites" || tag == "testsuite") {
      has_root = true;
      collect(child, cases);
    } else if (tag != "<xmlcomment>") {
      throw Error(ErrorCode::MalformedXml, "unexpected root element <" + tag + ">");
    }
  }
  if (!has_root) throw Error(ErrorCode::MalformedXml, "no testsuite or testsuites root");
  if (cases.empty()) throw Error(ErrorCode::EmptyReport, "report contains no testcase elements");

  ParsedReport report;
  std::map<TestId, std::size_t> position;
  for (const auto* node : cases) {
    auto entry = to_entry(*node);
    if (auto it = position.find(entry.test); it != position.end()) {
      report.warnings.push_back("duplicate testcase " + entry.test.canonical() + ", keeping last occurrence");
      report.entries[it->second] = std::move(entry);
    } else {
      position.emplace(entry.test, report.entries.size());
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

ParsedReport parse_junit_report(std::span<const char> xml_bytes) {
  return parse_junit_report(std::string(xml_bytes.begin(), xml_bytes.end()));
}

ParsedReport parse_junit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ReportMissing, path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_junit_report(buf.str());
}

}  // namespace flakelab
