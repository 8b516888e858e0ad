#include "flakelab/verdict.hpp"

namespace flakelab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Error: return "ERROR";
    case Verdict::Skip: return "SKIP";
    case Verdict::Absent: return "ABSENT";
  }
  return "ABSENT";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  for (const auto v : kAllVerdicts) {
    if (to_string(v) == text) return v;
  }
  return std::nullopt;
}

void VerdictCounts::add(Verdict v) {
  switch (v) {
    case Verdict::Pass: ++pass; break;
    case Verdict::Fail: ++fail; break;
    case Verdict::Error: ++error; break;
    case Verdict::Skip: ++skip; break;
    case Verdict::Absent: ++absent; break;
  }
}

}  // namespace flakelab
