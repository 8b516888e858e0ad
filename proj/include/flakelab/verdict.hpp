#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace flakelab {

enum class Verdict { Pass, Fail, Error, Skip, Absent };

inline constexpr std::array<Verdict, 5> kAllVerdicts = {Verdict::Pass, Verdict::Fail, Verdict::Error,
                                                        Verdict::Skip, Verdict::Absent};

/// PASS|FAIL|ERROR|SKIP|ABSENT, the archive spelling.
std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view text);

inline constexpr bool is_failing(Verdict v) { return v == Verdict::Fail || v == Verdict::Error; }
/// Executed means the runner reported the test as run (skips count, ABSENT does not).
inline constexpr bool is_reported(Verdict v) { return v != Verdict::Absent; }

struct VerdictCounts {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t error = 0;
  std::size_t skip = 0;
  std::size_t absent = 0;

  void add(Verdict v);
  std::size_t failing() const { return fail + error; }
  /// Non-ABSENT executions, the denominator of every rate.
  std::size_t executions() const { return pass + fail + error + skip; }
  std::size_t total() const { return executions() + absent; }

  friend bool operator==(const VerdictCounts&, const VerdictCounts&) = default;
};

}  // namespace flakelab
