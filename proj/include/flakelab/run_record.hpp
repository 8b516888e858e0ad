#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "flakelab/test_id.hpp"
#include "flakelab/verdict.hpp"

namespace flakelab {

enum class OrderKind { SameOrder, Shuffled };

struct OrderMode {
  OrderKind kind = OrderKind::SameOrder;
  std::uint64_t seed = 0;  // meaningful only for Shuffled

  static OrderMode same() { return {}; }
  static OrderMode shuffled(std::uint64_t seed) { return {OrderKind::Shuffled, seed}; }
  bool is_shuffled() const { return kind == OrderKind::Shuffled; }

  friend bool operator==(const OrderMode& a, const OrderMode& b) {
    return a.kind == b.kind && (a.kind == OrderKind::SameOrder || a.seed == b.seed);
  }
};

enum class ExitStatus { Completed, Timeout, Crashed };

using Clock = std::chrono::system_clock;

/// Everything about a run except its verdicts.
struct RunMeta {
  std::size_t run_index = 0;
  std::size_t iteration_id = 0;
  OrderMode order_mode;
  std::string machine_fingerprint;
  Clock::time_point started_at{};
  Clock::time_point ended_at{};
  ExitStatus exit_status = ExitStatus::Completed;
};

struct TestResult {
  Verdict verdict = Verdict::Absent;
  double duration_s = 0.0;

  friend bool operator==(const TestResult&, const TestResult&) = default;
};

struct RunRecord {
  RunMeta meta;
  std::map<TestId, TestResult> verdicts;
};

}  // namespace flakelab
