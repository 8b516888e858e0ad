#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "flakelab/run_record.hpp"

namespace flakelab {

/// Selects a subset of the runs of a matrix. Unset fields match everything.
struct RunFilter {
  std::optional<OrderKind> order;
  std::optional<std::size_t> iteration_id;

  bool matches(const RunMeta& run) const {
    return (!order || run.order_mode.kind == *order) && (!iteration_id || run.iteration_id == *iteration_id);
  }

  static RunFilter same_order() { return {OrderKind::SameOrder, std::nullopt}; }
  static RunFilter shuffled() { return {OrderKind::Shuffled, std::nullopt}; }
  static RunFilter iteration(std::size_t id) { return {std::nullopt, id}; }
};

/// Dense test x run table of verdicts. Immutable once built; every cell
/// resolves, with ABSENT where a run did not report the test.
class VerdictMatrix {
 public:
  VerdictMatrix() = default;

  const std::vector<TestId>& tests() const { return tests_; }
  const std::vector<RunMeta>& runs() const { return runs_; }
  std::size_t test_count() const { return tests_.size(); }
  std::size_t run_count() const { return runs_.size(); }

  /// Row index of a test, or nullopt.
  std::optional<std::size_t> find(const TestId& test) const;
  /// Throws Error(UnknownTest).
  std::size_t index_of(const TestId& test) const;

  Verdict cell(std::size_t test_row, std::size_t run_col) const { return cells_[offset(test_row, run_col)].verdict; }
  Verdict cell(const TestId& test, std::size_t run_col) const { return cell(index_of(test), run_col); }
  const TestResult& result(std::size_t test_row, std::size_t run_col) const { return cells_[offset(test_row, run_col)]; }

  /// Verdicts of one test across all runs, in run order.
  std::span<const TestResult> row(std::size_t test_row) const {
    return {cells_.data() + test_row * runs_.size(), runs_.size()};
  }

  /// Verdicts of a test across the runs matching the filter, in run order.
  std::vector<Verdict> sequence(std::size_t test_row, const RunFilter& filter = {}) const;

  /// Sub-matrix over the matching runs; all tests are kept.
  VerdictMatrix select(const RunFilter& filter) const;

  /// Distinct iteration ids among the runs, ascending.
  std::vector<std::size_t> iteration_ids() const;

  /// Equality over everything the verdict archive stores: tests, run index,
  /// iteration, order mode, fingerprint, verdicts and durations.
  friend bool operator==(const VerdictMatrix& a, const VerdictMatrix& b);

 private:
  friend VerdictMatrix build_matrix(std::vector<RunRecord> records);

  std::size_t offset(std::size_t test_row, std::size_t run_col) const { return test_row * runs_.size() + run_col; }

  std::vector<TestId> tests_;  // sorted ascending
  std::vector<RunMeta> runs_;  // sorted by run_index
  std::vector<TestResult> cells_;
};

/// Builds the matrix from run records: tests are the union over all records,
/// runs are sorted by run_index. Throws Error(EmptyInput) on no records and
/// Error(DuplicateRunIndex).
VerdictMatrix build_matrix(std::vector<RunRecord> records);

/// Per-verdict counts for one test over the matching runs; ABSENT included,
/// so the counts sum to the number of matching runs. Throws Error(UnknownTest).
VerdictCounts verdict_counts(const VerdictMatrix& matrix, const TestId& test, const RunFilter& filter = {});
VerdictCounts verdict_counts(const VerdictMatrix& matrix, std::size_t test_row, const RunFilter& filter = {});

}  // namespace flakelab
