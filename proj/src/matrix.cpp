#include "flakelab/matrix.hpp"

#include <algorithm>
#include <set>

#include "flakelab/error.hpp"

namespace flakelab {

std::optional<std::size_t> VerdictMatrix::find(const TestId& test) const {
  const auto it = std::lower_bound(tests_.begin(), tests_.end(), test);
  if (it == tests_.end() || *it != test) return std::nullopt;
  return static_cast<std::size_t>(it - tests_.begin());
}

std::size_t VerdictMatrix::index_of(const TestId& test) const {
  if (auto row = find(test)) return *row;
  throw Error(ErrorCode::UnknownTest, test.canonical());
}

std::vector<Verdict> VerdictMatrix::sequence(std::size_t test_row, const RunFilter& filter) const {
  std::vector<Verdict> out;
  out.reserve(runs_.size());
  for (std::size_t col = 0; col < runs_.size(); ++col) {
    if (filter.matches(runs_[col])) out.push_back(cell(test_row, col));
  }
  return out;
}

VerdictMatrix VerdictMatrix::select(const RunFilter& filter) const {
  std::vector<std::size_t> keep;
  for (std::size_t col = 0; col < runs_.size(); ++col) {
    if (filter.matches(runs_[col])) keep.push_back(col);
  }
  VerdictMatrix sub;
  sub.tests_ = tests_;
  sub.runs_.reserve(keep.size());
  for (auto col : keep) sub.runs_.push_back(runs_[col]);
  sub.cells_.reserve(tests_.size() * keep.size());
  for (std::size_t row = 0; row < tests_.size(); ++row) {
    for (auto col : keep) sub.cells_.push_back(result(row, col));
  }
  return sub;
}

std::vector<std::size_t> VerdictMatrix::iteration_ids() const {
  std::set<std::size_t> ids;
  for (const auto& run : runs_) ids.insert(run.iteration_id);
  return {ids.begin(), ids.end()};
}

bool operator==(const VerdictMatrix& a, const VerdictMatrix& b) {
  if (a.tests_ != b.tests_ || a.runs_.size() != b.runs_.size() || a.cells_ != b.cells_) return false;
  for (std::size_t i = 0; i < a.runs_.size(); ++i) {
    const auto& x = a.runs_[i];
    const auto& y = b.runs_[i];
    if (x.run_index != y.run_index || x.iteration_id != y.iteration_id || !(x.order_mode == y.order_mode) ||
        x.machine_fingerprint != y.machine_fingerprint) {
      return false;
    }
  }
  return true;
}

VerdictMatrix build_matrix(std::vector<RunRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no run records");
  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) { return a.meta.run_index < b.meta.run_index; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].meta.run_index == records[i - 1].meta.run_index) {
      throw Error(ErrorCode::DuplicateRunIndex, std::to_string(records[i].meta.run_index));
    }
  }

  std::set<TestId> all_tests;
  for (const auto& record : records) {
    for (const auto& [test, _] : record.verdicts) all_tests.insert(test);
  }

  VerdictMatrix m;
  m.tests_.assign(all_tests.begin(), all_tests.end());
  m.runs_.reserve(records.size());
  for (const auto& record : records) m.runs_.push_back(record.meta);
  m.cells_.assign(m.tests_.size() * m.runs_.size(), TestResult{});
  for (std::size_t col = 0; col < records.size(); ++col) {
    for (const auto& [test, res] : records[col].verdicts) {
      m.cells_[m.offset(m.index_of(test), col)] = res;
    }
  }
  return m;
}

VerdictCounts verdict_counts(const VerdictMatrix& matrix, std::size_t test_row, const RunFilter& filter) {
  VerdictCounts counts;
  const auto& runs = matrix.runs();
  for (std::size_t col = 0; col < runs.size(); ++col) {
    if (filter.matches(runs[col])) counts.add(matrix.cell(test_row, col));
  }
  return counts;
}

VerdictCounts verdict_counts(const VerdictMatrix& matrix, const TestId& test, const RunFilter& filter) {
  return verdict_counts(matrix, matrix.index_of(test), filter);
}

}  // namespace flakelab
