#include "flakelab/classifier.hpp"

#include <algorithm>

#include "flakelab/error.hpp"

namespace flakelab {

std::string_view to_string(RootCause c) {
  switch (c) {
    case RootCause::NotFlaky: return "NotFlaky";
    case RootCause::InsufficientData: return "InsufficientData";
    case RootCause::Infrastructure: return "Infrastructure";
    case RootCause::OrderDependent: return "OrderDependent";
    case RootCause::NonOrderDependent: return "NonOrderDependent";
  }
  return "";
}

std::string_view to_string(OdKind k) {
  switch (k) {
    case OdKind::Victim: return "Victim";
    case OdKind::Brittle: return "Brittle";
    case OdKind::Undetermined: return "Undetermined";
  }
  return "";
}

bool is_flaky(const VerdictCounts& counts) { return counts.pass >= 1 && counts.failing() >= 1; }

bool flaky_within_iteration(const VerdictMatrix& matrix, std::size_t test_row, std::size_t iteration_id) {
  const auto& runs = matrix.runs();
  const bool exists =
      std::any_of(runs.begin(), runs.end(), [&](const RunMeta& r) { return r.iteration_id == iteration_id; });
  if (!exists) throw Error(ErrorCode::UnknownIteration, std::to_string(iteration_id));
  return is_flaky(verdict_counts(matrix, test_row, RunFilter::iteration(iteration_id)));
}

bool flaky_within_iteration(const VerdictMatrix& matrix, const TestId& test, std::size_t iteration_id) {
  return flaky_within_iteration(matrix, matrix.index_of(test), iteration_id);
}

namespace {

struct HalfView {
  VerdictCounts counts;
  bool any_iteration_flaky = false;
};

HalfView inspect(const VerdictMatrix& matrix, const TestId& test) {
  HalfView view;
  const auto row = matrix.find(test);
  if (!row) return view;
  view.counts = verdict_counts(matrix, *row);
  for (auto id : matrix.iteration_ids()) {
    if (is_flaky(verdict_counts(matrix, *row, RunFilter::iteration(id)))) {
      view.any_iteration_flaky = true;
      break;
    }
  }
  return view;
}

}  // namespace

RootCause classify_root_cause(const VerdictMatrix& same_order, const VerdictMatrix& shuffled, const TestId& test) {
  if (!same_order.find(test) && !shuffled.find(test)) throw Error(ErrorCode::UnknownTest, test.canonical());
  const auto same = inspect(same_order, test);
  const auto shuf = inspect(shuffled, test);

  VerdictCounts all = same.counts;
  all.pass += shuf.counts.pass;
  all.fail += shuf.counts.fail;
  all.error += shuf.counts.error;
  all.skip += shuf.counts.skip;
  all.absent += shuf.counts.absent;
  if (all.pass + all.failing() < kMinExecutions) {
    throw Error(ErrorCode::InsufficientData, test.canonical());
  }

  if (!is_flaky(all)) return RootCause::NotFlaky;
  if (!same.any_iteration_flaky && !shuf.any_iteration_flaky) return RootCause::Infrastructure;
  if (is_flaky(same.counts)) return RootCause::NonOrderDependent;
  return RootCause::OrderDependent;
}

OdKind classify_od_kind(std::span<const Verdict> isolation_verdicts) {
  if (isolation_verdicts.empty()) return OdKind::Undetermined;
  if (std::all_of(isolation_verdicts.begin(), isolation_verdicts.end(), [](Verdict v) { return v == Verdict::Pass; })) {
    return OdKind::Victim;
  }
  if (std::all_of(isolation_verdicts.begin(), isolation_verdicts.end(), is_failing)) return OdKind::Brittle;
  return OdKind::Undetermined;
}

std::vector<Classification> classify_campaign(const VerdictMatrix& matrix, const ClassifyInputs& inputs) {
  const auto same = matrix.select(RunFilter::same_order());
  const auto shuffled = matrix.select(RunFilter::shuffled());
  std::vector<Classification> out;
  out.reserve(matrix.test_count());
  for (const auto& test : matrix.tests()) {
    Classification c;
    c.test = test;
    try {
      c.label = classify_root_cause(same, shuffled, test);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientData) throw;
      c.label = RootCause::InsufficientData;
    }
    if (c.label == RootCause::OrderDependent) {
      const auto it = inputs.isolation.find(test);
      c.od_kind = it == inputs.isolation.end() ? OdKind::Undetermined : classify_od_kind(it->second);
    } else if (c.label == RootCause::NonOrderDependent) {
      static const std::vector<std::string> kNoTrace;
      const auto trace = inputs.traces.find(test);
      const auto source = inputs.sources.find(test);
      c.hints = keyword_hints(trace == inputs.traces.end() ? kNoTrace : trace->second,
                              source == inputs.sources.end() ? std::string_view{} : std::string_view(source->second),
                              *inputs.keywords);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace flakelab
