#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "flakelab/test_id.hpp"
#include "flakelab/verdict.hpp"

namespace flakelab {

/// Per-test outcome probabilities estimated from executed (non-ABSENT) runs.
/// The components need not sum to one when runs were skipped; the remainder
/// p_skip is kept explicitly.
struct RateTriple {
  double p_pass = 0.0;
  double p_fail_error = 0.0;
  double p_skip = 0.0;

  /// Components in [0,1] with sum <= 1 + 1e-12.
  bool valid() const;

  friend bool operator==(const RateTriple&, const RateTriple&) = default;
};

/// Rerun count, or nullopt when the target can never be reached.
using RerunCount = std::optional<std::size_t>;

inline constexpr std::size_t kRerunSearchLimit = 10'000'000;

/// Exact count ratios over non-ABSENT executions. Throws Error(ZeroExecutions).
RateTriple rates(const VerdictCounts& counts);

/// 1-based run index at which both a PASS and a FAIL/ERROR have been seen.
std::optional<std::size_t> n_once(std::span<const Verdict> sequence);

/// Probability that n independent runs show at least one PASS and at least
/// one FAIL/ERROR:
///   U(n) = 1 - (1 - p_fe)^n - (1 - p_pass)^n + (1 - p_pass - p_fe)^n
double unveil_probability(const RateTriple& rates, std::size_t n);

/// Smallest n with U(n) > confidence. Unreachable (nullopt) when either rate
/// is zero or the search limit is hit. Throws Error(InvalidConfidence)
/// unless 0 < confidence < 1.
RerunCount statistical_reruns(const RateTriple& rates, double confidence);

/// Smallest n with 1 - (1 - p_pass)^n > confidence: how often to rerun a
/// failing test before a pass would have shown up.
RerunCount failure_confirmation_reruns(double p_pass, double confidence);

/// Simulates `trials` sequences of n i.i.d. runs and returns the fraction that
/// contain both a PASS and a FAIL/ERROR. Probability mass not covered by the
/// rates is treated as ABSENT. Deterministic for a given seed.
double monte_carlo_unveil(const RateTriple& rates, std::size_t n, std::size_t trials, std::uint64_t seed);

struct RerunEstimate {
  TestId test;
  RateTriple rates;
  std::optional<std::size_t> n_once;
  /// Cached n_{t,p} keyed by confidence.
  std::map<double, RerunCount> n_at;

  /// Cached value if present, else computed from the rates.
  RerunCount reruns_at(double confidence) const;
};

/// Builds an estimate from the verdict sequence of one test, filling n_at for
/// every requested confidence.
RerunEstimate estimate_from_sequence(const TestId& test, std::span<const Verdict> sequence,
                                     std::span<const double> confidences);

struct OnceMetric {};
struct ConfidenceMetric {
  double p;
};
using RerunMetric = std::variant<OnceMetric, ConfidenceMetric>;

/// S(n, metric, T): how many tests need at most n reruns under the metric.
std::size_t cumulative_found(std::span<const RerunEstimate> estimates, std::size_t n, const RerunMetric& metric);

struct ConfidenceSummary {
  double confidence = 0.0;
  /// Lower-middle median of reachable n_{t,p}; empty when none is reachable.
  std::optional<std::size_t> median;
  std::size_t reachable = 0;
  std::size_t unreachable = 0;
  /// curve[n] = S(n, p, T) for n = 0..campaign_length.
  std::vector<std::size_t> curve;
};

struct RerunSummary {
  std::size_t tests = 0;
  std::size_t campaign_length = 0;
  std::optional<std::size_t> median_once;
  /// curve_once[n] = S(n, once, T) for n = 0..campaign_length.
  std::vector<std::size_t> curve_once;
  std::vector<ConfidenceSummary> per_confidence;
};

/// Throws Error(EmptyInput) when estimates is empty.
RerunSummary aggregate_summary(std::span<const RerunEstimate> estimates, std::span<const double> confidences,
                               std::size_t campaign_length);

/// Lower-middle median of a nonempty sample.
std::size_t lower_median(std::vector<std::size_t> values);

}  // namespace flakelab
