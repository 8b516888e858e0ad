#include "flakelab/rerun_stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "flakelab/error.hpp"

namespace flakelab {

namespace {

constexpr double kRateSlack = 1e-12;
constexpr std::size_t kLogSpaceThreshold = 10'000;

// (1 - x)^n with 1 - x clamped to [0, 1]. Large n goes through log space.
double complement_power(double x, std::size_t n) {
  const double base = std::clamp(1.0 - x, 0.0, 1.0);
  if (n == 0) return 1.0;
  if (base == 0.0) return 0.0;
  if (n > kLogSpaceThreshold) return std::exp(static_cast<double>(n) * std::log(base));
  return std::pow(base, static_cast<double>(n));
}

void check_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::InvalidConfidence, "confidence must lie in (0, 1)");
  }
}

}  // namespace

bool RateTriple::valid() const {
  const auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  return in_unit(p_pass) && in_unit(p_fail_error) && in_unit(p_skip) &&
         p_pass + p_fail_error + p_skip <= 1.0 + kRateSlack;
}

RateTriple rates(const VerdictCounts& counts) {
  const auto executions = counts.executions();
  if (executions == 0) throw Error(ErrorCode::ZeroExecutions, "no executed runs");
  const double denom = static_cast<double>(executions);
  return {static_cast<double>(counts.pass) / denom, static_cast<double>(counts.failing()) / denom,
          static_cast<double>(counts.skip) / denom};
}

std::optional<std::size_t> n_once(std::span<const Verdict> sequence) {
  std::optional<std::size_t> first_pass;
  std::optional<std::size_t> first_failing;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i] == Verdict::Pass && !first_pass) first_pass = i + 1;
    if (is_failing(sequence[i]) && !first_failing) first_failing = i + 1;
    if (first_pass && first_failing) return std::max(*first_pass, *first_failing);
  }
  return std::nullopt;
}

double unveil_probability(const RateTriple& r, std::size_t n) {
  const double never_fails = complement_power(r.p_fail_error, n);
  const double never_passes = complement_power(r.p_pass, n);
  const double neither = complement_power(r.p_pass + r.p_fail_error, n);
  return std::clamp(1.0 - never_fails - never_passes + neither, 0.0, 1.0);
}

RerunCount statistical_reruns(const RateTriple& r, double confidence) {
  check_confidence(confidence);
  if (r.p_pass <= 0.0 || r.p_fail_error <= 0.0) return std::nullopt;
  for (std::size_t n = 1; n <= kRerunSearchLimit; ++n) {
    if (unveil_probability(r, n) > confidence) return n;
  }
  return std::nullopt;
}

RerunCount failure_confirmation_reruns(double p_pass, double confidence) {
  check_confidence(confidence);
  if (p_pass <= 0.0) return std::nullopt;
  for (std::size_t n = 1; n <= kRerunSearchLimit; ++n) {
    if (1.0 - complement_power(p_pass, n) > confidence) return n;
  }
  return std::nullopt;
}

double monte_carlo_unveil(const RateTriple& r, std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) return 0.0;
  std::mt19937_64 rng(seed);
  const double pass_cut = r.p_pass;
  const double fail_cut = r.p_pass + r.p_fail_error;
  std::size_t unveiled = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    bool passed = false;
    bool failed = false;
    for (std::size_t i = 0; i < n && !(passed && failed); ++i) {
      // 53 random bits -> uniform in [0, 1).
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < pass_cut) {
        passed = true;
      } else if (u < fail_cut) {
        failed = true;
      }
    }
    if (passed && failed) ++unveiled;
  }
  return static_cast<double>(unveiled) / static_cast<double>(trials);
}

RerunCount RerunEstimate::reruns_at(double confidence) const {
  if (auto it = n_at.find(confidence); it != n_at.end()) return it->second;
  return statistical_reruns(rates, confidence);
}

RerunEstimate estimate_from_sequence(const TestId& test, std::span<const Verdict> sequence,
                                     std::span<const double> confidences) {
  VerdictCounts counts;
  for (auto v : sequence) counts.add(v);
  RerunEstimate est;
  est.test = test;
  est.rates = rates(counts);
  est.n_once = n_once(sequence);
  for (double p : confidences) est.n_at[p] = statistical_reruns(est.rates, p);
  return est;
}

std::size_t cumulative_found(std::span<const RerunEstimate> estimates, std::size_t n, const RerunMetric& metric) {
  std::size_t found = 0;
  for (const auto& est : estimates) {
    const RerunCount needed = std::holds_alternative<OnceMetric>(metric)
                                  ? est.n_once
                                  : est.reruns_at(std::get<ConfidenceMetric>(metric).p);
    if (needed && *needed <= n) ++found;
  }
  return found;
}

std::size_t lower_median(std::vector<std::size_t> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "median of an empty sample");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

namespace {

// curve[n] for n = 0..length from the per-test requirements, in one pass.
std::vector<std::size_t> curve_of(const std::vector<std::size_t>& needed, std::size_t length) {
  std::vector<std::size_t> curve(length + 1, 0);
  for (auto k : needed) {
    if (k <= length) ++curve[k];
  }
  for (std::size_t n = 1; n <= length; ++n) curve[n] += curve[n - 1];
  return curve;
}

}  // namespace

RerunSummary aggregate_summary(std::span<const RerunEstimate> estimates, std::span<const double> confidences,
                               std::size_t campaign_length) {
  if (estimates.empty()) throw Error(ErrorCode::EmptyInput, "no estimates to summarize");
  RerunSummary summary;
  summary.tests = estimates.size();
  summary.campaign_length = campaign_length;

  std::vector<std::size_t> once;
  for (const auto& est : estimates) {
    if (est.n_once) once.push_back(*est.n_once);
  }
  if (!once.empty()) summary.median_once = lower_median(once);
  summary.curve_once = curve_of(once, campaign_length);

  for (double p : confidences) {
    ConfidenceSummary cs;
    cs.confidence = p;
    std::vector<std::size_t> needed;
    for (const auto& est : estimates) {
      if (auto k = est.reruns_at(p)) {
        needed.push_back(*k);
      } else {
        ++cs.unreachable;
      }
    }
    cs.reachable = needed.size();
    if (!needed.empty()) cs.median = lower_median(needed);
    cs.curve = curve_of(needed, campaign_length);
    summary.per_confidence.push_back(std::move(cs));
  }
  return summary;
}

}  // namespace flakelab
