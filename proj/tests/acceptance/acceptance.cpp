// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and time budgets are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flakelab/archive.hpp"
#include "flakelab/classifier.hpp"
#include "flakelab/estimates_io.hpp"
#include "flakelab/junit.hpp"
#include "flakelab/oracle.hpp"
#include "flakelab/random.hpp"
#include "flakelab/rerun_stats.hpp"
#include "support/synthetic.hpp"

using namespace flakelab;
using namespace flakelab::testing;

namespace {

constexpr std::size_t kOracleTrials = 100'000;
constexpr double kOracleTolerance = 0.01;
constexpr double kOracleBudgetS = 60.0;
constexpr double kExactTolerance = 1e-12;
constexpr std::size_t kMatricesPerClass = 100;
constexpr double kClassifierBudgetS = 10.0;
constexpr std::size_t kRandomEstimates = 1000;
constexpr std::size_t kMinTestcases = 1000;
constexpr std::size_t kFixtureHorizon = 200;
constexpr double kFixtureConfidence = 0.95;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// ------------------------------------------------------------------ 1

Outcome formula_oracle_agreement() {
  const auto start = Clock::now();
  const auto rows = run_unveil_oracle(kOracleTrials, 20240101, kOracleTolerance);
  const double elapsed = seconds_since(start);

  const auto grid = oracle_rate_grid();
  double worst = 0.0;
  std::size_t misses = 0;
  for (const auto& r : rows) {
    const double diff = std::abs(r.analytic - r.simulated);
    worst = std::max(worst, diff);
    if (!(diff <= kOracleTolerance)) ++misses;
  }
  Outcome o;
  o.pass = grid.size() >= 20 && rows.size() == grid.size() * kOracleRunCounts.size() && misses == 0 &&
           elapsed < kOracleBudgetS;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu triples x %zu n, max |U - MC| = %.4f (tol %.2f), %zu misses, %.1f s", grid.size(),
                kOracleRunCounts.size(), worst, kOracleTolerance, misses, elapsed);
  o.detail = buf;
  return o;
}

// ------------------------------------------------------------------ 2

Outcome exact_values() {
  const auto a = statistical_reruns({0.9, 0.1, 0.0}, 0.95);
  const auto b = statistical_reruns({0.5, 0.5, 0.0}, 0.95);
  const double u = unveil_probability({0.5, 0.25, 0.25}, 2);
  const auto c = failure_confirmation_reruns(0.5, 0.95);
  Outcome o;
  o.pass = a == 29u && b == 6u && std::abs(u - 0.25) <= kExactTolerance && c == 5u;
  const auto show = [](const RerunCount& n) { return n ? std::to_string(*n) : std::string("UNREACHABLE"); };
  char buf[160];
  std::snprintf(buf, sizeof buf, "n(0.9,0.1;0.95)=%s n(0.5,0.5;0.95)=%s U=%.17g confirm(0.5;0.95)=%s",
                show(a).c_str(), show(b).c_str(), u, show(c).c_str());
  o.detail = buf;
  return o;
}

// ------------------------------------------------------------------ 3

std::string repeat(char c, std::size_t n) { return std::string(n, c); }

char failing_char(std::mt19937_64& rng) { return rng() % 2 ? 'F' : 'E'; }

// Iteration with at least one PASS and at least one FAIL/ERROR.
std::string mixed_iteration(std::mt19937_64& rng, std::size_t runs) {
  std::string s;
  for (std::size_t i = 0; i < runs; ++i) {
    const auto r = rng() % 4;
    s += r == 0 ? failing_char(rng) : r == 1 ? 'S' : 'P';
  }
  const std::size_t i = uniform_below(rng, runs);
  const std::size_t j = (i + 1 + uniform_below(rng, runs - 1)) % runs;
  s[i] = 'P';
  s[j] = failing_char(rng);
  return s;
}

std::vector<std::string> homogeneous_iterations(std::mt19937_64& rng, std::size_t iterations, std::size_t runs,
                                                bool need_both) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < iterations; ++i) out.push_back(rng() % 2 ? repeat('P', runs) : repeat(failing_char(rng), runs));
  if (need_both) {
    out[0] = repeat('P', runs);
    out[1 + uniform_below(rng, iterations - 1)] = repeat(failing_char(rng), runs);
  }
  return out;
}

struct LabelledMatrix {
  VerdictMatrix matrix;
  RootCause expected;
};

LabelledMatrix make_case(std::mt19937_64& rng, RootCause kind) {
  const std::size_t iterations = 2 + uniform_below(rng, 5);
  const std::size_t runs = 2 + uniform_below(rng, 19);
  const auto target = tid("test_target");
  CampaignBuilder b;
  b.add_iterations(tid("test_stable"), OrderKind::SameOrder, std::vector<std::string>(iterations, repeat('P', runs)));

  switch (kind) {
    case RootCause::Infrastructure:
      b.add_iterations(target, OrderKind::SameOrder, homogeneous_iterations(rng, iterations, runs, true));
      if (rng() % 2) b.add_iterations(target, OrderKind::Shuffled, homogeneous_iterations(rng, iterations, runs, false));
      break;
    case RootCause::NonOrderDependent: {
      std::vector<std::string> same;
      for (std::size_t i = 0; i < iterations; ++i) {
        same.push_back(rng() % 2 ? mixed_iteration(rng, runs) : repeat(rng() % 2 ? 'P' : failing_char(rng), runs));
      }
      same[uniform_below(rng, iterations)] = mixed_iteration(rng, runs);
      b.add_iterations(target, OrderKind::SameOrder, same);
      if (rng() % 2) {
        std::vector<std::string> shuffled;
        for (std::size_t i = 0; i < iterations; ++i) shuffled.push_back(mixed_iteration(rng, runs));
        b.add_iterations(target, OrderKind::Shuffled, shuffled);
      }
      break;
    }
    default: {
      b.add_iterations(target, OrderKind::SameOrder, std::vector<std::string>(iterations, repeat('P', runs)));
      std::vector<std::string> shuffled;
      for (std::size_t i = 0; i < iterations; ++i) {
        shuffled.push_back(rng() % 2 ? mixed_iteration(rng, runs) : repeat(rng() % 2 ? 'P' : failing_char(rng), runs));
      }
      shuffled[uniform_below(rng, iterations)] = mixed_iteration(rng, runs);
      b.add_iterations(target, OrderKind::Shuffled, shuffled);
      break;
    }
  }
  return {b.build(), kind};
}

Outcome classifier_recovery() {
  const auto start = Clock::now();
  std::mt19937_64 rng(300);
  std::size_t matrices = 0;
  std::size_t errors = 0;
  for (const auto kind : {RootCause::Infrastructure, RootCause::NonOrderDependent, RootCause::OrderDependent}) {
    for (std::size_t i = 0; i < kMatricesPerClass; ++i) {
      const auto c = make_case(rng, kind);
      const auto labels = classify_campaign(c.matrix);
      ++matrices;
      const auto target = std::find_if(labels.begin(), labels.end(),
                                       [](const Classification& l) { return l.test == tid("test_target"); });
      const auto stable = std::find_if(labels.begin(), labels.end(),
                                       [](const Classification& l) { return l.test == tid("test_stable"); });
      if (target == labels.end() || target->label != c.expected || stable == labels.end() ||
          stable->label != RootCause::NotFlaky) {
        ++errors;
      }
    }
  }

  // Isolation sequences: all PASS, all FAIL/ERROR, and mixed (including ABSENT).
  std::size_t iso_cases = 0;
  std::size_t iso_errors = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    const std::size_t n = 1 + uniform_below(rng, 20);
    std::string s;
    OdKind expected;
    switch (i % 3) {
      case 0:
        s = repeat('P', n);
        expected = OdKind::Victim;
        break;
      case 1:
        for (std::size_t k = 0; k < n; ++k) s += failing_char(rng);
        expected = OdKind::Brittle;
        break;
      default: {
        const std::string alphabet = "PFESA";
        for (std::size_t k = 0; k < n + 1; ++k) s += alphabet[uniform_below(rng, alphabet.size())];
        s[uniform_below(rng, s.size())] = "SA"[rng() % 2];
        expected = OdKind::Undetermined;
        break;
      }
    }
    ++iso_cases;
    if (classify_od_kind(verdicts(s)) != expected) ++iso_errors;
  }
  const double elapsed = seconds_since(start);

  Outcome o;
  o.pass = matrices == 3 * kMatricesPerClass && errors == 0 && iso_errors == 0 && elapsed < kClassifierBudgetS;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu matrices, %zu errors; %zu isolation sequences, %zu errors; %.2f s", matrices,
                errors, iso_cases, iso_errors, elapsed);
  o.detail = buf;
  return o;
}

// ------------------------------------------------------------------ 4

Outcome calculus_consistency() {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<double> confidences = {0.5, 0.8, 0.9, 0.95, 0.99};
  constexpr std::size_t kLength = 200;

  std::vector<RerunEstimate> estimates;
  std::size_t observed_flaky = 0;
  for (std::size_t i = 0; i < kRandomEstimates; ++i) {
    const double p_fail = std::pow(unit(rng), 3.0);
    const double p_skip = rng() % 4 == 0 ? 0.1 * unit(rng) : 0.0;
    std::string s;
    for (std::size_t r = 0; r < kLength; ++r) {
      const double u = unit(rng);
      s += u < p_fail ? (rng() % 2 ? 'F' : 'E') : u < p_fail + p_skip ? 'S' : 'P';
    }
    const bool has_pass = s.find('P') != std::string::npos;
    const bool has_fail = s.find_first_of("FE") != std::string::npos;
    if (has_pass && has_fail) ++observed_flaky;
    estimates.push_back(estimate_from_sequence(tid("t" + std::to_string(i)), verdicts(s), confidences));
  }

  std::size_t checked = 0;
  std::size_t violations = 0;
  for (const auto& e : estimates) {
    for (const double p : confidences) {
      const auto n = e.reruns_at(p);
      if (!n) continue;
      ++checked;
      const bool above = unveil_probability(e.rates, *n) > p;
      const bool minimal = *n == 1 || unveil_probability(e.rates, *n - 1) <= p;
      if (!above || !minimal) ++violations;
    }
  }

  std::size_t non_monotone = 0;
  std::vector<RerunMetric> metrics = {OnceMetric{}};
  for (const double p : confidences) metrics.push_back(ConfidenceMetric{p});
  for (const auto& metric : metrics) {
    std::size_t prev = 0;
    for (std::size_t n = 0; n <= kLength; ++n) {
      const auto s = cumulative_found(estimates, n, metric);
      if (s < prev) ++non_monotone;
      prev = s;
    }
  }
  const auto s_once = cumulative_found(estimates, kLength, OnceMetric{});

  Outcome o;
  o.pass = checked > 0 && violations == 0 && non_monotone == 0 && s_once == observed_flaky;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu estimates, %zu reachable n checked, %zu threshold violations, %zu monotonicity breaks, "
                "S_once(%zu) = %zu vs %zu observed flaky",
                estimates.size(), checked, violations, non_monotone, kLength, s_once, observed_flaky);
  o.detail = buf;
  return o;
}

// ------------------------------------------------------------------ 5

Outcome ingestion_round_trip() {
  std::mt19937_64 rng(5);
  constexpr std::size_t kRuns = 6;
  constexpr std::size_t kCasesPerRun = 200;

  // Fixed universe of cases; names cover classes, module-level functions and
  // parametrizations with characters that need XML or CSV escaping.
  const std::vector<std::string> params = {"", "", "[1]", "[a-b]", "[x y,\"z\"]", "[<&>]", "[p::q]", "[0.5-True]"};
  std::vector<XmlCase> universe;
  std::vector<TestId> universe_ids;
  for (std::size_t i = 0; i < kCasesPerRun; ++i) {
    const std::string module = "tests/pkg" + std::to_string(i % 4) + "/test_m" + std::to_string(i % 7);
    const std::string file = module + ".py";
    std::string dotted = module;
    std::replace(dotted.begin(), dotted.end(), '/', '.');
    const std::string cls = i % 3 == 0 ? "" : "TestC" + std::to_string(i % 5);
    const std::string base = "test_" + std::to_string(i);
    const std::string param = params[i % params.size()];
    universe.push_back({file, cls.empty() ? dotted : dotted + "." + cls, base + param, Verdict::Pass, 0.0});
    universe_ids.push_back(TestId{file, cls, base, param});
  }

  std::vector<RunRecord> records;
  std::vector<std::vector<Verdict>> expected(kCasesPerRun, std::vector<Verdict>(kRuns, Verdict::Absent));
  std::size_t testcases = 0;
  std::size_t shapes[4] = {0, 0, 0, 0};
  for (std::size_t run = 0; run < kRuns; ++run) {
    std::vector<XmlCase> cases;
    for (std::size_t i = 0; i < kCasesPerRun; ++i) {
      if (rng() % 20 == 0) continue;  // not reported in this run
      auto c = universe[i];
      const auto shape = static_cast<std::size_t>(rng() % 4);
      c.verdict = kAllVerdicts[shape];
      c.time = static_cast<double>(rng() % 100000) / 1000.0;
      ++shapes[shape];
      expected[i][run] = c.verdict;
      cases.push_back(c);
    }
    testcases += cases.size();
    const auto parsed = parse_junit_report(junit_xml(cases));
    RunRecord rec;
    rec.meta.run_index = run;
    rec.meta.iteration_id = run / 2;
    rec.meta.order_mode = run % 2 ? OrderMode::shuffled(1000 + run) : OrderMode::same();
    rec.meta.machine_fingerprint = "fp-" + std::to_string(run / 2);
    for (const auto& e : parsed.entries) rec.verdicts[e.test] = TestResult{e.verdict, e.duration_s};
    records.push_back(std::move(rec));
  }

  const auto matrix = build_matrix(records);
  std::size_t cell_mismatches = 0;
  for (std::size_t i = 0; i < kCasesPerRun; ++i) {
    const auto row = matrix.find(universe_ids[i]);
    for (std::size_t run = 0; run < kRuns; ++run) {
      const Verdict got = row ? matrix.cell(*row, run) : Verdict::Absent;
      if (got != expected[i][run]) ++cell_mismatches;
    }
  }

  std::ostringstream first;
  write_archive(first, matrix);
  std::istringstream in(first.str());
  const auto reloaded = read_archive(in);
  std::ostringstream second;
  write_archive(second, reloaded);

  const bool all_shapes = std::all_of(std::begin(shapes), std::end(shapes), [](std::size_t n) { return n > 0; });
  Outcome o;
  o.pass = testcases >= kMinTestcases && all_shapes && cell_mismatches == 0 && reloaded == matrix &&
           first.str() == second.str();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu testcases (P/F/E/S = %zu/%zu/%zu/%zu), %zu cell mismatches, matrix %s, re-export %s", testcases,
                shapes[0], shapes[1], shapes[2], shapes[3], cell_mismatches,
                reloaded == matrix ? "identical" : "DIFFERS", first.str() == second.str() ? "byte-identical" : "DIFFERS");
  o.detail = buf;
  return o;
}

// ------------------------------------------------------------------ 6

Outcome fixture_arithmetic() {
  const std::string path = std::string(FLAKELAB_SOURCE_DIR) + "/tests/data/fixture_estimates.csv";
  std::ifstream in(path);
  if (!in) return {false, "cannot open " + path};
  const auto file = read_estimates(in);
  const auto found = cumulative_found(file.estimates, kFixtureHorizon, ConfidenceMetric{kFixtureConfidence});
  const auto total = file.estimates.size();

  // Brute force: plain line split, no library parsing.
  std::ifstream raw(path);
  std::string line;
  std::getline(raw, line);
  std::size_t column = 0;
  {
    std::stringstream header(line);
    std::string cell;
    for (std::size_t i = 0; std::getline(header, cell, ','); ++i) {
      if (cell == "n_at_0.95") column = i;
    }
  }
  std::size_t bf_found = 0;
  std::size_t bf_total = 0;
  while (std::getline(raw, line)) {
    if (line.empty()) continue;
    ++bf_total;
    std::stringstream row(line);
    std::string cell;
    for (std::size_t i = 0; i <= column; ++i) std::getline(row, cell, ',');
    if (cell != "UNREACHABLE" && std::stoul(cell) <= kFixtureHorizon) ++bf_found;
  }

  Outcome o;
  o.pass = column > 0 && total > 0 && found == bf_found && total == bf_total;
  char buf[200];
  std::snprintf(buf, sizeof buf, "S(%zu, %.2f)/|T| = %zu/%zu = %.1f%%; brute force %zu/%zu", kFixtureHorizon,
                kFixtureConfidence, found, total, total ? 100.0 * static_cast<double>(found) / static_cast<double>(total) : 0.0,
                bf_found, bf_total);
  o.detail = buf;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"formula-oracle agreement", formula_oracle_agreement},
      {"exact derived values", exact_values},
      {"classifier ground-truth recovery", classifier_recovery},
      {"rerun calculus consistency", calculus_consistency},
      {"ingestion round-trip", ingestion_round_trip},
      {"fixture-scale fraction replication", fixture_arithmetic},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
