#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flakelab/plan.hpp"

namespace flakelab {

/// Stable hash (hex) of hostname, OS identifier and CPU model text.
std::string machine_fingerprint();
std::string fingerprint_of(const std::string& hostname, const std::string& os_id, const std::string& cpu_model);

/// Extra knobs for a single run that the plan does not carry.
struct RunOptions {
  std::string test_selector;
  /// Overrides machine_fingerprint(); tests use this to simulate machines.
  std::string fingerprint;
};

/// Runs one spec: fresh process group, scratch TMPDIR, env overrides and the
/// FLAKELAB_* variables, then parses the report. A timeout yields a Timeout
/// record and a missing or unparsable report a Crashed record; both carry no
/// verdicts (all ABSENT once in a matrix). Throws Error(WorkdirMissing).
RunRecord execute_run(const RunSpec& spec, const RunPlan& plan, const RunOptions& options = {});

/// Runs only `test`, n times in a row, and returns its verdict per run;
/// ABSENT when the run did not report the test. Throws
/// Error(UnresolvablePlaceholder) if the template lacks {TEST_SELECTOR}.
std::vector<Verdict> execute_isolation(const TestId& test, std::size_t n, const RunPlan& plan);

using RunCallback = std::function<void(const RunSpec&, const RunRecord&)>;

/// Executes every spec of the plan strictly in sequence.
std::vector<RunRecord> run_campaign(const RunPlan& plan, const RunCallback& on_run = {});

}  // namespace flakelab
