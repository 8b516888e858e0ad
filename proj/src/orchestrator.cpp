#include "flakelab/orchestrator.hpp"

#include <sys/utsname.h>
#include <unistd.h>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "flakelab/error.hpp"
#include "flakelab/junit.hpp"
#include "flakelab/process.hpp"

namespace flakelab {

namespace fs = std::filesystem;

namespace {

// FNV-1a, 64 bit.
std::uint64_t fnv1a(std::string_view data, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("model name")) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) return line.substr(line.find_first_not_of(" \t", colon + 1));
    }
  }
  return "unknown-cpu";
}

/// mkdtemp-backed scratch directory removed on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    auto tmpl = (fs::temp_directory_path() / "flakelab-run-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw Error(ErrorCode::IoError, "cannot create scratch directory");
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::map<std::string, std::string> child_environment(const RunPlan& plan, const RunSpec& spec,
                                                     const fs::path& scratch) {
  std::map<std::string, std::string> env;
  if (plan.scrub_env) {
    const auto parent = current_environment();
    for (const char* keep : {"PATH", "HOME", "LANG", "LC_ALL", "USER"}) {
      if (auto it = parent.find(keep); it != parent.end()) env.insert(*it);
    }
  } else {
    env = current_environment();
  }
  for (const char* var : {"FLAKELAB_ORDER_SEED", "FLAKELAB_ORDER_SCOPE", "FLAKELAB_TRACE_DIR"}) env.erase(var);

  env["TMPDIR"] = scratch.string();
  env["TMP"] = scratch.string();
  env["TEMP"] = scratch.string();
  if (spec.order_mode.is_shuffled()) {
    env["FLAKELAB_ORDER_SEED"] = std::to_string(spec.order_mode.seed);
    env["FLAKELAB_ORDER_SCOPE"] = std::string(to_string(plan.shuffle_scope));
  }
  if (!plan.trace_dir.empty()) {
    const auto dir = plan.trace_dir / ("run-" + std::to_string(spec.run_index));
    fs::create_directories(dir);
    env["FLAKELAB_TRACE_DIR"] = dir.string();
  }
  for (const auto& [k, v] : plan.env_overrides) env[k] = v;
  return env;
}

}  // namespace

std::string fingerprint_of(const std::string& hostname, const std::string& os_id, const std::string& cpu_model) {
  auto hash = fnv1a(hostname);
  hash = fnv1a(std::string_view("\0", 1), hash);
  hash = fnv1a(os_id, hash);
  hash = fnv1a(std::string_view("\0", 1), hash);
  hash = fnv1a(cpu_model, hash);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string machine_fingerprint() {
  static const std::string cached = [] {
    char host[256] = {};
    gethostname(host, sizeof host - 1);
    std::string os_id = "unknown-os";
    utsname uts{};
    if (uname(&uts) == 0) os_id = std::string(uts.sysname) + " " + uts.release + " " + uts.machine;
    return fingerprint_of(host, os_id, cpu_model());
  }();
  return cached;
}

RunRecord execute_run(const RunSpec& spec, const RunPlan& plan, const RunOptions& options) {
  if (!fs::is_directory(plan.workdir)) throw Error(ErrorCode::WorkdirMissing, plan.workdir.string());

  Placeholders values;
  values.report_path = fs::absolute(spec.report_path).string();
  if (spec.order_mode.is_shuffled()) {
    values.order_seed = std::to_string(spec.order_mode.seed);
    values.order_scope = std::string(to_string(plan.shuffle_scope));
  }
  values.test_selector = options.test_selector;
  const auto command = resolve_command(plan.command_template, values);

  fs::create_directories(fs::absolute(spec.report_path).parent_path());
  std::error_code ec;
  fs::remove(spec.report_path, ec);

  ScratchDir scratch;
  ProcessOptions proc;
  proc.command = command;
  proc.workdir = plan.workdir;
  proc.env = child_environment(plan, spec, scratch.path());
  proc.timeout_s = plan.per_run_timeout_s;

  RunRecord record;
  record.meta.run_index = spec.run_index;
  record.meta.iteration_id = spec.iteration_id;
  record.meta.order_mode = spec.order_mode;
  record.meta.machine_fingerprint = options.fingerprint.empty() ? machine_fingerprint() : options.fingerprint;
  record.meta.started_at = Clock::now();
  const auto outcome = run_process(proc);
  record.meta.ended_at = Clock::now();

  if (outcome.timed_out) {
    record.meta.exit_status = ExitStatus::Timeout;
    return record;
  }
  try {
    const auto report = parse_junit_file(spec.report_path.string());
    for (const auto& warning : report.warnings) std::cerr << "warning: run " << spec.run_index << ": " << warning << '\n';
    for (const auto& entry : report.entries) {
      record.verdicts[entry.test] = TestResult{entry.verdict, entry.duration_s};
    }
    record.meta.exit_status = ExitStatus::Completed;
  } catch (const Error& e) {
    std::cerr << "warning: run " << spec.run_index << " crashed: " << e.what() << '\n';
    record.meta.exit_status = ExitStatus::Crashed;
    record.verdicts.clear();
  }
  return record;
}

std::vector<Verdict> execute_isolation(const TestId& test, std::size_t n, const RunPlan& plan) {
  if (plan.command_template.find("{TEST_SELECTOR}") == std::string::npos) {
    throw Error(ErrorCode::UnresolvablePlaceholder, "isolation needs {TEST_SELECTOR} in the command template");
  }
  RunOptions options;
  options.test_selector = test.canonical();

  // File-name-safe tag for the isolation reports.
  std::string tag = options.test_selector;
  for (auto& c : tag) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }

  std::vector<Verdict> verdicts;
  verdicts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RunSpec spec;
    spec.run_index = i;
    spec.order_mode = OrderMode::same();
    spec.report_path = plan.report_dir / "isolation" / (tag + "-" + std::to_string(i) + ".xml");
    RunPlan isolated = plan;
    isolated.trace_dir.clear();
    const auto record = execute_run(spec, isolated, options);
    const auto it = record.verdicts.find(test);
    verdicts.push_back(it == record.verdicts.end() ? Verdict::Absent : it->second.verdict);
  }
  return verdicts;
}

std::vector<RunRecord> run_campaign(const RunPlan& plan, const RunCallback& on_run) {
  const auto specs = expand_plan(plan);
  std::vector<RunRecord> records;
  records.reserve(specs.size());
  for (const auto& spec : specs) {
    records.push_back(execute_run(spec, plan));
    if (on_run) on_run(spec, records.back());
  }
  return records;
}

}  // namespace flakelab
