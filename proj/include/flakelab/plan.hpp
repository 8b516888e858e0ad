#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flakelab/run_record.hpp"

namespace flakelab {

enum class ShuffleScope { Class, Module, Package, Project };

std::string_view to_string(ShuffleScope s);
std::optional<ShuffleScope> parse_shuffle_scope(std::string_view text);

struct SeedPolicy {
  enum class Kind { PerRunDistinct, Fixed } kind = Kind::PerRunDistinct;
  std::uint64_t seed = 0;  // base seed, or the fixed seed

  std::uint64_t seed_for(std::size_t run_index) const {
    return kind == Kind::PerRunDistinct ? seed + run_index : seed;
  }
};

/// Declarative rerun campaign. Each order mode runs either not at all or as
/// `iterations` blocks of `runs_per_iteration` consecutive runs.
struct RunPlan {
  /// Shell command; placeholders {REPORT_PATH}, {ORDER_SEED}, {ORDER_SCOPE},
  /// {TEST_SELECTOR} are replaced per run.
  std::string command_template;
  std::filesystem::path workdir = ".";
  std::size_t total_runs_same_order = 200;
  std::size_t total_runs_shuffled = 200;
  std::size_t iterations = 10;
  std::size_t runs_per_iteration = 20;
  ShuffleScope shuffle_scope = ShuffleScope::Project;
  SeedPolicy seed_policy;
  double per_run_timeout_s = 3600.0;
  std::map<std::string, std::string> env_overrides;
  /// Start the child from a minimal environment instead of inheriting ours.
  bool scrub_env = false;
  /// Where per-run JUnit reports are written.
  std::filesystem::path report_dir = ".flakelab/reports";
  /// Root for per-run trace directories; empty disables tracing.
  std::filesystem::path trace_dir;
  std::size_t isolation_runs = 10;
};

struct RunSpec {
  std::size_t run_index = 0;
  std::size_t iteration_id = 0;
  OrderMode order_mode;
  std::filesystem::path report_path;

  friend bool operator==(const RunSpec& a, const RunSpec& b) {
    return a.run_index == b.run_index && a.iteration_id == b.iteration_id && a.order_mode == b.order_mode &&
           a.report_path == b.report_path;
  }
};

/// Throws Error(NonRectangularPlan) when a mode's run total is neither 0 nor
/// iterations * runs_per_iteration.
void validate_plan(const RunPlan& plan);

/// Same-order iterations first (ids 0..I-1, run indices 0..N-1), then the
/// shuffled ones (ids I..2I-1, run indices N..N+M-1). Pure.
std::vector<RunSpec> expand_plan(const RunPlan& plan);

struct Placeholders {
  std::string report_path;
  std::string order_seed;
  std::string order_scope;
  std::string test_selector;
};

/// Substitutes placeholders; non-empty values are shell-quoted, empty ones
/// vanish. Throws Error(UnresolvablePlaceholder) on unknown {NAME} tokens.
std::string resolve_command(const std::string& command_template, const Placeholders& values);

/// Shell single-quoting when the value has characters outside [A-Za-z0-9_./:=@%+-].
std::string shell_quote(const std::string& value);

/// INI-style campaign config. Relative paths resolve against the config file's
/// directory. Throws Error(ConfigError) or Error(NonRectangularPlan).
RunPlan load_plan(const std::filesystem::path& config_path);
RunPlan parse_plan(const std::string& text, const std::filesystem::path& base_dir);

}  // namespace flakelab
