#include "flakelab/plan.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "flakelab/error.hpp"

namespace flakelab {

namespace pt = boost::property_tree;

std::string_view to_string(ShuffleScope s) {
  switch (s) {
    case ShuffleScope::Class: return "class";
    case ShuffleScope::Module: return "module";
    case ShuffleScope::Package: return "package";
    case ShuffleScope::Project: return "project";
  }
  return "";
}

std::optional<ShuffleScope> parse_shuffle_scope(std::string_view text) {
  for (auto s : {ShuffleScope::Class, ShuffleScope::Module, ShuffleScope::Package, ShuffleScope::Project}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

void validate_plan(const RunPlan& plan) {
  const auto block = plan.iterations * plan.runs_per_iteration;
  const auto check = [&](std::size_t total, const char* mode) {
    if (total != 0 && total != block) {
      throw Error(ErrorCode::NonRectangularPlan, std::string(mode) + " runs (" + std::to_string(total) +
                                                     ") != iterations x runs_per_iteration (" +
                                                     std::to_string(block) + ")");
    }
  };
  if (plan.iterations == 0 || plan.runs_per_iteration == 0) {
    throw Error(ErrorCode::NonRectangularPlan, "iterations and runs_per_iteration must be positive");
  }
  check(plan.total_runs_same_order, "same-order");
  check(plan.total_runs_shuffled, "shuffled");
}

std::vector<RunSpec> expand_plan(const RunPlan& plan) {
  validate_plan(plan);
  std::vector<RunSpec> specs;
  specs.reserve(plan.total_runs_same_order + plan.total_runs_shuffled);
  std::size_t run_index = 0;
  std::size_t iteration_base = 0;
  const auto emit = [&](std::size_t total, bool shuffled) {
    if (total == 0) return;
    for (std::size_t it = 0; it < plan.iterations; ++it) {
      for (std::size_t r = 0; r < plan.runs_per_iteration; ++r, ++run_index) {
        RunSpec spec;
        spec.run_index = run_index;
        spec.iteration_id = iteration_base + it;
        spec.order_mode = shuffled ? OrderMode::shuffled(plan.seed_policy.seed_for(run_index)) : OrderMode::same();
        spec.report_path = plan.report_dir / ("run-" + std::to_string(run_index) + ".xml");
        specs.push_back(std::move(spec));
      }
    }
    iteration_base += plan.iterations;
  };
  emit(plan.total_runs_same_order, false);
  emit(plan.total_runs_shuffled, true);
  return specs;
}

std::string shell_quote(const std::string& value) {
  const bool plain = !value.empty() && value.find_first_not_of(
                                           "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_./:=@%+-") ==
                                           std::string::npos;
  if (plain) return value;
  std::string out = "'";
  for (char c : value) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

std::string resolve_command(const std::string& command_template, const Placeholders& values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < command_template.size()) {
    const auto open = command_template.find('{', pos);
    if (open == std::string::npos) {
      out.append(command_template, pos);
      break;
    }
    out.append(command_template, pos, open - pos);
    const auto close = command_template.find('}', open);
    if (close == std::string::npos) {
      throw Error(ErrorCode::UnresolvablePlaceholder, "unterminated '{' in command template");
    }
    const auto name = command_template.substr(open + 1, close - open - 1);
    const std::string* value = nullptr;
    if (name == "REPORT_PATH") {
      value = &values.report_path;
    } else if (name == "ORDER_SEED") {
      value = &values.order_seed;
    } else if (name == "ORDER_SCOPE") {
      value = &values.order_scope;
    } else if (name == "TEST_SELECTOR") {
      value = &values.test_selector;
    } else {
      throw Error(ErrorCode::UnresolvablePlaceholder, "unknown placeholder {" + name + "}");
    }
    if (!value->empty()) out += shell_quote(*value);
    pos = close + 1;
  }
  return out;
}

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::size_t to_count(const std::string& key, const std::string& text) {
  std::size_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    config_error(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

double to_seconds(const std::string& key, const std::string& text) {
  double value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() || !(value > 0)) {
    config_error(key + ": expected a positive number of seconds, got '" + text + "'");
  }
  return value;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  config_error(key + ": expected true or false, got '" + text + "'");
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& text) {
  std::filesystem::path p(text);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"", {"command", "workdir", "report_dir", "trace_dir", "scrub_env"}},
    {"campaign", {"same_order_runs", "shuffled_runs", "iterations", "runs_per_iteration"}},
    {"shuffle", {"scope", "seed_policy", "seed"}},
    {"limits", {"per_run_timeout"}},
    {"isolation", {"runs"}},
};

}  // namespace

RunPlan parse_plan(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  RunPlan plan;
  plan.workdir = base_dir;
  plan.report_dir = base_dir / ".flakelab/reports";

  for (const auto& [key, node] : tree) {
    const bool is_section = !node.empty();
    if (!is_section) {
      if (!kKnownKeys.at("").contains(key)) config_error("unknown key '" + key + "'");
      const auto value = node.data();
      if (key == "command") {
        plan.command_template = value;
      } else if (key == "workdir") {
        plan.workdir = resolve_path(base_dir, value);
      } else if (key == "report_dir") {
        plan.report_dir = resolve_path(base_dir, value);
      } else if (key == "trace_dir") {
        plan.trace_dir = value.empty() ? std::filesystem::path{} : resolve_path(base_dir, value);
      } else if (key == "scrub_env") {
        plan.scrub_env = to_bool(key, value);
      }
      continue;
    }
    if (key == "env") {
      for (const auto& [name, v] : node) plan.env_overrides[name] = v.data();
      continue;
    }
    const auto known = kKnownKeys.find(key);
    if (known == kKnownKeys.end() || key.empty()) config_error("unknown section [" + key + "]");
    for (const auto& [name, v] : node) {
      if (!known->second.contains(name)) config_error("unknown key '" + name + "' in [" + key + "]");
      const auto qualified = key + "." + name;
      const auto& value = v.data();
      if (qualified == "campaign.same_order_runs") {
        plan.total_runs_same_order = to_count(qualified, value);
      } else if (qualified == "campaign.shuffled_runs") {
        plan.total_runs_shuffled = to_count(qualified, value);
      } else if (qualified == "campaign.iterations") {
        plan.iterations = to_count(qualified, value);
      } else if (qualified == "campaign.runs_per_iteration") {
        plan.runs_per_iteration = to_count(qualified, value);
      } else if (qualified == "shuffle.scope") {
        const auto scope = parse_shuffle_scope(value);
        if (!scope) config_error(qualified + ": expected class, module, package or project");
        plan.shuffle_scope = *scope;
      } else if (qualified == "shuffle.seed_policy") {
        if (value == "per-run") {
          plan.seed_policy.kind = SeedPolicy::Kind::PerRunDistinct;
        } else if (value == "fixed") {
          plan.seed_policy.kind = SeedPolicy::Kind::Fixed;
        } else {
          config_error(qualified + ": expected per-run or fixed");
        }
      } else if (qualified == "shuffle.seed") {
        plan.seed_policy.seed = to_count(qualified, value);
      } else if (qualified == "limits.per_run_timeout") {
        plan.per_run_timeout_s = to_seconds(qualified, value);
      } else if (qualified == "isolation.runs") {
        plan.isolation_runs = to_count(qualified, value);
        if (plan.isolation_runs == 0) config_error(qualified + " must be at least 1");
      }
    }
  }

  if (plan.command_template.empty()) config_error("missing 'command'");
  // Reject unknown placeholders before any run starts.
  resolve_command(plan.command_template, {});
  validate_plan(plan);
  return plan;
}

RunPlan load_plan(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) config_error("cannot read config " + config_path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto base = config_path.parent_path();
  if (base.empty()) base = ".";
  return parse_plan(buf.str(), base);
}

}  // namespace flakelab
