#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace flakelab {

struct ProcessOptions {
  std::string command;  // run through /bin/sh -c
  std::filesystem::path workdir;
  /// Full child environment.
  std::map<std::string, std::string> env;
  double timeout_s = 3600.0;
  /// Time between SIGTERM and SIGKILL once the deadline has passed.
  double kill_grace_s = 2.0;
};

struct ProcessResult {
  std::optional<int> exit_code;    // set on normal exit
  std::optional<int> term_signal;  // set when killed by a signal
  bool timed_out = false;
  int process_group = 0;
};

/// Launches the command as the leader of a fresh process group. On timeout
/// the whole group gets SIGTERM, then SIGKILL, and the call returns only once
/// no live member of the group remains. Throws Error(IoError) if the child
/// cannot be started.
ProcessResult run_process(const ProcessOptions& options);

/// True if any non-zombie process still belongs to the group.
bool process_group_alive(int process_group);

/// Current environment as a map.
std::map<std::string, std::string> current_environment();

}  // namespace flakelab
