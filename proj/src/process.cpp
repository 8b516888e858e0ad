#include "flakelab/process.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <thread>
#include <vector>

#include "flakelab/error.hpp"

extern char** environ;

namespace flakelab {

namespace {

using SteadyClock = std::chrono::steady_clock;

constexpr auto kPollInterval = std::chrono::milliseconds(5);

// Linux: scan /proc for members of the group that are not zombies.
std::optional<bool> scan_proc_for_group(int pgid) {
  std::error_code ec;
  std::filesystem::directory_iterator it("/proc", ec);
  if (ec) return std::nullopt;
  for (const auto& entry : it) {
    const auto name = entry.path().filename().string();
    if (name.empty() || name.find_first_not_of("0123456789") != std::string::npos) continue;
    std::ifstream stat(entry.path() / "stat");
    std::string line;
    if (!std::getline(stat, line)) continue;
    // Fields after the parenthesised command: state ppid pgrp ...
    const auto close = line.rfind(')');
    if (close == std::string::npos) continue;
    char state = 0;
    int ppid = 0;
    int pgrp = 0;
    if (std::sscanf(line.c_str() + close + 1, " %c %d %d", &state, &ppid, &pgrp) != 3) continue;
    if (pgrp == pgid && state != 'Z' && state != 'X') return true;
  }
  return false;
}

void reap_nohang(pid_t pid, int& status, bool& reaped) {
  if (reaped) return;
  if (waitpid(pid, &status, WNOHANG) == pid) reaped = true;
}

}  // namespace

bool process_group_alive(int process_group) {
  if (auto scanned = scan_proc_for_group(process_group)) return *scanned;
  return ::kill(-process_group, 0) == 0 || errno == EPERM;
}

std::map<std::string, std::string> current_environment() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    const std::string entry(*e);
    const auto eq = entry.find('=');
    if (eq != std::string::npos) env[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return env;
}

ProcessResult run_process(const ProcessOptions& options) {
  std::vector<std::string> env_storage;
  env_storage.reserve(options.env.size());
  for (const auto& [k, v] : options.env) env_storage.push_back(k + "=" + v);
  std::vector<char*> envp;
  for (auto& s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);

  const std::string workdir = options.workdir.string();
  const char* argv[] = {"/bin/sh", "-c", options.command.c_str(), nullptr};

  const pid_t pid = fork();
  if (pid < 0) throw Error(ErrorCode::IoError, std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    if (!workdir.empty() && chdir(workdir.c_str()) != 0) _exit(126);
    const int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) {
      dup2(devnull, STDIN_FILENO);
      close(devnull);
    }
    execve(argv[0], const_cast<char* const*>(argv), envp.data());
    _exit(127);
  }
  // Also set from the parent so the group exists before we might signal it.
  setpgid(pid, pid);

  ProcessResult result;
  result.process_group = pid;
  int status = 0;
  bool reaped = false;

  const auto deadline = SteadyClock::now() + std::chrono::duration_cast<SteadyClock::duration>(
                                                 std::chrono::duration<double>(options.timeout_s));
  while (!reaped) {
    reap_nohang(pid, status, reaped);
    if (reaped) break;
    if (SteadyClock::now() >= deadline) {
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(kPollInterval);
  }

  if (result.timed_out) {
    ::kill(-pid, SIGTERM);
    const auto kill_at = SteadyClock::now() + std::chrono::duration_cast<SteadyClock::duration>(
                                                  std::chrono::duration<double>(options.kill_grace_s));
    while (SteadyClock::now() < kill_at) {
      reap_nohang(pid, status, reaped);
      if (reaped && !process_group_alive(pid)) break;
      std::this_thread::sleep_for(kPollInterval);
    }
    ::kill(-pid, SIGKILL);
    if (!reaped) {
      waitpid(pid, &status, 0);
      reaped = true;
    }
    // Orphaned grandchildren are reparented; wait until none is alive.
    while (process_group_alive(pid)) {
      ::kill(-pid, SIGKILL);
      std::this_thread::sleep_for(kPollInterval);
    }
  } else {
    // Background processes left behind by a finished suite are not allowed to
    // leak into the next run.
    if (process_group_alive(pid)) {
      ::kill(-pid, SIGKILL);
      while (process_group_alive(pid)) std::this_thread::sleep_for(kPollInterval);
    }
  }

  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.term_signal = WTERMSIG(status);
  }
  return result;
}

}  // namespace flakelab
