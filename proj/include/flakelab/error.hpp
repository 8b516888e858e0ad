#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flakelab {

enum class ErrorCode {
  MalformedXml,
  EmptyReport,
  EmptyInput,
  DuplicateRunIndex,
  UnknownTest,
  UnknownIteration,
  InvalidTestId,
  MalformedArchive,
  NonRectangularPlan,
  UnresolvablePlaceholder,
  WorkdirMissing,
  ReportMissing,
  ConfigError,
  InsufficientData,
  InvalidConfidence,
  ZeroExecutions,
  NotEnoughProjects,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the toolkit; the code identifies the failed
/// contract so callers (and the CLI) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flakelab
