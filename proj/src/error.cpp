#include "flakelab/error.hpp"

namespace flakelab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::EmptyReport: return "EmptyReport";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DuplicateRunIndex: return "DuplicateRunIndex";
    case ErrorCode::UnknownTest: return "UnknownTest";
    case ErrorCode::UnknownIteration: return "UnknownIteration";
    case ErrorCode::InvalidTestId: return "InvalidTestId";
    case ErrorCode::MalformedArchive: return "MalformedArchive";
    case ErrorCode::NonRectangularPlan: return "NonRectangularPlan";
    case ErrorCode::UnresolvablePlaceholder: return "UnresolvablePlaceholder";
    case ErrorCode::WorkdirMissing: return "WorkdirMissing";
    case ErrorCode::ReportMissing: return "ReportMissing";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidConfidence: return "InvalidConfidence";
    case ErrorCode::ZeroExecutions: return "ZeroExecutions";
    case ErrorCode::NotEnoughProjects: return "NotEnoughProjects";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace flakelab
