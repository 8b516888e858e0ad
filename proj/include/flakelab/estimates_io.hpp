#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "flakelab/rerun_stats.hpp"

namespace flakelab {

/// Column label for a confidence: at least two decimals ("0.50", "0.95", "0.999").
std::string confidence_label(double confidence);

/// test_id,p_pass,p_fail_error,p_skip,n_once,n_at_<p>... with UNREACHABLE for
/// unreachable counts and an empty n_once when undefined.
void write_estimates(std::ostream& out, std::span<const RerunEstimate> estimates, std::span<const double> confidences);

struct EstimatesFile {
  std::vector<double> confidences;
  std::vector<RerunEstimate> estimates;
};

/// Inverse of write_estimates. Throws Error(MalformedArchive).
EstimatesFile read_estimates(std::istream& in);

/// n,S_once,S_<p>... with one row per n = 0..campaign_length.
void write_curve(std::ostream& out, const RerunSummary& summary);

}  // namespace flakelab
