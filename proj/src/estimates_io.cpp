#include "flakelab/estimates_io.hpp"

#include <ostream>

#include "flakelab/csv.hpp"
#include "flakelab/error.hpp"

namespace flakelab {

namespace {

constexpr std::string_view kUnreachable = "UNREACHABLE";

std::string count_text(const RerunCount& count) {
  return count ? std::to_string(*count) : std::string(kUnreachable);
}

}  // namespace

std::string confidence_label(double confidence) {
  auto text = csv::format_double(confidence);
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    text += ".00";
  } else if (text.size() - dot < 3) {
    text.append(3 - (text.size() - dot), '0');
  }
  return text;
}

void write_estimates(std::ostream& out, std::span<const RerunEstimate> estimates, std::span<const double> confidences) {
  std::vector<std::string> header = {"test_id", "p_pass", "p_fail_error", "p_skip", "n_once"};
  for (double p : confidences) header.push_back("n_at_" + confidence_label(p));
  csv::write_row(out, header);
  for (const auto& est : estimates) {
    std::vector<std::string> row = {est.test.canonical(), csv::format_double(est.rates.p_pass),
                                    csv::format_double(est.rates.p_fail_error), csv::format_double(est.rates.p_skip),
                                    est.n_once ? std::to_string(*est.n_once) : ""};
    for (double p : confidences) row.push_back(count_text(est.reruns_at(p)));
    csv::write_row(out, row);
  }
}

EstimatesFile read_estimates(std::istream& in) {
  std::vector<std::string> fields;
  if (!csv::read_row(in, fields) || fields.size() < 5 || fields[0] != "test_id" || fields[1] != "p_pass" ||
      fields[2] != "p_fail_error" || fields[3] != "p_skip" || fields[4] != "n_once") {
    throw Error(ErrorCode::MalformedArchive, "unexpected estimates header");
  }
  EstimatesFile file;
  for (std::size_t i = 5; i < fields.size(); ++i) {
    if (!fields[i].starts_with("n_at_")) throw Error(ErrorCode::MalformedArchive, "bad column " + fields[i]);
    file.confidences.push_back(csv::parse_double(std::string_view(fields[i]).substr(5)));
  }
  const auto width = fields.size();
  while (csv::read_row(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != width) throw Error(ErrorCode::MalformedArchive, "row width mismatch");
    RerunEstimate est;
    est.test = TestId::parse(fields[0]);
    est.rates = {csv::parse_double(fields[1]), csv::parse_double(fields[2]), csv::parse_double(fields[3])};
    if (!fields[4].empty()) est.n_once = csv::parse_u64(fields[4]);
    for (std::size_t i = 0; i < file.confidences.size(); ++i) {
      const auto& cell = fields[5 + i];
      est.n_at[file.confidences[i]] = cell == kUnreachable ? RerunCount{} : RerunCount{csv::parse_u64(cell)};
    }
    file.estimates.push_back(std::move(est));
  }
  return file;
}

void write_curve(std::ostream& out, const RerunSummary& summary) {
  std::vector<std::string> header = {"n", "S_once"};
  for (const auto& cs : summary.per_confidence) header.push_back("S_" + confidence_label(cs.confidence));
  csv::write_row(out, header);
  for (std::size_t n = 0; n <= summary.campaign_length; ++n) {
    std::vector<std::string> row = {std::to_string(n), std::to_string(summary.curve_once[n])};
    for (const auto& cs : summary.per_confidence) row.push_back(std::to_string(cs.curve[n]));
    csv::write_row(out, row);
  }
}

}  // namespace flakelab
