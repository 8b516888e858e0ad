#include "flakelab/archive.hpp"

#include <fstream>
#include <map>

#include "flakelab/csv.hpp"
#include "flakelab/error.hpp"

namespace flakelab {

namespace {

const std::vector<std::string> kHeader = {"run_index",           "iteration_id", "order_mode", "order_seed",
                                          "machine_fingerprint", "test_id",      "verdict",    "duration_s"};

std::vector<std::string> run_fields(const RunMeta& run) {
  return {std::to_string(run.run_index), std::to_string(run.iteration_id),
          run.order_mode.is_shuffled() ? "shuffled" : "same",
          run.order_mode.is_shuffled() ? std::to_string(run.order_mode.seed) : "", run.machine_fingerprint};
}

}  // namespace

void write_archive(std::ostream& out, const VerdictMatrix& matrix) {
  csv::write_row(out, kHeader);
  for (std::size_t col = 0; col < matrix.run_count(); ++col) {
    const auto prefix = run_fields(matrix.runs()[col]);
    if (matrix.test_count() == 0) {
      auto fields = prefix;
      fields.insert(fields.end(), {"", std::string(to_string(Verdict::Absent)), "0"});
      csv::write_row(out, fields);
      continue;
    }
    for (std::size_t row = 0; row < matrix.test_count(); ++row) {
      const auto& res = matrix.result(row, col);
      auto fields = prefix;
      fields.push_back(matrix.tests()[row].canonical());
      fields.emplace_back(to_string(res.verdict));
      fields.push_back(csv::format_double(res.duration_s));
      csv::write_row(out, fields);
    }
  }
}

void write_archive_file(const std::string& path, const VerdictMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_archive(out, matrix);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

VerdictMatrix read_archive(std::istream& in) {
  std::vector<std::string> fields;
  if (!csv::read_row(in, fields) || fields != kHeader) {
    throw Error(ErrorCode::MalformedArchive, "missing or unexpected header");
  }

  std::map<std::size_t, RunRecord> records;
  std::size_t line = 1;
  while (csv::read_row(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != kHeader.size()) {
      throw Error(ErrorCode::MalformedArchive, "line " + std::to_string(line) + ": expected 8 fields");
    }
    RunMeta meta;
    meta.run_index = csv::parse_u64(fields[0]);
    meta.iteration_id = csv::parse_u64(fields[1]);
    if (fields[2] == "same") {
      meta.order_mode = OrderMode::same();
    } else if (fields[2] == "shuffled") {
      meta.order_mode = OrderMode::shuffled(csv::parse_u64(fields[3]));
    } else {
      throw Error(ErrorCode::MalformedArchive, "line " + std::to_string(line) + ": bad order_mode");
    }
    meta.machine_fingerprint = fields[4];

    auto [it, inserted] = records.try_emplace(meta.run_index, RunRecord{meta, {}});
    if (!inserted) {
      const auto& seen = it->second.meta;
      if (seen.iteration_id != meta.iteration_id || !(seen.order_mode == meta.order_mode) ||
          seen.machine_fingerprint != meta.machine_fingerprint) {
        throw Error(ErrorCode::MalformedArchive,
                    "line " + std::to_string(line) + ": run metadata differs from earlier rows");
      }
    }
    if (fields[5].empty()) continue;

    const auto verdict = parse_verdict(fields[6]);
    if (!verdict) throw Error(ErrorCode::MalformedArchive, "line " + std::to_string(line) + ": bad verdict");
    it->second.verdicts[TestId::parse(fields[5])] = TestResult{*verdict, csv::parse_double(fields[7])};
  }

  if (records.empty()) throw Error(ErrorCode::MalformedArchive, "archive has no runs");
  std::vector<RunRecord> list;
  list.reserve(records.size());
  for (auto& [_, record] : records) list.push_back(std::move(record));
  return build_matrix(std::move(list));
}

VerdictMatrix read_archive_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return read_archive(in);
}

}  // namespace flakelab
