#include "flakelab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "flakelab/archive.hpp"
#include "flakelab/classify_io.hpp"
#include "flakelab/csv.hpp"
#include "flakelab/error.hpp"
#include "flakelab/estimates_io.hpp"
#include "flakelab/oracle.hpp"
#include "flakelab/orchestrator.hpp"
#include "flakelab/report.hpp"
#include "flakelab/sampling.hpp"

namespace flakelab {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string output;
};

/// Writes to --output when given, else to the caller's stream.
class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(ErrorCode::IoError, "cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

void emit_table(std::ostream& out, const GlobalOptions& g, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  if (g.format == "table") {
    write_text_table(out, header, rows);
    return;
  }
  csv::write_row(out, header);
  for (const auto& row : rows) csv::write_row(out, row);
}

std::map<TestId, std::vector<Verdict>> load_isolation_file(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return read_isolation(in);
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string config;
  std::string archive = "archive.csv";
  bool isolate = false;
  std::string isolation_out;
};

int cmd_run(const RunArgs& a, std::ostream& err) {
  RunPlan plan;
  try {
    plan = load_plan(a.config);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::size_t completed = 0;
  const auto records = run_campaign(plan, [&](const RunSpec& spec, const RunRecord& rec) {
    if (rec.meta.exit_status == ExitStatus::Completed) ++completed;
    const char* status = rec.meta.exit_status == ExitStatus::Completed ? "completed"
                         : rec.meta.exit_status == ExitStatus::Timeout ? "timeout"
                                                                        : "crashed";
    err << "run " << spec.run_index << " (iteration " << spec.iteration_id << ", "
        << (spec.order_mode.is_shuffled() ? "shuffled seed " + std::to_string(spec.order_mode.seed) : "same order")
        << "): " << status << ", " << rec.verdicts.size() << " tests\n";
  });
  const auto matrix = build_matrix(records);
  write_archive_file(a.archive, matrix);
  err << "wrote " << a.archive << " (" << matrix.test_count() << " tests x " << matrix.run_count() << " runs)\n";
  if (completed == 0) {
    err << "campaign aborted: no run produced a report\n";
    return kExitAborted;
  }

  if (a.isolate) {
    std::map<TestId, std::vector<Verdict>> isolation;
    for (const auto& c : classify_campaign(matrix)) {
      if (c.label != RootCause::OrderDependent) continue;
      err << "isolating " << c.test.canonical() << '\n';
      isolation[c.test] = execute_isolation(c.test, plan.isolation_runs, plan);
    }
    const auto path = a.isolation_out.empty() ? a.archive + ".isolation.csv" : a.isolation_out;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    write_isolation(out, isolation);
    err << "wrote " << path << " (" << isolation.size() << " order-dependent tests)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string archive;
  std::string isolation;
  std::string traces;
  std::string sources;
  std::string keywords;
};

std::vector<Classification> classify_archive(const VerdictMatrix& matrix, const ClassifyArgs& a) {
  ClassifyInputs inputs;
  inputs.isolation = load_isolation_file(a.isolation);
  if (!a.traces.empty()) inputs.traces = load_traces(a.traces);
  if (!a.sources.empty()) inputs.sources = load_sources(matrix.tests(), a.sources);
  KeywordTable table;
  if (!a.keywords.empty()) {
    table = KeywordTable::load_file(a.keywords);
    inputs.keywords = &table;
  }
  return classify_campaign(matrix, inputs);
}

int cmd_classify(const ClassifyArgs& a, const GlobalOptions& g, std::ostream& out) {
  const auto matrix = read_archive_file(a.archive);
  const auto rows = classify_archive(matrix, a);
  if (g.format == "table") {
    std::ostringstream buf;
    write_classifications(buf, rows);
    std::istringstream in(buf.str());
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> cells;
    csv::read_row(in, header);
    std::vector<std::string> fields;
    while (csv::read_row(in, fields)) cells.push_back(fields);
    write_text_table(out, header, cells);
  } else {
    write_classifications(out, rows);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string archive;
  std::vector<double> confidences;
  std::string curve;
  std::string order = "auto";
  std::string subset = "all";
  std::string isolation;
};

int cmd_estimate(const EstimateArgs& a, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  auto confidences = a.confidences.empty() ? std::vector<double>{0.5, 0.95} : a.confidences;
  std::sort(confidences.begin(), confidences.end());
  confidences.erase(std::unique(confidences.begin(), confidences.end()), confidences.end());
  for (double p : confidences) {
    if (!(p > 0.0 && p < 1.0)) {
      err << "--confidence values must lie in (0, 1)\n";
      return kExitUsage;
    }
  }

  const auto matrix = read_archive_file(a.archive);
  ClassifyArgs classify_args;
  classify_args.isolation = a.isolation;
  const auto labels = classify_archive(matrix, classify_args);

  const auto filter_for = [&](RootCause label) -> RunFilter {
    if (a.order == "same") return RunFilter::same_order();
    if (a.order == "shuffled") return RunFilter::shuffled();
    if (a.order == "all") return {};
    // auto: order-dependent tests are measured where they flake.
    if (label == RootCause::OrderDependent) return RunFilter::shuffled();
    const bool has_same = std::any_of(matrix.runs().begin(), matrix.runs().end(),
                                      [](const RunMeta& r) { return !r.order_mode.is_shuffled(); });
    return has_same ? RunFilter::same_order() : RunFilter{};
  };
  const auto wanted = [&](const Classification& c) {
    if (c.label == RootCause::Infrastructure) return false;  // bulked failures break independence
    if (a.subset == "flaky") return c.label == RootCause::OrderDependent || c.label == RootCause::NonOrderDependent;
    if (a.subset == "od") return c.label == RootCause::OrderDependent;
    if (a.subset == "nod") return c.label == RootCause::NonOrderDependent;
    return true;
  };

  std::vector<RerunEstimate> estimates;
  std::size_t campaign_length = 0;
  for (std::size_t row = 0; row < matrix.test_count(); ++row) {
    const auto& c = labels[row];
    if (!wanted(c)) continue;
    const auto filter = filter_for(c.label);
    auto sequence = matrix.sequence(row, filter);
    campaign_length = std::max(campaign_length, sequence.size());
    VerdictCounts counts;
    for (auto v : sequence) counts.add(v);
    if (counts.executions() == 0) continue;
    estimates.push_back(estimate_from_sequence(c.test, sequence, confidences));
  }

  OutputSink sink(g.output, out);
  if (g.format == "table") {
    std::ostringstream buf;
    write_estimates(buf, estimates, confidences);
    std::istringstream in(buf.str());
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> cells;
    csv::read_row(in, header);
    std::vector<std::string> fields;
    while (csv::read_row(in, fields)) cells.push_back(fields);
    write_text_table(sink.get(), header, cells);
  } else {
    write_estimates(sink.get(), estimates, confidences);
  }

  if (!a.curve.empty() || g.format == "table") {
    if (estimates.empty()) {
      err << "no estimable tests; curve not written\n";
      return kExitOk;
    }
    const auto summary = aggregate_summary(estimates, confidences, campaign_length);
    if (!a.curve.empty()) {
      std::ofstream curve(a.curve, std::ios::binary);
      if (!curve) throw Error(ErrorCode::IoError, "cannot write " + a.curve);
      write_curve(curve, summary);
    }
    if (g.format == "table") {
      auto& o = sink.get();
      o << '\n';
      std::vector<std::vector<std::string>> rows;
      const auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
      const auto found = [&](std::size_t n) { return std::to_string(n) + "/" + std::to_string(summary.tests); };
      rows.push_back({"once", opt(summary.median_once), found(summary.curve_once.back()), ""});
      for (const auto& cs : summary.per_confidence) {
        rows.push_back({confidence_label(cs.confidence), opt(cs.median), found(cs.curve.back()),
                        std::to_string(cs.unreachable)});
      }
      write_text_table(o, {"metric", "median_reruns", "found_at_" + std::to_string(campaign_length), "unreachable"},
                       rows);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> archives;
  std::string group_by;
  std::string meta;
  std::string isolation;
};

std::map<std::string, std::map<std::string, std::vector<std::string>>> read_meta(const std::string& path) {
  std::map<std::string, std::map<std::string, std::vector<std::string>>> tags;
  if (path.empty()) return tags;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::vector<std::string> fields;
  if (!csv::read_row(in, fields) || fields != std::vector<std::string>{"project_id", "key", "value"}) {
    throw Error(ErrorCode::ConfigError, "project metadata needs a 'project_id,key,value' header");
  }
  while (csv::read_row(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 3) throw Error(ErrorCode::ConfigError, "metadata row needs 3 fields");
    tags[fields[0]][fields[1]].push_back(fields[2]);
  }
  return tags;
}

int cmd_report(const ReportArgs& a, const GlobalOptions& g, std::ostream& out) {
  const auto tags = read_meta(a.meta);
  std::vector<Classification> all;
  std::vector<ProjectMeta> projects;
  const auto isolation = load_isolation_file(a.isolation);
  for (const auto& path : a.archives) {
    const auto matrix = read_archive_file(path);
    ClassifyInputs inputs;
    inputs.isolation = isolation;
    auto rows = classify_campaign(matrix, inputs);
    ProjectMeta project;
    project.project_id = fs::path(path).stem().string();
    project.tests_total = matrix.test_count();
    project.flaky_tests = static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& c) {
      return c.label == RootCause::Infrastructure || c.label == RootCause::OrderDependent ||
             c.label == RootCause::NonOrderDependent;
    }));
    if (auto it = tags.find(project.project_id); it != tags.end()) project.tags = it->second;
    projects.push_back(std::move(project));
    all.insert(all.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }

  OutputSink sink(g.output, out);
  const bool percent = g.format == "table";
  if (!a.group_by.empty()) {
    emit_table(sink.get(), g, group_rows_header(), group_rows_cells(group_rates(projects, a.group_by), percent));
  } else {
    emit_table(sink.get(), g, category_header(), category_cells(category_table(all), percent));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const std::vector<std::string>& archives, std::size_t k, const GlobalOptions& g, std::ostream& out) {
  std::map<std::string, std::set<TestId>> nod;
  std::map<TestId, std::string> project_of;
  for (const auto& path : archives) {
    const auto project = fs::path(path).stem().string();
    auto& tests = nod[project];
    for (const auto& c : classify_campaign(read_archive_file(path))) {
      if (c.label == RootCause::NonOrderDependent) {
        tests.insert(c.test);
        project_of[c.test] = project;
      }
    }
  }
  const auto sample = stratified_sample(nod, k, g.seed);
  std::vector<std::vector<std::string>> rows;
  for (const auto& test : sample) rows.push_back({project_of[test], test.canonical()});
  OutputSink sink(g.output, out);
  emit_table(sink.get(), g, {"project", "test_id"}, rows);
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(std::size_t trials, double tolerance, const GlobalOptions& g, std::ostream& out) {
  const auto rows = run_unveil_oracle(trials, g.seed, tolerance);
  std::vector<std::vector<std::string>> cells;
  bool ok = true;
  for (const auto& r : rows) {
    char buf[5][32];
    std::snprintf(buf[0], 32, "%.4f", r.rates.p_pass);
    std::snprintf(buf[1], 32, "%.4f", r.rates.p_fail_error);
    std::snprintf(buf[2], 32, "%.4f", r.rates.p_skip);
    std::snprintf(buf[3], 32, "%.6f", r.analytic);
    std::snprintf(buf[4], 32, "%.6f", r.simulated);
    cells.push_back({buf[0], buf[1], buf[2], std::to_string(r.n), buf[3], buf[4], r.within_tolerance ? "ok" : "FAIL"});
    ok = ok && r.within_tolerance;
  }
  OutputSink sink(g.output, out);
  emit_table(sink.get(), g, {"p_pass", "p_fail_error", "p_skip", "n", "analytic", "monte_carlo", "status"}, cells);
  return ok ? kExitOk : kExitAborted;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"flakelab: detect, classify and budget flaky tests from rerun campaigns", "flakelab"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every randomized operation")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "table"}))->capture_default_str();
  app.add_option("-o,--output", g.output, "Write the primary output to this file");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Execute a rerun campaign and write the verdict archive");
  run->add_option("config", run_args.config, "Campaign config file")->required();
  run->add_option("--archive", run_args.archive, "Verdict archive to write")->capture_default_str();
  run->add_flag("--isolate", run_args.isolate, "Rerun order-dependent tests in isolation afterwards");
  run->add_option("--isolation-out", run_args.isolation_out, "Isolation verdicts file (default <archive>.isolation.csv)");

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand("classify", "Label every test of an archive with its root cause");
  classify->add_option("archive", classify_args.archive)->required();
  classify->add_option("--isolation", classify_args.isolation, "Isolation verdicts file");
  classify->add_option("--traces", classify_args.traces, "Directory of *.trace files");
  classify->add_option("--sources", classify_args.sources, "Root directory of test sources");
  classify->add_option("--keywords", classify_args.keywords, "Keyword table (category,keyword CSV)");

  EstimateArgs estimate_args;
  auto* estimate = app.add_subcommand("estimate", "Per-test rerun budgets and discovery curves");
  estimate->add_option("archive", estimate_args.archive)->required();
  estimate->add_option("--confidence", estimate_args.confidences, "Confidence levels (default 0.50 0.95)");
  estimate->add_option("--curve", estimate_args.curve, "Write the cumulative discovery curve CSV here");
  estimate->add_option("--order", estimate_args.order, "Runs to estimate from")
      ->check(CLI::IsMember({"auto", "same", "shuffled", "all"}))
      ->capture_default_str();
  estimate->add_option("--subset", estimate_args.subset, "Tests to include")
      ->check(CLI::IsMember({"all", "flaky", "od", "nod"}))
      ->capture_default_str();
  estimate->add_option("--isolation", estimate_args.isolation, "Isolation verdicts file");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Root-cause and per-group flakiness tables");
  report->add_option("archives", report_args.archives, "One archive per project")->required();
  report->add_option("--group-by", report_args.group_by, "Tag key to group projects by");
  report->add_option("--meta", report_args.meta, "Project tags (project_id,key,value CSV)");
  report->add_option("--isolation", report_args.isolation, "Isolation verdicts file");

  std::vector<std::string> sample_archives;
  std::size_t sample_k = 0;
  auto* sample = app.add_subcommand("sample", "Random-stratified sample of non-order-dependent flaky tests");
  sample->add_option("archives", sample_archives, "One archive per project")->required();
  sample->add_option("-k", sample_k, "Number of projects to sample")->required();

  std::size_t oracle_trials = 100000;
  double oracle_tolerance = 0.01;
  auto* oracle = app.add_subcommand("oracle", "Check the unveil formula against Monte-Carlo simulation");
  oracle->add_option("--trials", oracle_trials)->check(CLI::PositiveNumber)->capture_default_str();
  oracle->add_option("--tolerance", oracle_tolerance)->capture_default_str();

  // CLI11 takes the arguments reversed and without the program name.
  std::vector<std::string> reversed;
  for (std::size_t i = args.size(); i-- > 1;) reversed.push_back(args[i]);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_args, err);
    if (classify->parsed()) return cmd_classify(classify_args, g, out);
    if (estimate->parsed()) return cmd_estimate(estimate_args, g, out, err);
    if (report->parsed()) return cmd_report(report_args, g, out);
    if (sample->parsed()) return cmd_sample(sample_archives, sample_k, g, out);
    if (oracle->parsed()) return cmd_oracle(oracle_trials, oracle_tolerance, g, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::WorkdirMissing:
      case ErrorCode::IoError:
        return run->parsed() ? kExitAborted : kExitUsage;
      default:
        return kExitUsage;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAborted;
  }
  return kExitUsage;
}

}  // namespace flakelab
