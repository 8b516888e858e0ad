#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "flakelab/classifier.hpp"
#include "flakelab/classify_io.hpp"
#include "flakelab/error.hpp"
#include "flakelab/keywords.hpp"
#include "flakelab/sampling.hpp"
#include "support/synthetic.hpp"

using namespace flakelab;
using namespace flakelab::testing;

namespace {

RootCause classify_one(const CampaignBuilder& b, const TestId& test) {
  const auto m = b.build();
  return classify_root_cause(m.select(RunFilter::same_order()), m.select(RunFilter::shuffled()), test);
}

std::set<FlakinessCategory> categories(const std::vector<CategoryHint>& hints) {
  std::set<FlakinessCategory> out;
  for (const auto& h : hints) out.insert(h.category);
  return out;
}

}  // namespace

TEST(IsFlakyTest, Definition) {
  EXPECT_FALSE(is_flaky({.pass = 200}));
  EXPECT_TRUE(is_flaky({.pass = 199, .fail = 1}));
  EXPECT_TRUE(is_flaky({.pass = 1, .error = 1}));
  EXPECT_FALSE(is_flaky({.skip = 200}));
  EXPECT_FALSE(is_flaky({.fail = 3, .error = 3, .skip = 1}));
}

TEST(FlakyWithinIterationTest, Rules) {
  CampaignBuilder b;
  b.add_iterations(tid("t"), OrderKind::SameOrder, {"PPPP", "PFPP", "FFFF"});
  const auto m = b.build();
  EXPECT_FALSE(flaky_within_iteration(m, tid("t"), 0));
  EXPECT_TRUE(flaky_within_iteration(m, tid("t"), 1));
  EXPECT_FALSE(flaky_within_iteration(m, tid("t"), 2));
  try {
    flaky_within_iteration(m, tid("t"), 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownIteration);
  }
}

TEST(RootCauseTest, HomogeneousBulksAreInfrastructure) {
  CampaignBuilder b;
  std::vector<std::string> same(10, std::string(20, 'P'));
  same[4] = std::string(20, 'F');
  b.add_iterations(tid("t"), OrderKind::SameOrder, same);
  EXPECT_EQ(classify_one(b, tid("t")), RootCause::Infrastructure);
}

TEST(RootCauseTest, SameOrderMixIsNonOrderDependent) {
  CampaignBuilder b;
  b.add_iterations(tid("t"), OrderKind::SameOrder, {"PPPP", "PFPP"})
      .add_iterations(tid("t"), OrderKind::Shuffled, {"PPPP", "PPPP"});
  EXPECT_EQ(classify_one(b, tid("t")), RootCause::NonOrderDependent);
}

TEST(RootCauseTest, ShuffledOnlyMixIsOrderDependent) {
  CampaignBuilder b;
  b.add_iterations(tid("t"), OrderKind::SameOrder, {"PPPP", "PPPP"})
      .add_iterations(tid("t"), OrderKind::Shuffled, {"PFPF", "PPPP"});
  EXPECT_EQ(classify_one(b, tid("t")), RootCause::OrderDependent);
}

TEST(RootCauseTest, NotFlakyAndInsufficientData) {
  CampaignBuilder b;
  b.add_iterations(tid("stable"), OrderKind::SameOrder, {"PPPP"})
      .add_iterations(tid("skipped"), OrderKind::SameOrder, {"SSSS"})
      .add_iterations(tid("once"), OrderKind::SameOrder, {"PAAS"});
  EXPECT_EQ(classify_one(b, tid("stable")), RootCause::NotFlaky);
  EXPECT_THROW(classify_one(b, tid("skipped")), Error);
  EXPECT_THROW(classify_one(b, tid("once")), Error);
  const auto labels = classify_campaign(b.build());
  ASSERT_EQ(labels.size(), 3u);
  for (const auto& c : labels) {
    EXPECT_EQ(c.label, c.test == tid("stable") ? RootCause::NotFlaky : RootCause::InsufficientData);
  }
}

TEST(RootCauseTest, ZeroShuffledRuns) {
  CampaignBuilder b;
  b.add_iterations(tid("t"), OrderKind::SameOrder, {"PPFP"});
  EXPECT_EQ(classify_one(b, tid("t")), RootCause::NonOrderDependent);
}

TEST(OdKindTest, IsolationRules) {
  EXPECT_EQ(classify_od_kind(verdicts("PPPPPPPPPP")), OdKind::Victim);
  EXPECT_EQ(classify_od_kind(verdicts("FFFFFFFFFF")), OdKind::Brittle);
  EXPECT_EQ(classify_od_kind(verdicts("FEFE")), OdKind::Brittle);
  EXPECT_EQ(classify_od_kind(verdicts("AAAAAAAAAA")), OdKind::Undetermined);
  EXPECT_EQ(classify_od_kind(verdicts("PPPPPPPPPS")), OdKind::Undetermined);
  EXPECT_EQ(classify_od_kind(verdicts("PF")), OdKind::Undetermined);
  EXPECT_EQ(classify_od_kind(verdicts("")), OdKind::Undetermined);
}

// Invariants over random campaigns: one label per test, and each label's
// defining condition is directly checkable on the matrix.
TEST(RootCauseTest, LabelInvariantsProperty) {
  std::mt19937_64 rng(42);
  const std::string alphabet = "PPPPFES";
  for (int trial = 0; trial < 400; ++trial) {
    CampaignBuilder b;
    std::vector<std::string> same(3), shuf(3);
    const bool bulky = trial % 3 == 0;
    for (auto* block : {&same, &shuf}) {
      for (auto& it : *block) {
        if (bulky) {
          it = std::string(5, rng() % 2 ? 'P' : 'F');
        } else {
          for (int r = 0; r < 5; ++r) it += alphabet[rng() % alphabet.size()];
        }
      }
    }
    b.add_iterations(tid("t"), OrderKind::SameOrder, same).add_iterations(tid("t"), OrderKind::Shuffled, shuf);
    const auto m = b.build();
    const auto labels = classify_campaign(m);
    ASSERT_EQ(labels.size(), 1u);
    const auto label = labels[0].label;
    const bool flaky_all = is_flaky(verdict_counts(m, 0));
    const bool flaky_same = is_flaky(verdict_counts(m, 0, RunFilter::same_order()));
    bool any_iteration = false;
    for (auto id : m.iteration_ids()) any_iteration |= flaky_within_iteration(m, 0, id);

    switch (label) {
      case RootCause::Infrastructure:
        EXPECT_TRUE(flaky_all);
        EXPECT_FALSE(any_iteration);
        break;
      case RootCause::OrderDependent:
        EXPECT_FALSE(flaky_same);
        EXPECT_TRUE(flaky_all);
        break;
      case RootCause::NonOrderDependent:
        EXPECT_TRUE(flaky_same);
        EXPECT_TRUE(any_iteration);
        break;
      case RootCause::NotFlaky:
        EXPECT_FALSE(flaky_all);
        break;
      case RootCause::InsufficientData:
        break;
    }

    // Adding passing and failing runs never turns a flaky test back to NotFlaky.
    if (label != RootCause::NotFlaky && label != RootCause::InsufficientData) {
      CampaignBuilder more = b;
      more.add_iterations(tid("t"), OrderKind::SameOrder, {"PPPPP", "FFFFF", "SSSSS"}, 3);
      EXPECT_NE(classify_campaign(more.build())[0].label, RootCause::NotFlaky);
    }
  }
}

TEST(ClassifyCampaignTest, AttachesOdKindAndHints) {
  CampaignBuilder b;
  b.add_iterations(tid("victim"), OrderKind::SameOrder, {"PPPP"})
      .add_iterations(tid("victim"), OrderKind::Shuffled, {"PFFP"})
      .add_iterations(tid("unknown_od"), OrderKind::SameOrder, {"PPPP"})
      .add_iterations(tid("unknown_od"), OrderKind::Shuffled, {"PFFP"})
      .add_iterations(tid("coin"), OrderKind::SameOrder, {"PFFP"})
      .add_iterations(tid("coin"), OrderKind::Shuffled, {"PFFP"});
  ClassifyInputs inputs;
  inputs.isolation[tid("victim")] = verdicts("PPPPPPPPPP");
  inputs.traces[tid("coin")] = {"random.Random.random", "builtins.len"};
  const auto rows = classify_campaign(b.build(), inputs);
  std::map<std::string, Classification> by_name;
  for (const auto& c : rows) by_name[c.test.test_name] = c;
  EXPECT_EQ(by_name["victim"].od_kind, OdKind::Victim);
  EXPECT_EQ(by_name["unknown_od"].od_kind, OdKind::Undetermined);
  EXPECT_EQ(by_name["coin"].label, RootCause::NonOrderDependent);
  EXPECT_EQ(categories(by_name["coin"].hints), std::set<FlakinessCategory>{FlakinessCategory::Random});

  std::ostringstream out;
  write_classifications(out, rows);
  EXPECT_NE(out.str().find("tests/test_mod.py::coin,NonOrderDependent,,Random,random\n"), std::string::npos);
  EXPECT_NE(out.str().find("tests/test_mod.py::victim,OrderDependent,Victim,,\n"), std::string::npos);
}

// ------------------------------------------------------------------ keywords

TEST(KeywordTest, TokenBoundaryOnDottedSegments) {
  EXPECT_TRUE(matches_call("time.sleep", "time"));
  EXPECT_TRUE(matches_call("time.sleep", "sleep"));
  EXPECT_FALSE(matches_call("datetime_util.now", "time"));
  EXPECT_FALSE(matches_call("mytime.x", "time"));
  EXPECT_TRUE(matches_call("pathlib.Path.is_dir", "pathlib.Path.is_dir"));
  EXPECT_TRUE(matches_call("x.builtins.stat", "builtins.stat"));
  EXPECT_FALSE(matches_call("builtins.status", "builtins.stat"));
  EXPECT_FALSE(matches_call("threading.Thread.start", "thread"));
  EXPECT_TRUE(matches_call("threading.Thread.start", "threading"));
}

TEST(KeywordTest, SourceWordBoundary) {
  EXPECT_TRUE(matches_source("    time.sleep(0.1)\n", "time"));
  EXPECT_FALSE(matches_source("from datetime import x", "time"));
  EXPECT_TRUE(matches_source("def __hash__(self):", "__hash__"));
  EXPECT_FALSE(matches_source("random_name = 1", "random"));
}

TEST(KeywordTest, HintsExamples) {
  const std::vector<std::string> net = {"requests.api.get"};
  EXPECT_EQ(categories(keyword_hints(net, "")), std::set<FlakinessCategory>{FlakinessCategory::Network});
  EXPECT_TRUE(keyword_hints({}, "").empty());

  const std::vector<std::string> sleepy = {"time.sleep"};
  const auto hints = keyword_hints(sleepy, "");
  EXPECT_EQ(categories(hints),
            (std::set<FlakinessCategory>{FlakinessCategory::AsyncWait, FlakinessCategory::Time}));
  for (const auto& h : hints) {
    EXPECT_FALSE(h.matched_keywords.empty());
    EXPECT_TRUE(h.sources.contains(HintSource::Trace));
  }

  const auto from_source = keyword_hints({}, "s = set(); x in s; import threading\n");
  ASSERT_EQ(from_source.size(), 1u);
  EXPECT_EQ(from_source[0].category, FlakinessCategory::Concurrency);
  EXPECT_EQ(from_source[0].matched_keywords, std::set<std::string>{"threading"});
  EXPECT_EQ(from_source[0].sources, std::set<HintSource>{HintSource::TestSource});
}

TEST(KeywordTest, DefaultTableMatchesShippedFile) {
  const auto file = KeywordTable::load_file(std::string(FLAKELAB_SOURCE_DIR) + "/data/keywords.csv");
  const auto& defaults = KeywordTable::defaults();
  ASSERT_EQ(file.rules().size(), defaults.rules().size());
  for (std::size_t i = 0; i < file.rules().size(); ++i) {
    EXPECT_EQ(file.rules()[i].category, defaults.rules()[i].category);
    EXPECT_EQ(file.rules()[i].keyword, defaults.rules()[i].keyword);
  }
}

TEST(KeywordTest, CustomTableAndBadRows) {
  std::istringstream in("category,keyword\nNetwork,socket\n");
  const auto table = KeywordTable::load(in);
  const std::vector<std::string> calls = {"socket.socket.connect"};
  EXPECT_EQ(categories(keyword_hints(calls, "", table)), std::set<FlakinessCategory>{FlakinessCategory::Network});
  std::istringstream bad("category,keyword\nWeather,rain\n");
  EXPECT_THROW(KeywordTable::load(bad), Error);
}

// ------------------------------------------------------------------ sampling

TEST(StratifiedSampleTest, OnePerProjectAndDeterministic) {
  std::map<std::string, std::set<TestId>> pool;
  for (int p = 0; p < 279; ++p) {
    for (int t = 0; t <= p % 4; ++t) {
      pool["proj" + std::to_string(p)].insert(TestId{"p" + std::to_string(p) + ".py", "", "t" + std::to_string(t), ""});
    }
  }
  pool["empty"];
  const auto sample = stratified_sample(pool, 100, 7);
  EXPECT_EQ(sample.size(), 100u);
  std::set<std::string> projects;
  for (const auto& t : sample) projects.insert(t.suite_path);
  EXPECT_EQ(projects.size(), 100u);
  EXPECT_EQ(stratified_sample(pool, 100, 7), sample);
  EXPECT_NE(stratified_sample(pool, 100, 8), sample);
}

TEST(StratifiedSampleTest, AllProjectsAndErrors) {
  std::map<std::string, std::set<TestId>> pool = {{"a", {tid("x")}}, {"b", {tid("y")}}, {"c", {}}};
  auto all = stratified_sample(pool, 2, 1);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, (std::vector<TestId>{tid("x"), tid("y")}));
  try {
    stratified_sample(pool, 3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotEnoughProjects);
  }
}

// Each project is chosen with probability k/|projects|; loose frequency check.
TEST(StratifiedSampleTest, ProjectsChosenUniformly) {
  std::map<std::string, std::set<TestId>> pool;
  for (int p = 0; p < 10; ++p) pool["p" + std::to_string(p)].insert(tid("t" + std::to_string(p)));
  std::map<TestId, int> hits;
  const int trials = 20000;
  for (int s = 0; s < trials; ++s) {
    for (const auto& t : stratified_sample(pool, 3, static_cast<std::uint64_t>(s))) ++hits[t];
  }
  for (const auto& [t, n] : hits) EXPECT_NEAR(n / double(trials), 0.3, 0.02) << t.canonical();
}

// ------------------------------------------------------------------ io

TEST(ClassifyIoTest, IsolationRoundTrip) {
  std::map<TestId, std::vector<Verdict>> iso = {{tid("a"), verdicts("PPA")}, {tid("b[1]"), verdicts("FF")}};
  std::ostringstream out;
  write_isolation(out, iso);
  std::istringstream in(out.str());
  EXPECT_EQ(read_isolation(in), iso);
}
