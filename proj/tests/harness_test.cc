#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "xgr/error.h"
#include "xgr/harness.h"

namespace xgr {
namespace {

namespace fs = std::filesystem;
const fs::path kFixtures = XGR_FIXTURES_DIR;

Explanan MakeExplanan(const std::vector<ExplananEntry>& entries, std::size_t n) {
  Explanan e;
  e.entries = entries;
  e.num_observations = n;
  return e;
}

TEST(RankTest, DenseRanksWithTies) {
  // goal 0 vs 1; steps 1..4
  const auto e = MakeExplanan({{0, 1, 0.2, 1}, {0, 1, 0.7, 2}, {0, 1, 0.7, 3}, {0, 1, 0.1, 4}}, 5);
  EXPECT_EQ(RankObservation(e, Question::kWhy, 0, 2), 1u);
  EXPECT_EQ(RankObservation(e, Question::kWhy, 0, 3), 1u);
  EXPECT_EQ(RankObservation(e, Question::kWhy, 0, 1), 2u);
  EXPECT_EQ(RankObservation(e, Question::kWhy, 0, 4), 3u);
  EXPECT_EQ(RankObservation(e, Question::kWhy, 0, 5), 4u);  // no entry
  // why-not ranks from the lowest
  EXPECT_EQ(RankObservation(e, Question::kWhyNot, 1, 4), 1u);
  EXPECT_EQ(RankObservation(e, Question::kWhyNot, 1, 2), 3u);
}

TEST(MaeTest, Values) {
  const std::vector<std::size_t> gt{1, 2};
  EXPECT_DOUBLE_EQ(Mae(gt, std::vector<std::size_t>{1, 2}, 8), 0.0);
  EXPECT_DOUBLE_EQ(Mae(gt, std::vector<std::size_t>{1, 1}, 8), 0.125);
  EXPECT_DOUBLE_EQ(Mae(gt, std::vector<std::size_t>{3, 5}, 10), 0.5);
  EXPECT_THROW(Mae({}, {}, 3), EvaluationError);
  EXPECT_THROW(Mae(gt, std::vector<std::size_t>{1}, 3), EvaluationError);
  EXPECT_THROW(Mae(gt, gt, 0), EvaluationError);
  EXPECT_EQ(IdealRanks(3), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(CfPercentTest, Values) {
  EXPECT_DOUBLE_EQ(CfPercent(3, 0), 100.0);
  EXPECT_NEAR(CfPercent(2, 1), 66.666666, 1e-5);
  EXPECT_DOUBLE_EQ(CfPercent(1, 1), 50.0);
  EXPECT_THROW(CfPercent(0, 0), EvaluationError);
}

TEST(SummarizeTest, SampleStandardDeviation) {
  const auto one = Summarize(std::vector<double>{0.4});
  EXPECT_DOUBLE_EQ(one.mean, 0.4);
  EXPECT_DOUBLE_EQ(one.sd, 0.0);
  const auto many = Summarize(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(many.mean, 2.5);
  EXPECT_NEAR(many.sd, 1.2909944, 1e-6);
  EXPECT_EQ(many.count, 4u);
}

TEST(RunScenarioTest, RunningExample) {
  const auto bundle = LoadBundle(kFixtures / "grid" / "fig1-grid");
  const auto run = RunScenario(bundle);
  ASSERT_EQ(run.why.size(), 1u);
  ASSERT_EQ(run.why_not.size(), 2u);
  EXPECT_EQ(run.why[0].goal, 1u);
  EXPECT_GT(run.timing.gr.count(), 0);
  EXPECT_LE(run.timing.counterfactual_planning, run.timing.xgr);

  const auto eval = EvaluateScenario(bundle, run);
  EXPECT_DOUBLE_EQ(*eval.mae_why, 0.125);
  EXPECT_DOUBLE_EQ(*eval.mae_why_not, 0.0);
  EXPECT_DOUBLE_EQ(*eval.cf_percent, 100.0);

  const auto doc = RunToJson(run, bundle);
  EXPECT_FALSE(doc.contains("timing"));
  EXPECT_TRUE(RunToJson(run, bundle, true).contains("timing"));
  EXPECT_EQ(RunToJson(RunScenario(bundle), bundle).dump(), doc.dump());
  EXPECT_NE(RunToText(run, bundle).find("why g2"), std::string::npos);
}

TEST(RunScenarioTest, HeuristicChoiceDoesNotChangeExplanations) {
  const auto bundle = LoadBundle(kFixtures / "sokoban" / "lane");
  RunOptions blind;
  blind.heuristic = "blind";
  EXPECT_EQ(RunToJson(RunScenario(bundle), bundle).dump(),
            RunToJson(RunScenario(bundle, blind), bundle).dump());
}

TEST(RenderBoardTest, MarksTrajectory) {
  const auto bundle = LoadBundle(kFixtures / "grid" / "fig1-grid");
  const auto run = RunScenario(bundle);
  const auto board = RenderBoard(bundle, &run);
  EXPECT_NE(board.find('I'), std::string::npos);
  EXPECT_NE(board.find('@'), std::string::npos);
  EXPECT_NE(board.find('>'), std::string::npos);
  EXPECT_NE(board.find("g1 at o5: moved up from cell 23 to cell 14"), std::string::npos);
  auto plain = bundle;
  plain.map.reset();
  EXPECT_THROW(RenderBoard(plain), InvalidArgumentError);
}

TEST(DiscoverTest, DomainAndBundleDirectories) {
  const auto grid = DiscoverBundles(kFixtures / "grid");
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[0].first, "grid");
  EXPECT_EQ(grid[0].second.filename(), "corridor");
  const auto single = DiscoverBundles(kFixtures / "sokoban" / "pair");
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].first, "sokoban");
}

TEST(EvaluateTest, SingleScenarioDomainHasZeroSd) {
  const std::vector<fs::path> paths{kFixtures / "grid" / "fig1-grid"};
  const auto report = Evaluate(paths);
  ASSERT_EQ(report.domains.size(), 1u);
  EXPECT_DOUBLE_EQ(report.domains[0].mae_why.sd, 0.0);
  EXPECT_EQ(report.domains[0].mae_why.count, 1u);
  const auto csv = ToCsv(report);
  EXPECT_EQ(csv.rfind("# ", 0), 0u);
}

TEST(EvaluateTest, BrokenBundleIsRecordedAsFailure) {
  const fs::path tmp = fs::temp_directory_path() / ("xgr-eval-" + std::to_string(::getpid()));
  fs::remove_all(tmp);
  fs::create_directories(tmp / "batch");
  fs::copy(kFixtures / "grid" / "fig1-grid", tmp / "batch" / "good");
  fs::copy(kFixtures / "grid" / "fig1-grid", tmp / "batch" / "broken");
  std::ofstream(tmp / "batch" / "broken" / "hyps.dat") << "at_cell_999\n";
  const std::vector<fs::path> paths{tmp / "batch"};
  const auto report = Evaluate(paths);
  EXPECT_EQ(report.scenarios.size(), 1u);
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_NE(report.failures[0].find("broken"), std::string::npos) << report.failures[0];
  fs::remove_all(tmp);
}

TEST(BenchTest, ReportShape) {
  const std::vector<fs::path> paths{kFixtures / "grid" / "fig1-grid"};
  const auto report = Bench(paths, 2);
  EXPECT_EQ(report.repetitions, 2u);
  ASSERT_EQ(report.scenarios.size(), 1u);
  EXPECT_FALSE(report.scenarios[0].failed);
  EXPECT_TRUE(report.scenarios[0].deterministic);
  ASSERT_EQ(report.domains.size(), 1u);
  const auto csv = ToCsv(report);
  EXPECT_NE(csv.find("domain,scenario,total_s,xgr_s,increase_pct,cf_planning_pct"),
            std::string::npos);
  EXPECT_NE(csv.find("grid,mean,"), std::string::npos);
  EXPECT_EQ(ToJson(report)["repetitions"], 2);
}

}  // namespace
}  // namespace xgr
