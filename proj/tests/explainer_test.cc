#include <cmath>

#include <gtest/gtest.h>

#include "xgr/bundle.h"
#include "xgr/error.h"
#include "xgr/explainer.h"

namespace xgr {
namespace {

const std::filesystem::path kFixtures = XGR_FIXTURES_DIR;

// Hand-built trace: 2 goals, 3 observations.
PosteriorTrace TwoGoalTrace() {
  PosteriorTrace t;
  t.priors = {0.5, 0.5};
  t.optimal_cost = {Cost(3), Cost(3)};
  const std::vector<std::vector<double>> p = {{0.5, 0.5}, {0.6, 0.4}, {0.8, 0.2}, {0.7, 0.3}};
  for (std::size_t i = 0; i < p.size(); ++i) {
    StepPosterior s;
    s.step = i;
    s.probabilities = p[i];
    s.partition = Partition(p[i]);
    t.steps.push_back(s);
  }
  return t;
}

class FigureOne : public ::testing::Test {
 protected:
  void SetUp() override {
    bundle_ = LoadBundle(kFixtures / "grid" / "fig1-grid");
    planner_ = std::make_unique<Planner>(bundle_.heuristics.Get(bundle_.heuristics.preferred()));
    trace_ = Recognize(bundle_, *planner_);
    explanan_ = CompleteExplanan(trace_);
  }
  ScenarioBundle bundle_;
  std::unique_ptr<Planner> planner_;
  PosteriorTrace trace_;
  Explanan explanan_;
};

TEST(LogBaseTest, ParseAndLog) {
  EXPECT_DOUBLE_EQ(LogBase::Parse("2").Log(8.0), 3.0);
  EXPECT_DOUBLE_EQ(LogBase::Parse("10").Log(100.0), 2.0);
  EXPECT_DOUBLE_EQ(LogBase::Parse("e").Log(std::exp(1.5)), 1.5);
  EXPECT_EQ(LogBase::Parse("e").ToString(), "e");
  EXPECT_THROW(LogBase::Parse("7"), InvalidArgumentError);
}

TEST(WoeTest, LogRatioAndAntisymmetry) {
  const auto t = TwoGoalTrace();
  EXPECT_NEAR(Woe(t, 0, 1, 2), std::log(4.0), 1e-12);
  EXPECT_NEAR(Woe(t, 1, 0, 2), -std::log(4.0), 1e-12);
  EXPECT_NEAR(Woe(t, 0, 1, 2, LogBase::Parse("2")), 2.0, 1e-12);
  EXPECT_NEAR(WoeWithPriors(t, std::vector<double>{0.8, 0.2}, 0, 1, 2), 0.0, 1e-12);
  EXPECT_THROW(WoeWithPriors(t, std::vector<double>{1.0, 0.0}, 0, 1, 2), InvalidArgumentError);
}

TEST(ExplananTest, OneEntryPerStepAndPair) {
  const auto e = CompleteExplanan(TwoGoalTrace());
  ASSERT_EQ(e.entries.size(), 3u);
  EXPECT_EQ(e.ForPair(0, 1).size(), 3u);
  EXPECT_TRUE(e.ForPredicted(1).empty());
  const auto om = ObservationalMarkers(e, 0);
  EXPECT_EQ(om.steps, std::vector<std::size_t>{2});
  const auto cm = CounterfactualMarkers(e, 1);
  EXPECT_EQ(cm.steps, std::vector<std::size_t>{1});
  EXPECT_THROW(ObservationalMarkers(e, 1), InvalidArgumentError);
}

TEST(ExplananTest, NoEntriesWhenAllGoalsTie) {
  PosteriorTrace t = TwoGoalTrace();
  for (auto& s : t.steps) {
    s.probabilities = {0.5, 0.5};
    s.partition = Partition(s.probabilities);
  }
  EXPECT_TRUE(CompleteExplanan(t).empty());
}

TEST_F(FigureOne, WoeValuesAtLateObservations) {
  EXPECT_NEAR(Woe(trace_, 1, 0, 5), std::log(4.0 / 3.0), 1e-9);
  EXPECT_NEAR(Woe(trace_, 1, 0, 6), std::log(5.0 / 3.0), 1e-9);
  EXPECT_NEAR(Woe(trace_, 1, 0, 7), std::log(2.0), 1e-9);
  EXPECT_NEAR(Woe(trace_, 1, 0, 8), std::log(2.0), 1e-9);
  EXPECT_NEAR(Woe(trace_, 1, 2, 8), std::log(1.25), 1e-9);
  EXPECT_LT(Woe(trace_, 2, 1, 8), 0.0);
  EXPECT_GT(Woe(trace_, 2, 0, 8), 0.0);
}

TEST_F(FigureOne, WhyG2HasTiedMarkers) {
  const auto why = ExplainWhy(bundle_, trace_, explanan_, 1);
  ASSERT_EQ(why.markers.size(), 2u);
  EXPECT_EQ(why.markers[0].step, 7u);
  EXPECT_EQ(why.markers[1].step, 8u);
  EXPECT_EQ(why.text,
            "Because the agent has moved right from cell 25 to cell 26 and moved up from cell 26 "
            "to cell 17.");
  EXPECT_THROW(ExplainWhy(bundle_, trace_, explanan_, 0), QuestionNotApplicableError);
}

TEST_F(FigureOne, WhyNotG1AndG3) {
  const auto g1 = ExplainWhyNot(bundle_, trace_, explanan_, 0, *planner_);
  ASSERT_EQ(g1.markers.size(), 1u);
  EXPECT_EQ(g1.markers[0].step, 5u);
  ASSERT_EQ(g1.counterfactuals.size(), 1u);
  EXPECT_EQ(g1.counterfactuals[0].status, CounterfactualStatus::kFound);
  EXPECT_EQ(bundle_.domain->action(*g1.counterfactuals[0].action).name, "move_up_23_14");
  EXPECT_EQ(g1.counterfactuals[0].source, bundle_.StateAfter(4));
  EXPECT_EQ(g1.text,
            "Because the agent moved right from cell 23 to cell 24, it would have moved up from "
            "cell 23 to cell 14 if the goal was g1.");

  const auto g3 = ExplainWhyNot(bundle_, trace_, explanan_, 2, *planner_);
  ASSERT_EQ(g3.markers.size(), 1u);
  EXPECT_EQ(g3.markers[0].step, 8u);
  EXPECT_EQ(bundle_.domain->action(*g3.counterfactuals[0].action).name, "move_right_26_27");
  EXPECT_THROW(ExplainWhyNot(bundle_, trace_, explanan_, 1, *planner_),
               QuestionNotApplicableError);
}

TEST_F(FigureOne, CounterfactualEdgeCases) {
  GridMap map = std::get<GridMap>(*bundle_.map);
  for (int n : {3, 5, 13}) map.board.walls[n] = true;  // seal off cell 5
  auto walled = CompileGrid(map);
  walled.observations = ReplayObservations(*walled.domain, walled.initial,
                                           {"move_right_19_20"});
  Planner planner;
  const auto cf = FindCounterfactualAction(walled, planner, 0, 1);
  EXPECT_EQ(cf.status, CounterfactualStatus::kUnreachable);
  EXPECT_FALSE(cf.action.has_value());
  EXPECT_EQ(cf.source, walled.initial);
}

TEST(CounterfactualTest, GoalHeldBeforeMarker) {
  GridMap map;
  map.board = {1, 3, {false, false, false}};
  map.agent = 0;
  map.goals = {0, 2};
  auto bundle = CompileGrid(map);
  bundle.observations = ReplayObservations(*bundle.domain, bundle.initial, {"move_right_1_2"});
  Planner planner;
  const auto cf = FindCounterfactualAction(bundle, planner, 0, 1);
  EXPECT_EQ(cf.status, CounterfactualStatus::kAlreadySatisfied);
  ASSERT_TRUE(cf.plan.has_value());
  EXPECT_TRUE(cf.plan->steps.empty());
}

TEST_F(FigureOne, RenderingFallsBackForUnknownActions) {
  auto why = ExplainWhy(bundle_, trace_, explanan_, 1);
  EXPECT_NE(RenderText(why, *bundle_.domain, Vocabulary{}).find("performed move_up_26_17"),
            std::string::npos);
  const auto doc = ToJson(why, *bundle_.domain);
  EXPECT_EQ(doc["question"], "why");
  EXPECT_EQ(doc["goal"], "g2");
  EXPECT_EQ(doc["markers"].size(), 2u);
  EXPECT_EQ(doc["config"]["log_base"], "e");
}

TEST(ExplainTest, SingleGoalHasNoContrastiveEvidence) {
  GridMap map;
  map.board = {1, 3, {false, false, false}};
  map.agent = 0;
  map.goals = {2};
  auto bundle = CompileGrid(map);
  bundle.observations = ReplayObservations(*bundle.domain, bundle.initial, {"move_right_1_2"});
  Planner planner;
  const auto trace = Recognize(bundle, planner);
  const auto explanan = CompleteExplanan(trace);
  EXPECT_TRUE(explanan.empty());
  const auto why = ExplainWhy(bundle, trace, explanan, 0);
  EXPECT_TRUE(why.markers.empty());
  EXPECT_NE(why.text.find("No contrastive evidence"), std::string::npos) << why.text;
}

TEST(ExplainTest, UnreachableCounterfactualGoalText) {
  GridMap map;
  map.board = {1, 5, {false, false, false, true, false}};
  map.agent = 1;
  map.goals = {0, 4};
  auto bundle = CompileGrid(map);
  bundle.observations = ReplayObservations(*bundle.domain, bundle.initial, {"move_left_2_1"});
  Planner planner;
  const auto trace = Recognize(bundle, planner);
  const auto explanan = CompleteExplanan(trace);
  const auto why_not = ExplainWhyNot(bundle, trace, explanan, 1, planner);
  ASSERT_EQ(why_not.counterfactuals.size(), 1u);
  EXPECT_EQ(why_not.counterfactuals[0].status, CounterfactualStatus::kUnreachable);
  EXPECT_NE(why_not.text.find("cannot be achieved"), std::string::npos) << why_not.text;
}

}  // namespace
}  // namespace xgr
