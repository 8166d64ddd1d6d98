#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xgr/bundle.h"
#include "xgr/explainer.h"
#include "xgr/planner.h"
#include "xgr/recognizer.h"

namespace xgr {

struct RunOptions {
  RecognizerOptions recognizer;
  LogBase log_base;
  // Empty selects the bundle's preferred heuristic.
  std::string heuristic;
  SearchOptions search;
  std::optional<std::vector<double>> priors;
};

// Wall-clock split of one scenario run. GR covers recognition (all optimal
// and suffix plans, cold cache). XGR covers the explanan, marker selection,
// counterfactual planning and rendering; counterfactual planning uses its
// own cold cache so none of its work is absorbed by GR.
struct ScenarioTiming {
  std::chrono::nanoseconds gr{0};
  std::chrono::nanoseconds xgr{0};
  std::chrono::nanoseconds counterfactual_planning{0};

  std::chrono::nanoseconds total() const { return gr + xgr; }
};

struct ScenarioRun {
  PosteriorTrace trace;
  Explanan explanan;
  std::vector<Explanation> why;      // one per g in G_p(n)
  std::vector<Explanation> why_not;  // one per g' in G_c(n)
  ScenarioTiming timing;
};

ScenarioRun RunScenario(const ScenarioBundle& bundle, const RunOptions& options = {});

nlohmann::json TraceToJson(const PosteriorTrace& trace);
// Trace, explanan and explanations (timing excluded unless requested).
nlohmann::json RunToJson(const ScenarioRun& run, const ScenarioBundle& bundle,
                         bool include_timing = false);
std::string RunToText(const ScenarioRun& run, const ScenarioBundle& bundle);
std::string TraceToText(const PosteriorTrace& trace);

// ASCII board with the observed trajectory as arrows ('^', 'v', '<', '>'),
// the start cell 'I', the current agent '@', boxes '$' and goal markers.
// Requires bundle.map. Counterfactual actions are listed under the board.
std::string RenderBoard(const ScenarioBundle& bundle, const ScenarioRun* run = nullptr);

// --- Evaluation against annotations ---

// Dense rank of observation `step` in the explanan list for the question:
// why ranks the goal's entries (goal, *) from the highest WoE, why-not ranks
// entries (*, goal) from the lowest. An observation's value is its most
// extreme entry in that direction; ties (within tie_epsilon) share a rank.
// Observations without entries rank after all ranked observations.
std::size_t RankObservation(const Explanan& explanan, Question question, std::size_t goal,
                            std::size_t step, double tie_epsilon = 1e-9);

// Ground-truth ranks for k annotated observations: 1..k in annotation order.
std::vector<std::size_t> IdealRanks(std::size_t k);

// sum |gt - model| / n. Throws EvaluationError on empty or mismatched lists
// or n == 0.
double Mae(std::span<const std::size_t> ground_truth, std::span<const std::size_t> model,
           std::size_t n);

// agreements / (agreements + disagreements) * 100. Throws EvaluationError
// when both are zero.
double CfPercent(std::size_t agreements, std::size_t disagreements);

struct ScenarioEvaluation {
  std::string domain;
  std::string scenario;
  std::optional<double> mae_why;
  std::optional<double> mae_why_not;
  std::optional<double> cf_percent;
  std::size_t cf_agreements = 0;
  std::size_t cf_disagreements = 0;
};

// Requires bundle.annotations.
ScenarioEvaluation EvaluateScenario(const ScenarioBundle& bundle, const ScenarioRun& run);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single value
  std::size_t count = 0;
};
Summary Summarize(std::span<const double> values);

struct DomainEvaluation {
  std::string domain;
  Summary mae_why;
  Summary mae_why_not;
  Summary cf_percent;
};

struct EvalReport {
  std::vector<ScenarioEvaluation> scenarios;
  std::vector<DomainEvaluation> domains;
  std::vector<std::string> failures;
};

// Scenario bundles below each path (see DiscoverBundles); bundles without
// annotations are skipped.
EvalReport Evaluate(std::span<const std::filesystem::path> paths, const RunOptions& options = {});
nlohmann::json ToJson(const EvalReport& report);
std::string ToText(const EvalReport& report);
std::string ToCsv(const EvalReport& report);

// --- Timing benchmark ---

struct ScenarioTimingRow {
  std::string domain;
  std::string scenario;
  bool failed = false;
  std::string error;
  // Medians over repetitions, seconds.
  double total_s = 0.0;
  double gr_s = 0.0;
  double xgr_s = 0.0;
  double cf_s = 0.0;
  double increase_pct = 0.0;     // xgr / gr * 100
  double cf_planning_pct = 0.0;  // cf / xgr * 100
  bool deterministic = true;     // explanations identical across repetitions
};

struct DomainTimingRow {
  std::string domain;
  std::size_t problems = 0;
  Summary total_s;
  Summary xgr_s;
  Summary gr_s;
  double increase_pct = 0.0;     // mean xgr / mean gr * 100
  double cf_planning_pct = 0.0;  // sum cf / sum xgr * 100
};

struct TimingReport {
  std::size_t repetitions = 0;
  std::vector<ScenarioTimingRow> scenarios;
  std::vector<DomainTimingRow> domains;
};

// A path is either a bundle directory (domain = its parent's name) or a
// directory of bundles (domain = its own name). Sorted by name.
std::vector<std::pair<std::string, std::filesystem::path>> DiscoverBundles(
    const std::filesystem::path& path);

TimingReport Bench(std::span<const std::filesystem::path> paths, std::size_t repetitions,
                   const RunOptions& options = {});

// "# ..." header lines, then domain,scenario,total_s,xgr_s,increase_pct,
// cf_planning_pct. Domain aggregates use scenario names "mean" and "sd".
std::string ToCsv(const TimingReport& report);
nlohmann::json ToJson(const TimingReport& report);
std::string ToText(const TimingReport& report);

}  // namespace xgr
