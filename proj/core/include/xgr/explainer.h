#pragma once

#include <chrono>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "xgr/bundle.h"
#include "xgr/planner.h"
#include "xgr/recognizer.h"

namespace xgr {

// Logarithm base for weight of evidence. Natural log unless stated.
struct LogBase {
  double value = std::numbers::e;

  static LogBase Parse(std::string_view text);  // "e", "2", "10"
  std::string ToString() const;
  double Log(double x) const;
};

// woe(g/g' : o_i | O) = log P(g | O_i) / P(g' | O_i), on floored posteriors.
double Woe(const PosteriorTrace& trace, std::size_t goal, std::size_t other, std::size_t step,
           LogBase base = {});

// Weight of evidence relative to prior odds:
// log[P(g|O_i) / P(g'|O_i)] - log[prior(g) / prior(g')].
// Throws InvalidArgumentError for a zero prior.
double WoeWithPriors(const PosteriorTrace& trace, std::span<const double> priors,
                     std::size_t goal, std::size_t other, std::size_t step, LogBase base = {});

struct ExplananEntry {
  std::size_t goal;            // g, predicted at `step`
  std::size_t counterfactual;  // g', counterfactual at `step`
  double woe;
  std::size_t step;            // 1-based observation index
};

// Complete list of (g, g') -> <woe, o_i> entries across all observations.
struct Explanan {
  std::vector<ExplananEntry> entries;
  std::size_t num_observations = 0;
  LogBase log_base;

  bool empty() const { return entries.empty(); }
  std::vector<ExplananEntry> ForPair(std::size_t goal, std::size_t counterfactual) const;
  // Entries whose first element is `goal` (all counterfactual partners).
  std::vector<ExplananEntry> ForPredicted(std::size_t goal) const;
  // Entries whose second element is `counterfactual` (all predicted partners).
  std::vector<ExplananEntry> ForCounterfactual(std::size_t counterfactual) const;
};

// For every step i = 1..n and every g in G_p(i), g' in G_c(i), one entry.
// The list accumulates over all steps; partitions are the per-step ones.
Explanan CompleteExplanan(const PosteriorTrace& trace, LogBase base = {});

struct MarkerSet {
  std::vector<std::size_t> steps;  // ascending, all observations at the extremum
  double woe = 0.0;
};

// Observations attaining the highest WoE among entries (goal, *). Values within
// tie_epsilon of the maximum are ties. Throws InvalidArgumentError when the
// explanan has no entry for the goal.
MarkerSet ObservationalMarkers(const Explanan& explanan, std::size_t goal,
                               double tie_epsilon = 1e-9);

// Observations attaining the lowest WoE among entries (*, counterfactual).
MarkerSet CounterfactualMarkers(const Explanan& explanan, std::size_t counterfactual,
                                double tie_epsilon = 1e-9);

enum class CounterfactualStatus { kFound, kUnreachable, kAlreadySatisfied };

struct CounterfactualAction {
  std::size_t marker_step = 0;
  State source;  // state before the marker's action
  CounterfactualStatus status = CounterfactualStatus::kUnreachable;
  std::optional<ActionId> action;  // first action of `plan`
  std::optional<Plan> plan;
  std::chrono::nanoseconds planning_time{0};
};

// Plans from the state preceding observation `marker_step` to `goal` and
// returns the plan's first action. Budget exhaustion is rethrown.
CounterfactualAction FindCounterfactualAction(const ScenarioBundle& bundle, Planner& planner,
                                              std::size_t goal, std::size_t marker_step);

enum class Question { kWhy, kWhyNot };
std::string_view ToString(Question q);

struct Marker {
  std::size_t step;
  ActionId action;
  double woe;
};

struct Explanation {
  Question question = Question::kWhy;
  std::size_t goal = 0;
  std::vector<Marker> markers;
  std::vector<CounterfactualAction> counterfactuals;  // why-not: one per marker
  std::size_t num_observations = 0;
  std::string text;
  LogBase log_base;
  double probability_floor = 0.0;
  double tie_epsilon = 0.0;
};

// "Why is `goal` predicted?" Requires goal in G_p(n); otherwise throws
// QuestionNotApplicableError.
Explanation ExplainWhy(const ScenarioBundle& bundle, const PosteriorTrace& trace,
                       const Explanan& explanan, std::size_t goal);

// "Why not `goal`?" Requires goal in G_c(n). Computes one counterfactual
// action per counterfactual marker.
Explanation ExplainWhyNot(const ScenarioBundle& bundle, const PosteriorTrace& trace,
                          const Explanan& explanan, std::size_t goal, Planner& planner);

// Deterministic natural-language rendering; unknown actions fall back to
// "performed <action>".
std::string RenderText(const Explanation& explanation, const Domain& domain,
                       const Vocabulary& vocab);

// {question, goal, markers: [{index, action, woe}],
//  counterfactuals: [{from_state, action, plan, status}], text,
//  config: {log_base, floor, tie_epsilon}}
nlohmann::json ToJson(const Explanation& explanation, const Domain& domain);

}  // namespace xgr
