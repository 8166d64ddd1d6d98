#include "xgr/explainer.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xgr/error.h"

namespace xgr {

LogBase LogBase::Parse(std::string_view text) {
  if (text == "e") return {std::numbers::e};
  if (text == "2") return {2.0};
  if (text == "10") return {10.0};
  throw InvalidArgumentError("log base must be one of e, 2, 10; got '" + std::string(text) + "'");
}

std::string LogBase::ToString() const {
  if (value == std::numbers::e) return "e";
  std::ostringstream out;
  out << value;
  return out.str();
}

double LogBase::Log(double x) const {
  if (value == std::numbers::e) return std::log(x);
  if (value == 2.0) return std::log2(x);
  if (value == 10.0) return std::log10(x);
  return std::log(x) / std::log(value);
}

double Woe(const PosteriorTrace& trace, std::size_t goal, std::size_t other, std::size_t step,
           LogBase base) {
  const double p = trace.Probability(goal, step);
  const double q = trace.Probability(other, step);
  return base.Log(p / q);
}

double WoeWithPriors(const PosteriorTrace& trace, std::span<const double> priors,
                     std::size_t goal, std::size_t other, std::size_t step, LogBase base) {
  if (goal >= priors.size() || other >= priors.size()) {
    throw InvalidArgumentError("priors do not cover the requested goals");
  }
  if (priors[goal] <= 0.0 || priors[other] <= 0.0) {
    throw InvalidArgumentError("weight of evidence with priors needs non-zero priors");
  }
  return Woe(trace, goal, other, step, base) - base.Log(priors[goal] / priors[other]);
}

std::vector<ExplananEntry> Explanan::ForPair(std::size_t goal, std::size_t counterfactual) const {
  std::vector<ExplananEntry> out;
  for (const auto& e : entries) {
    if (e.goal == goal && e.counterfactual == counterfactual) out.push_back(e);
  }
  return out;
}

std::vector<ExplananEntry> Explanan::ForPredicted(std::size_t goal) const {
  std::vector<ExplananEntry> out;
  for (const auto& e : entries) {
    if (e.goal == goal) out.push_back(e);
  }
  return out;
}

std::vector<ExplananEntry> Explanan::ForCounterfactual(std::size_t counterfactual) const {
  std::vector<ExplananEntry> out;
  for (const auto& e : entries) {
    if (e.counterfactual == counterfactual) out.push_back(e);
  }
  return out;
}

Explanan CompleteExplanan(const PosteriorTrace& trace, LogBase base) {
  Explanan explanan;
  explanan.num_observations = trace.num_observations();
  explanan.log_base = base;
  for (std::size_t step = 1; step <= trace.num_observations(); ++step) {
    const GoalPartition& partition = trace.at(step).partition;
    for (std::size_t g : partition.predicted) {
      for (std::size_t other : partition.counterfactual) {
        explanan.entries.push_back({g, other, Woe(trace, g, other, step, base), step});
      }
    }
  }
  return explanan;
}

namespace {

MarkerSet Extremal(const std::vector<ExplananEntry>& entries, bool highest, double tie_epsilon) {
  MarkerSet markers;
  markers.woe = entries.front().woe;
  for (const auto& e : entries) {
    markers.woe = highest ? std::max(markers.woe, e.woe) : std::min(markers.woe, e.woe);
  }
  for (const auto& e : entries) {
    if (std::abs(e.woe - markers.woe) <= tie_epsilon) markers.steps.push_back(e.step);
  }
  std::sort(markers.steps.begin(), markers.steps.end());
  markers.steps.erase(std::unique(markers.steps.begin(), markers.steps.end()), markers.steps.end());
  return markers;
}

}  // namespace

MarkerSet ObservationalMarkers(const Explanan& explanan, std::size_t goal, double tie_epsilon) {
  const auto entries = explanan.ForPredicted(goal);
  if (entries.empty()) {
    throw InvalidArgumentError("explanan has no entries for predicted goal " + GoalLabel(goal));
  }
  return Extremal(entries, /*highest=*/true, tie_epsilon);
}

MarkerSet CounterfactualMarkers(const Explanan& explanan, std::size_t counterfactual,
                                double tie_epsilon) {
  const auto entries = explanan.ForCounterfactual(counterfactual);
  if (entries.empty()) {
    throw InvalidArgumentError("explanan has no entries for counterfactual goal " +
                               GoalLabel(counterfactual));
  }
  return Extremal(entries, /*highest=*/false, tie_epsilon);
}

CounterfactualAction FindCounterfactualAction(const ScenarioBundle& bundle, Planner& planner,
                                              std::size_t goal, std::size_t marker_step) {
  if (marker_step < 1 || marker_step > bundle.num_observations()) {
    throw InvalidArgumentError("marker observation " + std::to_string(marker_step) +
                               " out of range");
  }
  CounterfactualAction result;
  result.marker_step = marker_step;
  result.source = bundle.StateAfter(marker_step - 1);
  const auto start = std::chrono::steady_clock::now();
  const SearchResult search = planner.Solve(bundle.TaskFrom(result.source, goal));
  result.planning_time = std::chrono::steady_clock::now() - start;
  switch (search.status) {
    case SearchStatus::kBudgetExhausted:
      throw BudgetExhaustedError("planner budget exhausted planning the counterfactual for " +
                                 GoalLabel(goal) + " at observation " +
                                 std::to_string(marker_step));
    case SearchStatus::kUnsolvable:
      result.status = CounterfactualStatus::kUnreachable;
      break;
    case SearchStatus::kSolved:
      result.plan = search.plan;
      if (search.plan->steps.empty()) {
        result.status = CounterfactualStatus::kAlreadySatisfied;
      } else {
        result.status = CounterfactualStatus::kFound;
        result.action = search.plan->steps.front();
      }
      break;
  }
  return result;
}

std::string_view ToString(Question q) { return q == Question::kWhy ? "why" : "why-not"; }

namespace {

Explanation Skeleton(const PosteriorTrace& trace, const Explanan& explanan, Question question,
                     std::size_t goal) {
  Explanation e;
  e.question = question;
  e.goal = goal;
  e.num_observations = trace.num_observations();
  e.log_base = explanan.log_base;
  e.probability_floor = trace.probability_floor;
  e.tie_epsilon = trace.tie_epsilon;
  return e;
}

std::vector<Marker> ToMarkers(const ScenarioBundle& bundle, const MarkerSet& set) {
  std::vector<Marker> markers;
  for (std::size_t step : set.steps) {
    markers.push_back({step, bundle.observations.at(step - 1).action, set.woe});
  }
  return markers;
}

}  // namespace

Explanation ExplainWhy(const ScenarioBundle& bundle, const PosteriorTrace& trace,
                       const Explanan& explanan, std::size_t goal) {
  if (goal >= trace.num_goals()) throw InvalidArgumentError("unknown goal " + GoalLabel(goal));
  if (!trace.final_step().IsPredicted(goal)) {
    throw QuestionNotApplicableError("'why " + GoalLabel(goal) +
                                     "?' does not apply: the goal is not predicted");
  }
  Explanation e = Skeleton(trace, explanan, Question::kWhy, goal);
  if (!explanan.ForPredicted(goal).empty()) {
    e.markers = ToMarkers(bundle, ObservationalMarkers(explanan, goal, trace.tie_epsilon));
  }
  e.text = RenderText(e, *bundle.domain, bundle.vocab);
  return e;
}

Explanation ExplainWhyNot(const ScenarioBundle& bundle, const PosteriorTrace& trace,
                          const Explanan& explanan, std::size_t goal, Planner& planner) {
  if (goal >= trace.num_goals()) throw InvalidArgumentError("unknown goal " + GoalLabel(goal));
  if (!trace.final_step().IsCounterfactual(goal)) {
    throw QuestionNotApplicableError("'why not " + GoalLabel(goal) +
                                     "?' does not apply: the goal is predicted");
  }
  Explanation e = Skeleton(trace, explanan, Question::kWhyNot, goal);
  if (!explanan.ForCounterfactual(goal).empty()) {
    e.markers = ToMarkers(bundle, CounterfactualMarkers(explanan, goal, trace.tie_epsilon));
    for (const Marker& m : e.markers) {
      e.counterfactuals.push_back(FindCounterfactualAction(bundle, planner, goal, m.step));
    }
  }
  e.text = RenderText(e, *bundle.domain, bundle.vocab);
  return e;
}

std::string RenderText(const Explanation& e, const Domain& domain, const Vocabulary& vocab) {
  const std::string goal = GoalLabel(e.goal);
  auto phrase = [&](ActionId a) { return vocab.Describe(domain.action(a).name); };

  if (e.markers.empty()) {
    if (e.num_observations == 0) return "No evidence observed for " + goal + ".";
    return "No contrastive evidence exists for " + goal +
           ": no observation separates it from another goal.";
  }

  if (e.question == Question::kWhy) {
    std::string text = "Because the agent has ";
    for (std::size_t i = 0; i < e.markers.size(); ++i) {
      if (i > 0) text += " and ";
      text += phrase(e.markers[i].action);
    }
    return text + ".";
  }

  std::string text;
  for (std::size_t i = 0; i < e.markers.size(); ++i) {
    const Marker& m = e.markers[i];
    std::string sentence;
    const CounterfactualAction* cf = i < e.counterfactuals.size() ? &e.counterfactuals[i] : nullptr;
    if (cf == nullptr) {
      sentence = "Because the agent " + phrase(m.action) + ", it moved away from " + goal + ".";
    } else if (cf->status == CounterfactualStatus::kFound) {
      sentence = "Because the agent " + phrase(m.action) + ", it would have " +
                 phrase(*cf->action) + " if the goal was " + goal + ".";
    } else if (cf->status == CounterfactualStatus::kAlreadySatisfied) {
      sentence = "Goal " + goal + " already held before the agent " + phrase(m.action) + ".";
    } else {
      sentence = "Goal " + goal + " cannot be achieved from the divergence point before the agent " +
                 phrase(m.action) + ".";
    }
    if (i > 0) {
      text += " And ";
      sentence[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(sentence[0])));
    }
    text += sentence;
  }
  return text;
}

nlohmann::json ToJson(const Explanation& e, const Domain& domain) {
  nlohmann::json markers = nlohmann::json::array();
  for (const auto& m : e.markers) {
    markers.push_back({{"index", m.step}, {"action", domain.action(m.action).name}, {"woe", m.woe}});
  }
  nlohmann::json counterfactuals = nlohmann::json::array();
  for (const auto& cf : e.counterfactuals) {
    nlohmann::json from = nlohmann::json::array();
    cf.source.facts().ForEach([&](FactId f) { from.push_back(domain.fact_name(f)); });
    nlohmann::json plan = nlohmann::json::array();
    if (cf.plan) {
      for (ActionId a : cf.plan->steps) plan.push_back(domain.action(a).name);
    }
    std::string status = cf.status == CounterfactualStatus::kFound       ? "found"
                         : cf.status == CounterfactualStatus::kUnreachable ? "unreachable"
                                                                          : "already-satisfied";
    counterfactuals.push_back(
        {{"marker", cf.marker_step},
         {"from_state", from},
         {"action", cf.action ? nlohmann::json(domain.action(*cf.action).name) : nlohmann::json()},
         {"plan", plan},
         {"status", status}});
  }
  return {{"question", std::string(ToString(e.question))},
          {"goal", GoalLabel(e.goal)},
          {"markers", markers},
          {"counterfactuals", counterfactuals},
          {"text", e.text},
          {"config",
           {{"log_base", e.log_base.ToString()},
            {"floor", e.probability_floor},
            {"tie_epsilon", e.tie_epsilon}}}};
}

}  // namespace xgr
