#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xgr/bundle.h"
#include "xgr/planner.h"
#include "xgr/strips.h"

namespace xgr {

// Turns a goal's optimal cost c*(g) and its matched cost c_m(g, i) (observed
// prefix plus optimal suffix) into an unnormalized likelihood. nullopt costs
// mean the goal is unreachable.
class GoalScorer {
 public:
  virtual ~GoalScorer() = default;
  virtual std::string_view name() const = 0;
  virtual double Score(const std::optional<Cost>& optimal,
                       const std::optional<Cost>& matched) const = 0;
};

// c*(g) / c_m(g, i); 1 when both are zero; 0 when unreachable.
class CostRatioScorer final : public GoalScorer {
 public:
  std::string_view name() const override { return "cost-ratio"; }
  double Score(const std::optional<Cost>& optimal,
               const std::optional<Cost>& matched) const override;
};

struct RecognizerOptions {
  // Posteriors are clamped to at least this value so log ratios stay finite.
  double probability_floor = 1e-6;
  double tie_epsilon = 1e-9;
  std::shared_ptr<const GoalScorer> scorer;  // null = CostRatioScorer
  // Worker threads for suffix planning; results do not depend on it.
  unsigned threads = 1;
};

struct GoalPartition {
  std::vector<std::size_t> predicted;
  std::vector<std::size_t> counterfactual;
};

// predicted = { g : p(g) >= max - tie_epsilon }, counterfactual = the rest.
GoalPartition Partition(std::span<const double> probabilities, double tie_epsilon = 1e-9);

// Normalizes `weights`, then raises every entry below `floor` to exactly
// `floor` and rescales the others so the vector still sums to 1. All-zero
// weights give the uniform distribution. Requires floor * size <= 1.
std::vector<double> NormalizeWithFloor(std::span<const double> weights, double floor);

struct StepPosterior {
  std::size_t step = 0;  // 0 = before any observation
  std::vector<double> probabilities;
  std::vector<double> scores;
  std::vector<std::optional<Cost>> matched_cost;
  GoalPartition partition;

  bool IsPredicted(std::size_t goal) const;
  bool IsCounterfactual(std::size_t goal) const;
};

struct PosteriorTrace {
  std::vector<double> priors;
  std::vector<std::optional<Cost>> optimal_cost;
  // steps[i] is the posterior after i observations, i = 0..n.
  std::vector<StepPosterior> steps;
  double probability_floor = 1e-6;
  double tie_epsilon = 1e-9;
  std::string scorer;
  std::vector<std::string> warnings;

  std::size_t num_goals() const { return optimal_cost.size(); }
  std::size_t num_observations() const { return steps.empty() ? 0 : steps.size() - 1; }
  const StepPosterior& at(std::size_t step) const { return steps.at(step); }
  const StepPosterior& final_step() const { return steps.back(); }
  double Probability(std::size_t goal, std::size_t step) const;
};

// Mirroring: for each prefix O_i, c_m(g, i) = cost(O_i) + cost(phi_i -> g),
// P(g | O_i) proportional to prior(g) * score(c*(g), c_m(g, i)).
// Unreachable goals get score 0 (floored) and a warning; budget exhaustion
// raises BudgetExhaustedError naming the goal and step.
PosteriorTrace Recognize(const ScenarioBundle& bundle, Planner& planner,
                         const RecognizerOptions& options = {});

// Same as Recognize but with explicit priors (overriding the bundle's).
PosteriorTrace Recognize(const ScenarioBundle& bundle, Planner& planner,
                         std::span<const double> priors, const RecognizerOptions& options);

}  // namespace xgr
