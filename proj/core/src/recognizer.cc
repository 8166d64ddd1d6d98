#include "xgr/recognizer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "xgr/error.h"

namespace xgr {

double CostRatioScorer::Score(const std::optional<Cost>& optimal,
                              const std::optional<Cost>& matched) const {
  if (!optimal || !matched) return 0.0;
  if (*matched == Cost(0)) return *optimal == Cost(0) ? 1.0 : 0.0;
  return ToDouble(*optimal / *matched);
}

GoalPartition Partition(std::span<const double> probabilities, double tie_epsilon) {
  GoalPartition partition;
  if (probabilities.empty()) return partition;
  const double max = *std::max_element(probabilities.begin(), probabilities.end());
  for (std::size_t g = 0; g < probabilities.size(); ++g) {
    if (probabilities[g] >= max - tie_epsilon) {
      partition.predicted.push_back(g);
    } else {
      partition.counterfactual.push_back(g);
    }
  }
  return partition;
}

std::vector<double> NormalizeWithFloor(std::span<const double> weights, double floor) {
  const std::size_t m = weights.size();
  if (m == 0) return {};
  if (floor < 0.0 || floor * static_cast<double>(m) > 1.0) {
    throw InvalidArgumentError("probability floor must lie in [0, 1/" + std::to_string(m) + "]");
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> p(m, 1.0 / static_cast<double>(m));
  if (sum > 0.0) {
    for (std::size_t g = 0; g < m; ++g) p[g] = weights[g] / sum;
  }

  std::vector<bool> clamped(m, false);
  for (;;) {
    bool changed = false;
    for (std::size_t g = 0; g < m; ++g) {
      if (!clamped[g] && p[g] < floor) {
        clamped[g] = true;
        changed = true;
      }
    }
    if (!changed) break;
    const auto num_clamped = static_cast<double>(std::count(clamped.begin(), clamped.end(), true));
    double free_mass = 0.0;
    for (std::size_t g = 0; g < m; ++g) {
      if (!clamped[g]) free_mass += p[g];
    }
    const double target = 1.0 - num_clamped * floor;
    for (std::size_t g = 0; g < m; ++g) {
      if (clamped[g]) {
        p[g] = floor;
      } else if (free_mass > 0.0) {
        p[g] *= target / free_mass;
      }
    }
    if (free_mass <= 0.0) break;
  }
  return p;
}

bool StepPosterior::IsPredicted(std::size_t goal) const {
  return std::find(partition.predicted.begin(), partition.predicted.end(), goal) !=
         partition.predicted.end();
}

bool StepPosterior::IsCounterfactual(std::size_t goal) const {
  return std::find(partition.counterfactual.begin(), partition.counterfactual.end(), goal) !=
         partition.counterfactual.end();
}

double PosteriorTrace::Probability(std::size_t goal, std::size_t step) const {
  if (goal >= num_goals()) throw InvalidArgumentError("unknown goal " + GoalLabel(goal));
  return steps.at(step).probabilities[goal];
}

namespace {

// Runs fn(k) for k in [0, count) on up to `threads` workers. The first
// exception thrown by any call is rethrown after all workers finish.
template <typename Fn>
void ParallelFor(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(count));
  for (unsigned w = 0; w < n; ++w) {
    workers.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

PosteriorTrace Recognize(const ScenarioBundle& bundle, Planner& planner,
                         const RecognizerOptions& options) {
  const auto priors = bundle.EffectivePriors();
  return Recognize(bundle, planner, priors, options);
}

PosteriorTrace Recognize(const ScenarioBundle& bundle, Planner& planner,
                         std::span<const double> priors, const RecognizerOptions& options) {
  const std::size_t m = bundle.num_goals();
  const std::size_t n = bundle.num_observations();
  if (m == 0) throw InvalidArgumentError("no goal hypotheses");
  if (priors.size() != m) {
    throw InvalidArgumentError("expected " + std::to_string(m) + " priors");
  }
  const auto scorer = options.scorer ? options.scorer : std::make_shared<CostRatioScorer>();

  PosteriorTrace trace;
  trace.priors.assign(priors.begin(), priors.end());
  trace.probability_floor = options.probability_floor;
  trace.tie_epsilon = options.tie_epsilon;
  trace.scorer = std::string(scorer->name());

  // suffix[i * m + g] = optimal cost from phi_i to g; step 0 gives c*(g).
  std::vector<std::optional<Cost>> suffix((n + 1) * m);
  ParallelFor((n + 1) * m, options.threads, [&](std::size_t k) {
    const std::size_t step = k / m;
    const std::size_t goal = k % m;
    const SearchResult result = planner.Solve(bundle.TaskFrom(bundle.StateAfter(step), goal));
    if (result.status == SearchStatus::kBudgetExhausted) {
      throw BudgetExhaustedError("planner budget exhausted for goal " + GoalLabel(goal) +
                                 " at observation " + std::to_string(step));
    }
    if (result.status == SearchStatus::kSolved) suffix[k] = result.plan->total_cost;
  });

  trace.optimal_cost.assign(suffix.begin(), suffix.begin() + static_cast<long>(m));
  Cost prefix_cost(0);
  for (std::size_t step = 0; step <= n; ++step) {
    if (step > 0) prefix_cost += bundle.domain->action(bundle.observations[step - 1].action).cost;
    StepPosterior posterior;
    posterior.step = step;
    std::vector<double> weights(m);
    for (std::size_t g = 0; g < m; ++g) {
      std::optional<Cost> matched;
      if (const auto& rest = suffix[step * m + g]) {
        matched = prefix_cost + *rest;
      } else {
        trace.warnings.push_back(GoalLabel(g) + " is unreachable after observation " +
                                 std::to_string(step));
      }
      posterior.matched_cost.push_back(matched);
      posterior.scores.push_back(scorer->Score(trace.optimal_cost[g], matched));
      weights[g] = priors[g] * posterior.scores.back();
    }
    posterior.probabilities = NormalizeWithFloor(weights, options.probability_floor);
    posterior.partition = Partition(posterior.probabilities, options.tie_epsilon);
    trace.steps.push_back(std::move(posterior));
  }
  return trace;
}

}  // namespace xgr
