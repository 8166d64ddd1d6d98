#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xgr/strips.h"

namespace xgr {

// Lower bound on the cost of reaching `goal` from `state`. Implementations
// must be admissible; the search reopens states, so consistency is not needed.
class Heuristic {
 public:
  virtual ~Heuristic() = default;
  virtual std::string_view name() const = 0;
  virtual Cost Estimate(const State& state, const FactSet& goal) const = 0;
};

class BlindHeuristic final : public Heuristic {
 public:
  std::string_view name() const override { return "blind"; }
  Cost Estimate(const State&, const FactSet&) const override { return Cost(0); }
};

// 0 when the goal holds, otherwise the cheapest action cost in the domain.
// With unit costs this is the plain 0/1 goal indicator.
class GoalCountHeuristic final : public Heuristic {
 public:
  explicit GoalCountHeuristic(const Domain& domain);
  std::string_view name() const override { return "goal-count"; }
  Cost Estimate(const State& state, const FactSet& goal) const override;

 private:
  Cost min_cost_;
};

// Heuristics available for one domain, keyed by id. "blind" and
// "goal-count" are always present; map compilers add their own.
class HeuristicRegistry {
 public:
  HeuristicRegistry() = default;
  explicit HeuristicRegistry(const Domain& domain);

  void Register(std::shared_ptr<const Heuristic> heuristic);
  // Throws InvalidArgumentError for unknown ids.
  std::shared_ptr<const Heuristic> Get(std::string_view id) const;
  bool Contains(std::string_view id) const;
  std::vector<std::string> ids() const;

  // The strongest registered heuristic: the last one registered.
  const std::string& preferred() const { return preferred_; }

 private:
  std::map<std::string, std::shared_ptr<const Heuristic>, std::less<>> entries_;
  std::string preferred_ = "blind";
};

struct Budget {
  std::uint64_t max_expansions = 1'000'000;
  std::chrono::milliseconds time_limit{60'000};
};

struct SearchOptions {
  Budget budget;
  // 0 breaks equal-f ties by action name; any other value by a fixed
  // pseudo-random permutation of the actions derived from the seed.
  std::uint64_t tie_seed = 0;
};

enum class SearchStatus { kSolved, kUnsolvable, kBudgetExhausted };

std::string_view ToString(SearchStatus status);

struct SearchResult {
  SearchStatus status = SearchStatus::kUnsolvable;
  // Present iff status == kSolved; cost-optimal.
  std::optional<Plan> plan;
  std::uint64_t expanded_nodes = 0;
  std::chrono::nanoseconds elapsed{0};
};

// A* over the task's state space. Equal-f nodes are ordered by the rank of
// the generating action (see SearchOptions::tie_seed), then by insertion.
SearchResult AStarSearch(const PlanningTask& task, const Heuristic& heuristic,
                         const SearchOptions& options = {});

// Memoizing front end over AStarSearch. Results are cached per
// (initial state, goal) pair; the cache is safe for concurrent use.
class Planner {
 public:
  explicit Planner(std::shared_ptr<const Heuristic> heuristic = nullptr,
                   SearchOptions options = {});

  // Budget exhaustion is reported in the result and never cached.
  SearchResult Solve(const PlanningTask& task);

  // Optimal cost; throws UnsolvableError or BudgetExhaustedError.
  Cost PlanCost(const PlanningTask& task);

  const Heuristic& heuristic() const { return *heuristic_; }
  const SearchOptions& options() const { return options_; }

  std::size_t cache_size() const;
  std::uint64_t cache_hits() const;
  void ClearCache();

 private:
  struct Key {
    const Domain* domain;
    State initial;
    FactSet goal;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const;
  };

  std::shared_ptr<const Heuristic> heuristic_;
  SearchOptions options_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, SearchResult, KeyHash> cache_;
  std::atomic<std::uint64_t> hits_{0};
};

}  // namespace xgr
