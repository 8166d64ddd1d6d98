#include "xgr/planner.h"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <queue>
#include <random>

#include "xgr/error.h"

namespace xgr {

GoalCountHeuristic::GoalCountHeuristic(const Domain& domain) : min_cost_(0) {
  bool first = true;
  for (const auto& action : domain.actions()) {
    if (first || action.cost < min_cost_) min_cost_ = action.cost;
    first = false;
  }
}

Cost GoalCountHeuristic::Estimate(const State& state, const FactSet& goal) const {
  return state.Satisfies(goal) ? Cost(0) : min_cost_;
}

HeuristicRegistry::HeuristicRegistry(const Domain& domain) {
  Register(std::make_shared<BlindHeuristic>());
  Register(std::make_shared<GoalCountHeuristic>(domain));
}

void HeuristicRegistry::Register(std::shared_ptr<const Heuristic> heuristic) {
  if (!heuristic) throw InvalidArgumentError("null heuristic");
  preferred_ = std::string(heuristic->name());
  entries_[preferred_] = std::move(heuristic);
}

std::shared_ptr<const Heuristic> HeuristicRegistry::Get(std::string_view id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw InvalidArgumentError("unknown heuristic '" + std::string(id) + "'");
  }
  return it->second;
}

bool HeuristicRegistry::Contains(std::string_view id) const {
  return entries_.find(id) != entries_.end();
}

std::vector<std::string> HeuristicRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, h] : entries_) out.push_back(id);
  return out;
}

std::string_view ToString(SearchStatus status) {
  switch (status) {
    case SearchStatus::kSolved: return "solved";
    case SearchStatus::kUnsolvable: return "unsolvable";
    case SearchStatus::kBudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

namespace {

// Indexes each action under one of its preconditions so that successor
// generation only inspects actions whose anchor fact holds.
class SuccessorGenerator {
 public:
  explicit SuccessorGenerator(const Domain& domain) : domain_(domain) {
    std::vector<std::size_t> uses(domain.num_facts(), 0);
    for (const auto& action : domain.actions()) {
      action.preconditions.ForEach([&](FactId f) { ++uses[f]; });
    }
    by_anchor_.resize(domain.num_facts());
    for (ActionId a = 0; a < domain.num_actions(); ++a) {
      const auto& pre = domain.action(a).preconditions;
      std::optional<FactId> anchor;
      pre.ForEach([&](FactId f) {
        if (!anchor || uses[f] < uses[*anchor]) anchor = f;
      });
      if (anchor) {
        by_anchor_[*anchor].push_back(a);
      } else {
        unconditional_.push_back(a);
      }
    }
  }

  template <typename Fn>
  void ForEachApplicable(const State& state, Fn&& fn) const {
    for (ActionId a : unconditional_) fn(a);
    state.facts().ForEach([&](FactId f) {
      for (ActionId a : by_anchor_[f]) {
        if (domain_.action(a).preconditions.IsSubsetOf(state.facts())) fn(a);
      }
    });
  }

 private:
  const Domain& domain_;
  std::vector<std::vector<ActionId>> by_anchor_;
  std::vector<ActionId> unconditional_;
};

std::vector<std::uint32_t> TieRanks(const Domain& domain, std::uint64_t seed) {
  if (seed == 0) return domain.name_rank();
  std::vector<std::uint32_t> ranks(domain.num_actions());
  std::iota(ranks.begin(), ranks.end(), 0U);
  std::mt19937_64 rng(seed);
  // Fisher-Yates with an explicit draw so the permutation does not depend on
  // the standard library's shuffle implementation.
  for (std::size_t i = ranks.size(); i > 1; --i) {
    std::swap(ranks[i - 1], ranks[rng() % i]);
  }
  return ranks;
}

struct Node {
  State state;
  std::uint32_t parent;
  ActionId action;
  Cost g;
};

struct OpenEntry {
  Cost f;
  std::uint32_t rank;
  std::uint64_t sequence;
  std::uint32_t node;
};

struct OpenAfter {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.rank != b.rank) return a.rank > b.rank;
    return a.sequence > b.sequence;
  }
};

constexpr std::uint32_t kNoParent = static_cast<std::uint32_t>(-1);

}  // namespace

SearchResult AStarSearch(const PlanningTask& task, const Heuristic& heuristic,
                         const SearchOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const Domain& domain = *task.domain;
  const SuccessorGenerator successors(domain);
  const std::vector<std::uint32_t> ranks = TieRanks(domain, options.tie_seed);

  SearchResult result;
  std::vector<Node> nodes;
  std::unordered_map<State, std::uint32_t> best;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenAfter> open;
  std::uint64_t sequence = 0;

  nodes.push_back({task.initial, kNoParent, 0, Cost(0)});
  best.emplace(task.initial, 0);
  open.push({heuristic.Estimate(task.initial, task.goal), 0, sequence++, 0});

  auto finish = [&](SearchStatus status) {
    result.status = status;
    result.elapsed = Clock::now() - start;
    return result;
  };

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const std::uint32_t index = top.node;
    if (best.at(nodes[index].state) != index) continue;  // superseded

    if (nodes[index].state.Satisfies(task.goal)) {
      std::vector<ActionId> steps;
      for (std::uint32_t n = index; nodes[n].parent != kNoParent; n = nodes[n].parent) {
        steps.push_back(nodes[n].action);
      }
      std::reverse(steps.begin(), steps.end());
      result.plan = MakePlan(domain, std::move(steps));
      return finish(SearchStatus::kSolved);
    }

    if (result.expanded_nodes >= options.budget.max_expansions) {
      return finish(SearchStatus::kBudgetExhausted);
    }
    if ((result.expanded_nodes & 255U) == 0 &&
        Clock::now() - start > options.budget.time_limit) {
      return finish(SearchStatus::kBudgetExhausted);
    }
    ++result.expanded_nodes;

    // Copy out: nodes may reallocate while successors are pushed.
    const State state = nodes[index].state;
    const Cost g = nodes[index].g;
    successors.ForEachApplicable(state, [&](ActionId a) {
      const GroundAction& action = domain.action(a);
      State next = Apply(action, state);
      const Cost next_g = g + action.cost;
      auto it = best.find(next);
      if (it != best.end() && nodes[it->second].g <= next_g) return;
      const auto child = static_cast<std::uint32_t>(nodes.size());
      const Cost f = next_g + heuristic.Estimate(next, task.goal);
      if (it != best.end()) {
        it->second = child;
      } else {
        best.emplace(next, child);
      }
      nodes.push_back({std::move(next), index, a, next_g});
      open.push({f, ranks[a], sequence++, child});
    });
  }
  return finish(SearchStatus::kUnsolvable);
}

std::size_t Planner::KeyHash::operator()(const Key& key) const {
  std::size_t h = std::hash<const Domain*>{}(key.domain);
  h ^= key.initial.Hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= key.goal.Hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Planner::Planner(std::shared_ptr<const Heuristic> heuristic, SearchOptions options)
    : heuristic_(heuristic ? std::move(heuristic)
                           : std::make_shared<BlindHeuristic>()),
      options_(options) {}

SearchResult Planner::Solve(const PlanningTask& task) {
  Key key{task.domain.get(), task.initial, task.goal};
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      hits_.fetch_add(1, std::memory_order_relaxed);
      return it->second;
    }
  }
  SearchResult result = AStarSearch(task, *heuristic_, options_);
  if (result.status != SearchStatus::kBudgetExhausted) {
    std::unique_lock lock(mutex_);
    cache_.emplace(std::move(key), result);
  }
  return result;
}

Cost Planner::PlanCost(const PlanningTask& task) {
  const SearchResult result = Solve(task);
  switch (result.status) {
    case SearchStatus::kSolved:
      return result.plan->total_cost;
    case SearchStatus::kUnsolvable:
      throw UnsolvableError("goal {" + task.domain->Describe(task.goal) +
                            "} is unreachable");
    case SearchStatus::kBudgetExhausted:
      break;
  }
  throw BudgetExhaustedError("search budget exhausted after " +
                             std::to_string(result.expanded_nodes) +
                             " expansions");
}

std::size_t Planner::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

std::uint64_t Planner::cache_hits() const {
  return hits_.load(std::memory_order_relaxed);
}

void Planner::ClearCache() {
  std::unique_lock lock(mutex_);
  cache_.clear();
  hits_.store(0, std::memory_order_relaxed);
}

}  // namespace xgr
