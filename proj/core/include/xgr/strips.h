#pragma once

#include <boost/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xgr {

using FactId = std::uint32_t;
using ActionId = std::uint32_t;

// Action and plan costs are exact rationals so that equal-cost plans compare
// equal regardless of summation order.
using Cost = boost::rational<std::int64_t>;

// "3", "3/2". Inverse of ParseCost in text_format.h.
std::string FormatCost(const Cost& cost);
double ToDouble(const Cost& cost);

// Fixed-universe bitset over interned facts.
class FactSet {
 public:
  FactSet() = default;
  explicit FactSet(std::size_t universe_size);

  std::size_t universe_size() const { return universe_size_; }

  bool Contains(FactId fact) const;
  void Insert(FactId fact);
  void Erase(FactId fact);

  bool empty() const;
  std::size_t size() const;

  bool IsSubsetOf(const FactSet& other) const;
  bool Intersects(const FactSet& other) const;

  FactSet& operator|=(const FactSet& other);
  // Set difference.
  FactSet& operator-=(const FactSet& other);

  std::vector<FactId> ToVector() const;
  std::size_t Hash() const;

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = __builtin_ctzll(bits);
        fn(static_cast<FactId>(w * 64 + bit));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const FactSet&, const FactSet&) = default;

 private:
  void CheckSameUniverse(const FactSet& other) const;

  std::size_t universe_size_ = 0;
  std::vector<std::uint64_t> words_;
};

// The set of facts that hold. Value-semantic and hashable; two states with
// equal fact sets are interchangeable.
class State {
 public:
  State() = default;
  explicit State(FactSet facts) : facts_(std::move(facts)) {}

  const FactSet& facts() const { return facts_; }
  bool Contains(FactId fact) const { return facts_.Contains(fact); }
  bool Satisfies(const FactSet& goal) const { return goal.IsSubsetOf(facts_); }
  std::size_t Hash() const { return facts_.Hash(); }

  friend bool operator==(const State&, const State&) = default;

 private:
  FactSet facts_;
};

struct GroundAction {
  std::string name;
  FactSet preconditions;
  FactSet add_effects;
  FactSet delete_effects;
  Cost cost{1};
};

// Grounded domain: a fact universe and an action set. Immutable once built;
// share it through std::shared_ptr<const Domain>.
class Domain {
 public:
  std::size_t num_facts() const { return fact_names_.size(); }
  const std::string& fact_name(FactId fact) const;
  const std::vector<std::string>& fact_names() const { return fact_names_; }
  std::optional<FactId> FindFact(std::string_view name) const;
  // Throws DomainMismatchError for unknown names.
  FactId GetFact(std::string_view name) const;

  std::size_t num_actions() const { return actions_.size(); }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const GroundAction& action(ActionId id) const { return actions_.at(id); }
  std::optional<ActionId> FindAction(std::string_view name) const;
  ActionId GetAction(std::string_view name) const;

  FactSet EmptyFactSet() const { return FactSet(num_facts()); }
  FactSet MakeFactSet(std::span<const std::string> names) const;
  State MakeState(std::span<const std::string> names) const;

  // Sorted by fact id, comma separated.
  std::string Describe(const FactSet& facts) const;

  // Position of each action in lexicographic name order.
  const std::vector<std::uint32_t>& name_rank() const { return name_rank_; }

 private:
  friend class DomainBuilder;

  std::vector<std::string> fact_names_;
  std::unordered_map<std::string, FactId> fact_index_;
  std::vector<GroundAction> actions_;
  std::unordered_map<std::string, ActionId> action_index_;
  std::vector<std::uint32_t> name_rank_;
};

class DomainBuilder {
 public:
  bool HasFact(std::string_view name) const;
  bool HasAction(std::string_view name) const;

  // Duplicate names and malformed tokens raise InvalidArgumentError.
  FactId AddFact(std::string name);
  // Fact names are resolved in Build(), so facts may be declared after use.
  void AddAction(std::string name, std::vector<std::string> preconditions,
                 std::vector<std::string> add_effects,
                 std::vector<std::string> delete_effects, Cost cost = Cost(1));

  // Throws DomainMismatchError when an action names an undeclared fact and
  // InvalidArgumentError when add and delete effects overlap.
  std::shared_ptr<const Domain> Build() const;

 private:
  struct PendingAction {
    std::string name;
    std::vector<std::string> pre, add, del;
    Cost cost;
  };

  std::vector<std::string> facts_;
  std::unordered_map<std::string, FactId> fact_index_;
  std::vector<PendingAction> actions_;
  std::unordered_map<std::string, std::size_t> action_index_;
};

// Names must be non-empty and free of whitespace and commas.
bool IsValidToken(std::string_view token);

struct PlanningTask {
  PlanningTask(std::shared_ptr<const Domain> domain, State initial,
               FactSet goal);

  std::shared_ptr<const Domain> domain;
  State initial;
  FactSet goal;
};

struct Plan {
  std::vector<ActionId> steps;
  Cost total_cost{0};

  friend bool operator==(const Plan&, const Plan&) = default;
};

Plan MakePlan(const Domain& domain, std::vector<ActionId> steps);

// preconditions ⊆ state. Throws DomainMismatchError when the action and the
// state come from different fact universes.
bool Applicable(const GroundAction& action, const State& state);

// (state \ delete) ∪ add. Throws NotApplicableError if !Applicable.
State Apply(const GroundAction& action, const State& state);

enum class PlanFailure { kNone, kInapplicableStep, kGoalNotReached, kCostMismatch };

struct PlanValidation {
  bool valid = false;
  PlanFailure failure = PlanFailure::kNone;
  // Index of the first inapplicable step, or steps.size() when the goal check
  // (or the cost check) fails.
  std::optional<std::size_t> failure_index;
};

PlanValidation ValidatePlan(const PlanningTask& task, const Plan& plan);

}  // namespace xgr

template <>
struct std::hash<xgr::FactSet> {
  std::size_t operator()(const xgr::FactSet& s) const { return s.Hash(); }
};

template <>
struct std::hash<xgr::State> {
  std::size_t operator()(const xgr::State& s) const { return s.Hash(); }
};
