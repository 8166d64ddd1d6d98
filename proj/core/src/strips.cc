#include "xgr/strips.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "xgr/error.h"

namespace xgr {

std::string FormatCost(const Cost& cost) {
  std::ostringstream out;
  out << cost.numerator();
  if (cost.denominator() != 1) out << '/' << cost.denominator();
  return out.str();
}

double ToDouble(const Cost& cost) {
  return static_cast<double>(cost.numerator()) /
         static_cast<double>(cost.denominator());
}

FactSet::FactSet(std::size_t universe_size)
    : universe_size_(universe_size), words_((universe_size + 63) / 64, 0) {}

bool FactSet::Contains(FactId fact) const {
  if (fact >= universe_size_) return false;
  return (words_[fact / 64] >> (fact % 64)) & 1U;
}

void FactSet::Insert(FactId fact) {
  if (fact >= universe_size_) {
    throw DomainMismatchError("fact id " + std::to_string(fact) +
                              " outside a universe of " +
                              std::to_string(universe_size_) + " facts");
  }
  words_[fact / 64] |= std::uint64_t{1} << (fact % 64);
}

void FactSet::Erase(FactId fact) {
  if (fact >= universe_size_) return;
  words_[fact / 64] &= ~(std::uint64_t{1} << (fact % 64));
}

bool FactSet::empty() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

std::size_t FactSet::size() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

void FactSet::CheckSameUniverse(const FactSet& other) const {
  if (universe_size_ != other.universe_size_) {
    throw DomainMismatchError("fact sets over universes of size " +
                              std::to_string(universe_size_) + " and " +
                              std::to_string(other.universe_size_));
  }
}

bool FactSet::IsSubsetOf(const FactSet& other) const {
  CheckSameUniverse(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool FactSet::Intersects(const FactSet& other) const {
  CheckSameUniverse(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

FactSet& FactSet::operator|=(const FactSet& other) {
  CheckSameUniverse(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

FactSet& FactSet::operator-=(const FactSet& other) {
  CheckSameUniverse(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

std::vector<FactId> FactSet::ToVector() const {
  std::vector<FactId> out;
  ForEach([&](FactId f) { out.push_back(f); });
  return out;
}

std::size_t FactSet::Hash() const {
  // splitmix64 finalizer folded over the words.
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ universe_size_;
  for (std::uint64_t w : words_) {
    std::uint64_t z = w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    h ^= z ^ (z >> 31);
  }
  return static_cast<std::size_t>(h);
}

const std::string& Domain::fact_name(FactId fact) const {
  if (fact >= fact_names_.size()) {
    throw DomainMismatchError("unknown fact id " + std::to_string(fact));
  }
  return fact_names_[fact];
}

std::optional<FactId> Domain::FindFact(std::string_view name) const {
  auto it = fact_index_.find(std::string(name));
  if (it == fact_index_.end()) return std::nullopt;
  return it->second;
}

FactId Domain::GetFact(std::string_view name) const {
  if (auto id = FindFact(name)) return *id;
  throw DomainMismatchError("unknown fact '" + std::string(name) + "'");
}

std::optional<ActionId> Domain::FindAction(std::string_view name) const {
  auto it = action_index_.find(std::string(name));
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

ActionId Domain::GetAction(std::string_view name) const {
  if (auto id = FindAction(name)) return *id;
  throw DomainMismatchError("unknown action '" + std::string(name) + "'");
}

FactSet Domain::MakeFactSet(std::span<const std::string> names) const {
  FactSet set = EmptyFactSet();
  for (const auto& name : names) set.Insert(GetFact(name));
  return set;
}

State Domain::MakeState(std::span<const std::string> names) const {
  return State(MakeFactSet(names));
}

std::string Domain::Describe(const FactSet& facts) const {
  std::string out;
  facts.ForEach([&](FactId f) {
    if (!out.empty()) out += ", ";
    out += fact_name(f);
  });
  return out;
}

bool IsValidToken(std::string_view token) {
  if (token.empty()) return false;
  return std::none_of(token.begin(), token.end(), [](char c) {
    return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
           c == '\v' || c == '\f';
  });
}

bool DomainBuilder::HasFact(std::string_view name) const {
  return fact_index_.contains(std::string(name));
}

bool DomainBuilder::HasAction(std::string_view name) const {
  return action_index_.contains(std::string(name));
}

FactId DomainBuilder::AddFact(std::string name) {
  if (!IsValidToken(name)) {
    throw InvalidArgumentError("invalid fact name '" + name + "'");
  }
  if (HasFact(name)) {
    throw InvalidArgumentError("duplicate fact '" + name + "'");
  }
  const auto id = static_cast<FactId>(facts_.size());
  fact_index_.emplace(name, id);
  facts_.push_back(std::move(name));
  return id;
}

void DomainBuilder::AddAction(std::string name,
                              std::vector<std::string> preconditions,
                              std::vector<std::string> add_effects,
                              std::vector<std::string> delete_effects,
                              Cost cost) {
  if (!IsValidToken(name)) {
    throw InvalidArgumentError("invalid action name '" + name + "'");
  }
  if (HasAction(name)) {
    throw InvalidArgumentError("duplicate action '" + name + "'");
  }
  if (cost < Cost(0)) {
    throw InvalidArgumentError("negative cost for action '" + name + "'");
  }
  action_index_.emplace(name, actions_.size());
  actions_.push_back({std::move(name), std::move(preconditions),
                      std::move(add_effects), std::move(delete_effects), cost});
}

std::shared_ptr<const Domain> DomainBuilder::Build() const {
  auto domain = std::make_shared<Domain>();
  domain->fact_names_ = facts_;
  domain->fact_index_ = fact_index_;
  domain->actions_.reserve(actions_.size());
  for (const auto& pending : actions_) {
    auto resolve = [&](const std::vector<std::string>& names) {
      FactSet set = domain->EmptyFactSet();
      for (const auto& n : names) {
        auto id = domain->FindFact(n);
        if (!id) {
          throw DomainMismatchError("action '" + pending.name +
                                    "' references undeclared fact '" + n + "'");
        }
        set.Insert(*id);
      }
      return set;
    };
    GroundAction action{pending.name, resolve(pending.pre), resolve(pending.add),
                        resolve(pending.del), pending.cost};
    if (action.add_effects.Intersects(action.delete_effects)) {
      throw InvalidArgumentError("action '" + pending.name +
                                 "' adds and deletes the same fact");
    }
    domain->action_index_.emplace(pending.name,
                                  static_cast<ActionId>(domain->actions_.size()));
    domain->actions_.push_back(std::move(action));
  }

  std::vector<ActionId> order(domain->actions_.size());
  std::iota(order.begin(), order.end(), ActionId{0});
  std::sort(order.begin(), order.end(), [&](ActionId a, ActionId b) {
    return domain->actions_[a].name < domain->actions_[b].name;
  });
  domain->name_rank_.assign(order.size(), 0);
  for (std::uint32_t r = 0; r < order.size(); ++r) domain->name_rank_[order[r]] = r;
  return domain;
}

PlanningTask::PlanningTask(std::shared_ptr<const Domain> d, State init,
                           FactSet g)
    : domain(std::move(d)), initial(std::move(init)), goal(std::move(g)) {
  if (!domain) throw InvalidArgumentError("planning task without a domain");
  if (initial.facts().universe_size() != domain->num_facts() ||
      goal.universe_size() != domain->num_facts()) {
    throw DomainMismatchError("initial state or goal outside the domain's facts");
  }
}

Plan MakePlan(const Domain& domain, std::vector<ActionId> steps) {
  Plan plan{std::move(steps), Cost(0)};
  for (ActionId a : plan.steps) plan.total_cost += domain.action(a).cost;
  return plan;
}

bool Applicable(const GroundAction& action, const State& state) {
  if (action.preconditions.universe_size() != state.facts().universe_size()) {
    throw DomainMismatchError("action '" + action.name +
                              "' and state use different fact universes");
  }
  return action.preconditions.IsSubsetOf(state.facts());
}

State Apply(const GroundAction& action, const State& state) {
  if (!Applicable(action, state)) {
    throw NotApplicableError("action '" + action.name +
                             "' is not applicable in the given state");
  }
  FactSet next = state.facts();
  next -= action.delete_effects;
  next |= action.add_effects;
  return State(std::move(next));
}

PlanValidation ValidatePlan(const PlanningTask& task, const Plan& plan) {
  const Domain& domain = *task.domain;
  State current = task.initial;
  Cost total(0);
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (plan.steps[i] >= domain.num_actions()) {
      return {false, PlanFailure::kInapplicableStep, i};
    }
    const GroundAction& action = domain.action(plan.steps[i]);
    if (!Applicable(action, current)) {
      return {false, PlanFailure::kInapplicableStep, i};
    }
    current = Apply(action, current);
    total += action.cost;
  }
  if (!current.Satisfies(task.goal)) {
    return {false, PlanFailure::kGoalNotReached, plan.steps.size()};
  }
  if (total != plan.total_cost) {
    return {false, PlanFailure::kCostMismatch, plan.steps.size()};
  }
  return {true, PlanFailure::kNone, std::nullopt};
}

}  // namespace xgr
