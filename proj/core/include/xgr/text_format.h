#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "xgr/strips.h"

namespace xgr {

// A single observed step: the action taken and the state it produced.
// `index` is the 1-based time step.
struct ObservationStep {
  ActionId action = 0;
  State state;
  std::size_t index = 0;

  friend bool operator==(const ObservationStep&, const ObservationStep&) = default;
};

// Accepts integers, "p/q" and finite decimals ("0.25"). Throws ParseError.
Cost ParseCost(std::string_view text);

// Grounded STRIPS domain text:
//
//   # comment
//   fact at_cell_1
//   action move_right_1_2 cost 1 pre at_cell_1 add at_cell_2 del at_cell_1
//
// Sections after the action name may appear in any order and may be omitted
// (cost defaults to 1). Fact lists are comma separated; whitespace around
// commas is ignored. Facts may be declared after the actions that use them.
std::shared_ptr<const Domain> ParseDomain(std::string_view text);
std::string SerializeDomain(const Domain& domain);

// Comma and/or newline separated fact names; `#` starts a comment.
State ParseState(std::string_view text, const Domain& domain);
std::string SerializeState(const State& state, const Domain& domain);

// One conjunctive goal per line, facts comma separated. Line j is goal g_j.
std::vector<FactSet> ParseHypotheses(std::string_view text, const Domain& domain);
std::string SerializeHypotheses(const std::vector<FactSet>& hypotheses,
                                const Domain& domain);

// One action name per line, replayed from `initial`. Blank lines are skipped.
// Throws ParseError naming the step for unknown or inapplicable actions.
std::vector<ObservationStep> ParseObservations(std::string_view text,
                                               const Domain& domain,
                                               const State& initial);
std::string SerializeObservations(const std::vector<ObservationStep>& observations,
                                  const Domain& domain);

// One decimal per line. Must match `expected_size` and sum to 1 within 1e-9.
std::vector<double> ParsePriors(std::string_view text, std::size_t expected_size);
void ValidatePriors(const std::vector<double>& priors, std::size_t expected_size);

}  // namespace xgr
