#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xgr/maps.h"
#include "xgr/planner.h"
#include "xgr/strips.h"
#include "xgr/text_format.h"
#include "xgr/vocabulary.h"

namespace xgr {

// Human annotations for one scenario. Goals are 0-based hypothesis indices;
// observation indices are 1-based time steps.
struct Annotations {
  std::map<std::size_t, std::vector<std::size_t>> why;
  std::map<std::size_t, std::vector<std::size_t>> why_not;
  std::map<std::size_t, std::string> counterfactual_action;
};

// {"why": {"g1": [8, 7]}, "why_not": {"g2": [2]},
//  "counterfactual_action": {"g2": "move_left_3_2"}}
Annotations ParseAnnotations(std::string_view text, std::size_t num_goals,
                             std::size_t num_observations);
std::string SerializeAnnotations(const Annotations& annotations);

// A goal recognition problem plus everything needed to explain it.
struct ScenarioBundle {
  std::string name;
  std::shared_ptr<const Domain> domain;
  State initial;
  std::vector<FactSet> hypotheses;
  std::vector<ObservationStep> observations;
  std::optional<std::vector<double>> priors;
  std::optional<Annotations> annotations;
  Vocabulary vocab;
  std::optional<BoardMap> map;
  HeuristicRegistry heuristics;

  std::size_t num_goals() const { return hypotheses.size(); }
  std::size_t num_observations() const { return observations.size(); }

  // State after `step` observations; step 0 is the initial state.
  const State& StateAfter(std::size_t step) const;
  PlanningTask TaskFrom(const State& from, std::size_t goal) const;

  // Priors if present, uniform otherwise.
  std::vector<double> EffectivePriors() const;
};

// "g1", "g2", ...
std::string GoalLabel(std::size_t goal);
// Inverse of GoalLabel; also accepts a bare 1-based number.
std::size_t ParseGoalLabel(std::string_view label, std::size_t num_goals);

std::vector<ObservationStep> ReplayObservations(const Domain& domain, const State& initial,
                                                const std::vector<std::string>& actions);

// Fresh bundle with the compiled domain, initial state, hypotheses, default
// vocabulary and distance heuristic. No observations.
ScenarioBundle CompileGrid(const GridMap& map);
ScenarioBundle CompileSokoban(const SokobanMap& map);
ScenarioBundle CompileMap(const BoardMap& map);

// Bundle directory layout: domain.strips, init.state, hyps.dat, obs.dat and
// optionally priors.dat, annotations.json, vocab.json, map.txt.
ScenarioBundle LoadBundle(const std::filesystem::path& dir);
void SaveBundle(const ScenarioBundle& bundle, const std::filesystem::path& dir);

}  // namespace xgr
