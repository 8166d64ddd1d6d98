// Seeded random grid and Sokoban scenarios for property tests.
#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "oracle.h"
#include "xgr/bundle.h"
#include "xgr/maps.h"
#include "xgr/strips.h"

namespace xgr::testing {

inline std::vector<int> FreeCells(const Board& board) {
  std::vector<int> cells;
  for (int i = 0; i < board.size(); ++i) {
    if (!board.walls[i]) cells.push_back(i);
  }
  return cells;
}

inline Board RandomBoard(std::mt19937_64& rng, int rows, int cols, double wall_prob,
                         bool border) {
  Board board{rows, cols, std::vector<bool>(rows * cols, false)};
  std::bernoulli_distribution wall(wall_prob);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const bool edge = r == 0 || c == 0 || r == rows - 1 || c == cols - 1;
      board.walls[board.Index(r, c)] = (border && edge) || wall(rng);
    }
  }
  return board;
}

template <typename T>
T Pick(std::mt19937_64& rng, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

// Grid with random walls; goals are distinct free cells. Needs >= 3 free cells.
inline GridMap RandomGridMap(std::mt19937_64& rng, int num_goals) {
  for (;;) {
    const int rows = std::uniform_int_distribution<int>(3, 7)(rng);
    const int cols = std::uniform_int_distribution<int>(3, 8)(rng);
    GridMap map;
    map.board = RandomBoard(rng, rows, cols, 0.25, /*border=*/false);
    auto free = FreeCells(map.board);
    if (static_cast<int>(free.size()) < num_goals + 1) continue;
    std::shuffle(free.begin(), free.end(), rng);
    map.agent = free[0];
    map.goals.assign(free.begin() + 1, free.begin() + 1 + num_goals);
    return map;
  }
}

inline SokobanMap RandomSokobanMap(std::mt19937_64& rng, int num_goals) {
  for (;;) {
    const int rows = std::uniform_int_distribution<int>(4, 6)(rng);
    const int cols = std::uniform_int_distribution<int>(4, 7)(rng);
    SokobanMap map;
    map.board = RandomBoard(rng, rows, cols, 0.1, /*border=*/true);
    map.push_chain_limit = std::uniform_int_distribution<int>(1, 2)(rng);
    auto free = FreeCells(map.board);
    const int num_boxes = std::uniform_int_distribution<int>(1, 2)(rng);
    if (static_cast<int>(free.size()) < num_boxes + 3) continue;
    std::shuffle(free.begin(), free.end(), rng);
    map.agent = free[0];
    map.boxes.assign(free.begin() + 1, free.begin() + 1 + num_boxes);
    std::vector<int> targets(free.begin() + 1, free.end());
    for (int g = 0; g < num_goals; ++g) {
      std::shuffle(targets.begin(), targets.end(), rng);
      std::vector<std::pair<int, int>> goal;
      for (int b = 0; b < num_boxes; ++b) goal.emplace_back(b, targets[b]);
      // A goal already satisfied initially is legal but uninteresting.
      bool trivial = true;
      for (auto [b, cell] : goal) trivial = trivial && map.boxes[b] == cell;
      if (trivial) {
        --g;
        continue;
      }
      map.goals.push_back(goal);
    }
    return map;
  }
}

// Random walk of applicable actions from the bundle's initial state.
inline std::vector<std::string> RandomWalk(std::mt19937_64& rng, const ScenarioBundle& bundle,
                                           int length) {
  std::vector<std::string> names;
  State state = bundle.initial;
  for (int k = 0; k < length; ++k) {
    std::vector<ActionId> applicable;
    for (ActionId a = 0; a < bundle.domain->num_actions(); ++a) {
      if (Applicable(bundle.domain->action(a), state)) applicable.push_back(a);
    }
    if (applicable.empty()) break;
    const ActionId a = Pick(rng, applicable);
    names.push_back(bundle.domain->action(a).name);
    state = Apply(bundle.domain->action(a), state);
  }
  return names;
}

// A random bundle with <= 4 goals and <= 12 observations; every third one is
// Sokoban.
inline ScenarioBundle RandomBundle(std::mt19937_64& rng, int index) {
  const int num_goals = std::uniform_int_distribution<int>(2, 4)(rng);
  BoardMap map;
  if (index % 3 == 2) {
    map = RandomSokobanMap(rng, num_goals);
  } else {
    map = RandomGridMap(rng, num_goals);
  }
  ScenarioBundle bundle = CompileMap(map);
  bundle.name = "random-" + std::to_string(index);
  const int length = std::uniform_int_distribution<int>(1, 12)(rng);
  bundle.observations = ReplayObservations(*bundle.domain, bundle.initial,
                                           RandomWalk(rng, bundle, length));
  return bundle;
}

// Oracle cost from `state` to goal hypothesis `goal` of a compiled map.
inline std::optional<int> OracleCost(const BoardMap& map, const Domain& domain, const State& state,
                                     std::size_t goal) {
  const Board& board = GetBoard(map);
  int agent = -1;
  std::vector<int> boxes;
  state.facts().ForEach([&](FactId f) {
    const std::string& name = domain.fact_name(f);
    const auto at = name.rfind('_');
    const int cell = std::stoi(name.substr(at + 1)) - 1;
    if (name.starts_with("at_cell_") || name.starts_with("agent_at_")) {
      agent = cell;
    } else if (name.starts_with("box")) {
      const int box = std::stoi(name.substr(3, name.find('_') - 3)) - 1;
      if (static_cast<int>(boxes.size()) <= box) boxes.resize(box + 1, -1);
      boxes[box] = cell;
    }
  });
  if (const auto* grid = std::get_if<GridMap>(&map)) {
    return oracle::GridDistance(board.rows, board.cols, board.walls, agent, grid->goals[goal]);
  }
  const auto& sokoban = std::get<SokobanMap>(map);
  return oracle::SokobanDistance(board.rows, board.cols, board.walls, agent, boxes,
                                 sokoban.goals[goal], sokoban.push_chain_limit)
      .distance;
}

}  // namespace xgr::testing
