#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xgr/planner.h"
#include "xgr/strips.h"

namespace xgr {

// Cells are addressed by 0-based row-major index; fact and action names use
// the 1-based cell number (index + 1) so that a 5x9 board numbers its cells
// 1..45 left to right, top to bottom.
struct Board {
  int rows = 0;
  int cols = 0;
  std::vector<bool> walls;

  int size() const { return rows * cols; }
  bool InBounds(int row, int col) const {
    return row >= 0 && row < rows && col >= 0 && col < cols;
  }
  bool IsFree(int index) const { return index >= 0 && index < size() && !walls[index]; }
  int Index(int row, int col) const { return row * cols + col; }
  int Row(int index) const { return index / cols; }
  int Col(int index) const { return index % cols; }
  static int Number(int index) { return index + 1; }
};

enum class Direction { kUp, kDown, kLeft, kRight };
inline constexpr Direction kDirections[] = {Direction::kUp, Direction::kDown,
                                            Direction::kLeft, Direction::kRight};
std::string_view ToString(Direction d);
// Neighbor index in direction d, or -1 when it leaves the board.
int Step(const Board& board, int index, Direction d);

struct GridMap {
  Board board;
  int agent = -1;
  // Goal hypothesis j is "agent at goals[j]".
  std::vector<int> goals;
};

struct SokobanMap {
  Board board;
  int agent = -1;
  // Box b (1-based in names) starts at boxes[b].
  std::vector<int> boxes;
  // Each hypothesis assigns destination cells to some boxes: (box, cell).
  std::vector<std::vector<std::pair<int, int>>> goals;
  int push_chain_limit = 1;
};

using BoardMap = std::variant<GridMap, SokobanMap>;

const Board& GetBoard(const BoardMap& map);

// Map DSL:
//
//   type sokoban          # or: type grid
//   push-limit 2          # sokoban only, default 1
//   goal box1=1 box2=2    # sokoban: box destinations by marker digit
//   goal 3                # grid: one marker digit per goal
//   map
//   #########
//   #@.$..1.#
//
// Board characters: '#' wall, '.' floor, '@' agent, '$' box, '1'-'9' goal
// markers (floor). Boxes are numbered in row-major order. A grid map without
// goal lines uses every marker in ascending digit order.
BoardMap ParseMap(std::string_view text);
std::string SerializeMap(const BoardMap& map);

// Throws InvalidArgumentError for agents, boxes or goals off the board or on
// walls, a push-chain limit below 1, or more boxes than free cells.
void ValidateMap(const GridMap& map);
void ValidateMap(const SokobanMap& map);

std::string GridFactName(int index);                // at_cell_<n>
std::string AgentFactName(int index);               // agent_at_<n>
std::string BoxFactName(int box, int index);        // box<b>_at_<n>
std::string ClearFactName(int index);               // clear_<n>

// Cell index of the agent in `state` for either map kind, if any.
std::optional<int> AgentCell(const Domain& domain, const State& state);

// Exact grid distance lower bound: max over goal facts at_cell_k of the
// Manhattan distance from the agent.
class GridDistanceHeuristic final : public Heuristic {
 public:
  GridDistanceHeuristic(const Domain& domain, const Board& board);
  std::string_view name() const override { return "grid-manhattan"; }
  Cost Estimate(const State& state, const FactSet& goal) const override;

 private:
  int cols_;
  std::vector<int> cell_of_fact_;  // -1 for non-position facts
};

// Max over goal facts box<b>_at_k of the Manhattan distance of box b to k.
// Every action moves each box by at most one cell.
class BoxDistanceHeuristic final : public Heuristic {
 public:
  BoxDistanceHeuristic(const Domain& domain, const Board& board, int num_boxes);
  std::string_view name() const override { return "box-distance"; }
  Cost Estimate(const State& state, const FactSet& goal) const override;

 private:
  int cols_;
  // Per fact: (box, cell) for box position facts, (-1, -1) otherwise.
  std::vector<std::pair<int, int>> box_fact_;
};

}  // namespace xgr
