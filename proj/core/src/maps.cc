#include "xgr/maps.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "xgr/bundle.h"
#include "xgr/error.h"

namespace xgr {

std::string_view ToString(Direction d) {
  switch (d) {
    case Direction::kUp: return "up";
    case Direction::kDown: return "down";
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
  }
  return "?";
}

int Step(const Board& board, int index, Direction d) {
  int row = board.Row(index);
  int col = board.Col(index);
  switch (d) {
    case Direction::kUp: --row; break;
    case Direction::kDown: ++row; break;
    case Direction::kLeft: --col; break;
    case Direction::kRight: ++col; break;
  }
  return board.InBounds(row, col) ? board.Index(row, col) : -1;
}

const Board& GetBoard(const BoardMap& map) {
  return std::visit([](const auto& m) -> const Board& { return m.board; }, map);
}

std::string GridFactName(int index) { return "at_cell_" + std::to_string(Board::Number(index)); }
std::string AgentFactName(int index) { return "agent_at_" + std::to_string(Board::Number(index)); }
std::string BoxFactName(int box, int index) {
  return "box" + std::to_string(box + 1) + "_at_" + std::to_string(Board::Number(index));
}
std::string ClearFactName(int index) { return "clear_" + std::to_string(Board::Number(index)); }

namespace {

std::optional<int> ParseInt(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Cell index encoded in a position fact name with the given prefix.
std::optional<int> CellOf(std::string_view name, std::string_view prefix) {
  if (!name.starts_with(prefix)) return std::nullopt;
  auto n = ParseInt(name.substr(prefix.size()));
  if (!n || *n < 1) return std::nullopt;
  return *n - 1;
}

// "box<b>_at_<n>" -> (b - 1, n - 1)
std::optional<std::pair<int, int>> BoxCellOf(std::string_view name) {
  if (!name.starts_with("box")) return std::nullopt;
  const auto sep = name.find("_at_");
  if (sep == std::string_view::npos) return std::nullopt;
  auto b = ParseInt(name.substr(3, sep - 3));
  auto n = ParseInt(name.substr(sep + 4));
  if (!b || !n || *b < 1 || *n < 1) return std::nullopt;
  return std::make_pair(*b - 1, *n - 1);
}

int Manhattan(int a, int b, int cols) {
  return std::abs(a / cols - b / cols) + std::abs(a % cols - b % cols);
}

void CheckCell(const Board& board, int cell, const std::string& what) {
  if (cell < 0 || cell >= board.size()) {
    throw InvalidArgumentError(what + " is outside the board");
  }
  if (board.walls[cell]) throw InvalidArgumentError(what + " is on a wall");
}

void CheckBoard(const Board& board) {
  if (board.rows <= 0 || board.cols <= 0) throw InvalidArgumentError("empty board");
  if (static_cast<int>(board.walls.size()) != board.size()) {
    throw InvalidArgumentError("wall mask does not match the board size");
  }
}

}  // namespace

std::optional<int> AgentCell(const Domain& domain, const State& state) {
  std::optional<int> cell;
  state.facts().ForEach([&](FactId f) {
    if (cell) return;
    const auto& name = domain.fact_name(f);
    if (auto c = CellOf(name, "at_cell_")) cell = c;
    else if (auto a = CellOf(name, "agent_at_")) cell = a;
  });
  return cell;
}

void ValidateMap(const GridMap& map) {
  CheckBoard(map.board);
  CheckCell(map.board, map.agent, "agent");
  std::set<int> seen;
  for (std::size_t j = 0; j < map.goals.size(); ++j) {
    CheckCell(map.board, map.goals[j], "goal g" + std::to_string(j + 1));
    if (!seen.insert(map.goals[j]).second) {
      throw InvalidArgumentError("two goals share cell " + std::to_string(Board::Number(map.goals[j])));
    }
  }
}

void ValidateMap(const SokobanMap& map) {
  CheckBoard(map.board);
  CheckCell(map.board, map.agent, "agent");
  if (map.push_chain_limit < 1) throw InvalidArgumentError("push-chain limit must be at least 1");
  const auto free_cells = std::count(map.board.walls.begin(), map.board.walls.end(), false);
  if (static_cast<long>(map.boxes.size()) + 1 > free_cells) {
    throw InvalidArgumentError("boxes exceed the free cells of the board");
  }
  std::set<int> occupied{map.agent};
  for (std::size_t b = 0; b < map.boxes.size(); ++b) {
    CheckCell(map.board, map.boxes[b], "box " + std::to_string(b + 1));
    if (!occupied.insert(map.boxes[b]).second) {
      throw InvalidArgumentError("box " + std::to_string(b + 1) + " overlaps another object");
    }
  }
  for (std::size_t j = 0; j < map.goals.size(); ++j) {
    if (map.goals[j].empty()) throw InvalidArgumentError("goal g" + std::to_string(j + 1) + " is empty");
    for (const auto& [box, cell] : map.goals[j]) {
      if (box < 0 || box >= static_cast<int>(map.boxes.size())) {
        throw InvalidArgumentError("goal g" + std::to_string(j + 1) + " names an unknown box");
      }
      CheckCell(map.board, cell, "goal g" + std::to_string(j + 1));
    }
  }
}

BoardMap ParseMap(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }

  std::string type = "grid";
  int push_limit = 1;
  std::vector<std::pair<std::size_t, std::string>> goal_lines;
  std::size_t n = 0;
  bool found_map = false;
  for (; n < lines.size(); ++n) {
    std::istringstream words(lines[n]);
    std::string keyword;
    if (!(words >> keyword) || keyword.starts_with("#")) continue;
    if (keyword == "map") {
      found_map = true;
      ++n;
      break;
    }
    std::string rest;
    std::getline(words, rest);
    if (keyword == "type") {
      std::istringstream r(rest);
      r >> type;
      if (type != "grid" && type != "sokoban") {
        throw ParseError("unknown map type '" + type + "'", n + 1);
      }
    } else if (keyword == "push-limit") {
      std::istringstream r(rest);
      std::string value;
      r >> value;
      auto v = ParseInt(value);
      if (!v) throw ParseError("invalid push-limit", n + 1);
      push_limit = *v;
    } else if (keyword == "goal") {
      goal_lines.emplace_back(n + 1, rest);
    } else {
      throw ParseError("unknown map directive '" + keyword + "'", n + 1);
    }
  }
  if (!found_map) throw ParseError("missing 'map' line");

  std::vector<std::string> rows(lines.begin() + static_cast<long>(n), lines.end());
  while (!rows.empty() && rows.back().find_first_not_of(' ') == std::string::npos) rows.pop_back();
  if (rows.empty()) throw ParseError("map has no rows");

  Board board;
  board.rows = static_cast<int>(rows.size());
  board.cols = static_cast<int>(rows[0].size());
  board.walls.assign(static_cast<std::size_t>(board.rows * board.cols), false);
  int agent = -1;
  std::vector<int> boxes;
  std::map<int, int> markers;
  for (int r = 0; r < board.rows; ++r) {
    const std::size_t line_no = n + static_cast<std::size_t>(r) + 1;
    if (static_cast<int>(rows[r].size()) != board.cols) {
      throw ParseError("map rows must have equal length", line_no);
    }
    for (int c = 0; c < board.cols; ++c) {
      const char ch = rows[r][c];
      const int index = board.Index(r, c);
      const auto column = static_cast<std::size_t>(c) + 1;
      if (ch == '#') {
        board.walls[index] = true;
      } else if (ch == '@') {
        if (agent >= 0) throw ParseError("more than one agent", line_no, column);
        agent = index;
      } else if (ch == '$') {
        boxes.push_back(index);
      } else if (ch >= '1' && ch <= '9') {
        if (!markers.emplace(ch - '0', index).second) {
          throw ParseError(std::string("duplicate marker '") + ch + "'", line_no, column);
        }
      } else if (ch != '.' && ch != ' ') {
        throw ParseError(std::string("unexpected map character '") + ch + "'", line_no, column);
      }
    }
  }
  if (agent < 0) throw ParseError("map has no agent '@'");

  auto marker_cell = [&](std::string_view token, std::size_t line_no) {
    auto digit = ParseInt(token);
    if (!digit || !markers.contains(*digit)) {
      throw ParseError("unknown goal marker '" + std::string(token) + "'", line_no);
    }
    return markers.at(*digit);
  };

  try {
    if (type == "grid") {
      if (!boxes.empty()) throw ParseError("grid maps cannot contain boxes");
      GridMap map{board, agent, {}};
      if (goal_lines.empty()) {
        for (const auto& [digit, cell] : markers) map.goals.push_back(cell);
      }
      for (const auto& [line_no, rest] : goal_lines) {
        std::istringstream words(rest);
        std::string token, extra;
        if (!(words >> token) || (words >> extra)) {
          throw ParseError("grid goals name exactly one marker", line_no);
        }
        map.goals.push_back(marker_cell(token, line_no));
      }
      ValidateMap(map);
      return map;
    }

    SokobanMap map{board, agent, boxes, {}, push_limit};
    for (const auto& [line_no, rest] : goal_lines) {
      std::istringstream words(rest);
      std::string token;
      std::vector<std::pair<int, int>> goal;
      while (words >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || !token.starts_with("box")) {
          throw ParseError("expected box<b>=<marker>, found '" + token + "'", line_no);
        }
        auto box = ParseInt(std::string_view(token).substr(3, eq - 3));
        if (!box || *box < 1) throw ParseError("invalid box in '" + token + "'", line_no);
        goal.emplace_back(*box - 1, marker_cell(std::string_view(token).substr(eq + 1), line_no));
      }
      map.goals.push_back(std::move(goal));
    }
    ValidateMap(map);
    return map;
  } catch (const InvalidArgumentError& e) {
    throw ParseError(e.what());
  }
}

std::string SerializeMap(const BoardMap& map) {
  const Board& board = GetBoard(map);
  std::vector<std::string> rows(static_cast<std::size_t>(board.rows),
                                std::string(static_cast<std::size_t>(board.cols), '.'));
  auto put = [&](int index, char ch) {
    char& slot = rows[board.Row(index)][board.Col(index)];
    if (slot != '.') throw InvalidArgumentError("map objects overlap at cell " + std::to_string(Board::Number(index)));
    slot = ch;
  };
  for (int i = 0; i < board.size(); ++i) {
    if (board.walls[i]) put(i, '#');
  }

  std::ostringstream out;
  if (const auto* grid = std::get_if<GridMap>(&map)) {
    out << "type grid\n";
    put(grid->agent, '@');
    for (std::size_t j = 0; j < grid->goals.size(); ++j) {
      put(grid->goals[j], static_cast<char>('1' + j));
      out << "goal " << j + 1 << '\n';
    }
  } else {
    const auto& sokoban = std::get<SokobanMap>(map);
    out << "type sokoban\npush-limit " << sokoban.push_chain_limit << '\n';
    put(sokoban.agent, '@');
    for (int box : sokoban.boxes) put(box, '$');
    std::map<int, int> digit_of_cell;
    for (const auto& goal : sokoban.goals) {
      out << "goal";
      for (const auto& [box, cell] : goal) {
        auto it = digit_of_cell.find(cell);
        if (it == digit_of_cell.end()) {
          const int digit = static_cast<int>(digit_of_cell.size()) + 1;
          if (digit > 9) throw InvalidArgumentError("at most nine goal markers per map");
          it = digit_of_cell.emplace(cell, digit).first;
          put(cell, static_cast<char>('0' + digit));
        }
        out << " box" << box + 1 << '=' << it->second;
      }
      out << '\n';
    }
  }
  out << "map\n";
  for (const auto& row : rows) out << row << '\n';
  return out.str();
}

GridDistanceHeuristic::GridDistanceHeuristic(const Domain& domain, const Board& board)
    : cols_(board.cols), cell_of_fact_(domain.num_facts(), -1) {
  for (FactId f = 0; f < domain.num_facts(); ++f) {
    if (auto c = CellOf(domain.fact_name(f), "at_cell_")) cell_of_fact_[f] = *c;
  }
}

Cost GridDistanceHeuristic::Estimate(const State& state, const FactSet& goal) const {
  int agent = -1;
  state.facts().ForEach([&](FactId f) {
    if (agent < 0 && cell_of_fact_[f] >= 0) agent = cell_of_fact_[f];
  });
  if (agent < 0) return Cost(0);
  int best = 0;
  goal.ForEach([&](FactId f) {
    if (cell_of_fact_[f] >= 0) best = std::max(best, Manhattan(agent, cell_of_fact_[f], cols_));
  });
  return Cost(best);
}

BoxDistanceHeuristic::BoxDistanceHeuristic(const Domain& domain, const Board& board,
                                           int num_boxes)
    : cols_(board.cols), box_fact_(domain.num_facts(), {-1, -1}) {
  for (FactId f = 0; f < domain.num_facts(); ++f) {
    if (auto bc = BoxCellOf(domain.fact_name(f)); bc && bc->first < num_boxes) {
      box_fact_[f] = *bc;
    }
  }
}

Cost BoxDistanceHeuristic::Estimate(const State& state, const FactSet& goal) const {
  std::map<int, int> box_cell;
  state.facts().ForEach([&](FactId f) {
    if (box_fact_[f].first >= 0) box_cell[box_fact_[f].first] = box_fact_[f].second;
  });
  int best = 0;
  goal.ForEach([&](FactId f) {
    const auto [box, cell] = box_fact_[f];
    if (box < 0) return;
    auto it = box_cell.find(box);
    if (it != box_cell.end()) best = std::max(best, Manhattan(it->second, cell, cols_));
  });
  return Cost(best);
}

ScenarioBundle CompileGrid(const GridMap& map) {
  ValidateMap(map);
  const Board& board = map.board;
  DomainBuilder builder;
  for (int i = 0; i < board.size(); ++i) {
    if (board.IsFree(i)) builder.AddFact(GridFactName(i));
  }
  for (int i = 0; i < board.size(); ++i) {
    if (!board.IsFree(i)) continue;
    for (Direction d : kDirections) {
      const int to = Step(board, i, d);
      if (!board.IsFree(to)) continue;
      builder.AddAction("move_" + std::string(ToString(d)) + "_" +
                            std::to_string(Board::Number(i)) + "_" +
                            std::to_string(Board::Number(to)),
                        {GridFactName(i)}, {GridFactName(to)}, {GridFactName(i)});
    }
  }

  ScenarioBundle bundle;
  bundle.domain = builder.Build();
  const std::vector<std::string> init{GridFactName(map.agent)};
  bundle.initial = bundle.domain->MakeState(init);
  for (int goal : map.goals) {
    const std::vector<std::string> facts{GridFactName(goal)};
    bundle.hypotheses.push_back(bundle.domain->MakeFactSet(facts));
  }
  bundle.vocab = GridVocabulary();
  bundle.map = map;
  bundle.heuristics = HeuristicRegistry(*bundle.domain);
  bundle.heuristics.Register(std::make_shared<GridDistanceHeuristic>(*bundle.domain, board));
  return bundle;
}

namespace {

void OrderedSelections(int n, int k, std::vector<int>& current, std::vector<bool>& used,
                       std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == k) {
    out.push_back(current);
    return;
  }
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = true;
    current.push_back(i);
    OrderedSelections(n, k, current, used, out);
    current.pop_back();
    used[i] = false;
  }
}

}  // namespace

ScenarioBundle CompileSokoban(const SokobanMap& map) {
  ValidateMap(map);
  const Board& board = map.board;
  const int num_boxes = static_cast<int>(map.boxes.size());
  DomainBuilder builder;
  for (int i = 0; i < board.size(); ++i) {
    if (board.IsFree(i)) builder.AddFact(AgentFactName(i));
  }
  for (int b = 0; b < num_boxes; ++b) {
    for (int i = 0; i < board.size(); ++i) {
      if (board.IsFree(i)) builder.AddFact(BoxFactName(b, i));
    }
  }
  for (int i = 0; i < board.size(); ++i) {
    if (board.IsFree(i)) builder.AddFact(ClearFactName(i));
  }

  std::vector<std::vector<std::vector<int>>> selections(static_cast<std::size_t>(map.push_chain_limit) + 1);
  for (int k = 1; k <= std::min(map.push_chain_limit, num_boxes); ++k) {
    std::vector<int> current;
    std::vector<bool> used(static_cast<std::size_t>(num_boxes), false);
    OrderedSelections(num_boxes, k, current, used, selections[k]);
  }

  for (int a = 0; a < board.size(); ++a) {
    if (!board.IsFree(a)) continue;
    for (Direction d : kDirections) {
      const std::string dir(ToString(d));
      const int next = Step(board, a, d);
      if (!board.IsFree(next)) continue;
      const std::string from = std::to_string(Board::Number(a));
      const std::string to = std::to_string(Board::Number(next));
      builder.AddAction("move_" + dir + "_" + from + "_" + to,
                        {AgentFactName(a), ClearFactName(next)}, {AgentFactName(next)},
                        {AgentFactName(a)});

      // line[0..k-1] hold the pushed boxes, line[k] is the cell they move into.
      std::vector<int> line{next};
      for (int k = 1; k <= std::min(map.push_chain_limit, num_boxes); ++k) {
        const int beyond = Step(board, line.back(), d);
        if (!board.IsFree(beyond)) break;
        line.push_back(beyond);
        for (const auto& boxes : selections[k]) {
          std::string name = "push_" + dir + "_" + from + "_" + to;
          std::vector<std::string> pre{AgentFactName(a), ClearFactName(line[k])};
          std::vector<std::string> add{AgentFactName(next), ClearFactName(next)};
          std::vector<std::string> del{AgentFactName(a), ClearFactName(line[k])};
          for (int p = 0; p < k; ++p) {
            name += "_box" + std::to_string(boxes[p] + 1);
            pre.push_back(BoxFactName(boxes[p], line[p]));
            del.push_back(BoxFactName(boxes[p], line[p]));
            add.push_back(BoxFactName(boxes[p], line[p + 1]));
          }
          builder.AddAction(std::move(name), std::move(pre), std::move(add), std::move(del));
        }
      }
    }
  }

  ScenarioBundle bundle;
  bundle.domain = builder.Build();
  std::vector<std::string> init{AgentFactName(map.agent)};
  std::set<int> box_cells(map.boxes.begin(), map.boxes.end());
  for (int b = 0; b < num_boxes; ++b) init.push_back(BoxFactName(b, map.boxes[b]));
  for (int i = 0; i < board.size(); ++i) {
    if (board.IsFree(i) && !box_cells.contains(i)) init.push_back(ClearFactName(i));
  }
  bundle.initial = bundle.domain->MakeState(init);
  for (const auto& goal : map.goals) {
    std::vector<std::string> facts;
    for (const auto& [box, cell] : goal) facts.push_back(BoxFactName(box, cell));
    bundle.hypotheses.push_back(bundle.domain->MakeFactSet(facts));
  }
  bundle.vocab = SokobanVocabulary();
  bundle.map = map;
  bundle.heuristics = HeuristicRegistry(*bundle.domain);
  bundle.heuristics.Register(
      std::make_shared<BoxDistanceHeuristic>(*bundle.domain, board, num_boxes));
  return bundle;
}

ScenarioBundle CompileMap(const BoardMap& map) {
  if (const auto* grid = std::get_if<GridMap>(&map)) return CompileGrid(*grid);
  return CompileSokoban(std::get<SokobanMap>(map));
}

}  // namespace xgr
