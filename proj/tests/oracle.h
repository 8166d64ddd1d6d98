// Reference implementations used only by tests. They share no code with the
// library beyond plain data (board dimensions and walls), so agreement with
// them is evidence rather than tautology.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Breadth-first distance on a 4-connected grid; nullopt when unreachable.
inline std::optional<int> GridDistance(int rows, int cols, const std::vector<bool>& walls,
                                       int from, int to) {
  if (walls[from] || walls[to]) return std::nullopt;
  std::vector<int> dist(rows * cols, -1);
  std::queue<int> frontier;
  dist[from] = 0;
  frontier.push(from);
  while (!frontier.empty()) {
    const int cell = frontier.front();
    frontier.pop();
    if (cell == to) return dist[cell];
    const int r = cell / cols, c = cell % cols;
    const int dr[] = {-1, 1, 0, 0};
    const int dc[] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      const int nr = r + dr[k], nc = c + dc[k];
      if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
      const int next = nr * cols + nc;
      if (walls[next] || dist[next] >= 0) continue;
      dist[next] = dist[cell] + 1;
      frontier.push(next);
    }
  }
  return std::nullopt;
}

inline std::size_t GridReachable(int rows, int cols, const std::vector<bool>& walls, int from) {
  std::size_t count = 0;
  for (int cell = 0; cell < rows * cols; ++cell) {
    if (GridDistance(rows, cols, walls, from, cell)) ++count;
  }
  return count;
}

// Sokoban with chain pushes: walking into a line of k boxes shoves all of
// them one cell when k <= push_limit and the cell past the line is open floor.
struct SokobanResult {
  std::optional<int> distance;
  std::size_t states_seen = 0;
  bool truncated = false;
};

inline SokobanResult SokobanDistance(int rows, int cols, const std::vector<bool>& walls, int agent,
                                     const std::vector<int>& boxes,
                                     const std::vector<std::pair<int, int>>& goal,
                                     int push_limit, std::size_t max_states = 200000) {
  using Key = std::vector<int>;  // agent followed by box cells, in box order
  auto satisfied = [&](const Key& s) {
    return std::all_of(goal.begin(), goal.end(),
                       [&](const auto& bc) { return s[1 + bc.first] == bc.second; });
  };
  Key start{agent};
  start.insert(start.end(), boxes.begin(), boxes.end());
  std::map<Key, int> dist{{start, 0}};
  std::queue<Key> frontier;
  frontier.push(start);
  SokobanResult result;
  while (!frontier.empty()) {
    Key s = frontier.front();
    frontier.pop();
    if (satisfied(s)) {
      result.distance = dist[s];
      break;
    }
    const int r = s[0] / cols, c = s[0] % cols;
    const int dr[] = {-1, 1, 0, 0};
    const int dc[] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      auto cell_at = [&](int steps) -> int {
        const int nr = r + dr[k] * steps, nc = c + dc[k] * steps;
        if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) return -1;
        return nr * cols + nc;
      };
      auto box_at = [&](int cell) {
        for (std::size_t b = 1; b < s.size(); ++b) {
          if (s[b] == cell) return static_cast<int>(b);
        }
        return -1;
      };
      const int first = cell_at(1);
      if (first < 0 || walls[first]) continue;
      Key next = s;
      int line = 0;
      while (true) {
        const int cell = cell_at(line + 1);
        if (cell < 0 || walls[cell] || box_at(cell) < 0) break;
        ++line;
      }
      if (line > 0) {
        if (line > push_limit) continue;
        const int beyond = cell_at(line + 1);
        if (beyond < 0 || walls[beyond]) continue;
        for (int j = 1; j <= line; ++j) next[box_at(cell_at(j))] = cell_at(j + 1);
      }
      next[0] = first;
      if (dist.contains(next)) continue;
      if (dist.size() >= max_states) {
        result.truncated = true;
        continue;
      }
      dist[next] = dist[s] + 1;
      frontier.push(std::move(next));
    }
  }
  result.states_seen = dist.size();
  return result;
}

// All weight-of-evidence entries recomputed from raw posteriors:
// probabilities[step][goal], step 0 being the prior state.
struct Entry {
  std::size_t goal;
  std::size_t other;
  std::size_t step;
  double woe;
};

inline std::vector<Entry> AllEntries(const std::vector<std::vector<double>>& probabilities,
                                     double eps) {
  std::vector<Entry> out;
  for (std::size_t step = 1; step < probabilities.size(); ++step) {
    const auto& p = probabilities[step];
    const double top = *std::max_element(p.begin(), p.end());
    for (std::size_t g = 0; g < p.size(); ++g) {
      if (p[g] < top - eps) continue;
      for (std::size_t h = 0; h < p.size(); ++h) {
        if (p[h] >= top - eps) continue;
        out.push_back({g, h, step, std::log(p[g] / p[h])});
      }
    }
  }
  return out;
}

// Steps at the extreme WoE among entries for `goal` (as predicted when
// `why`, as counterfactual otherwise). Empty when there are none.
inline std::vector<std::size_t> Markers(const std::vector<Entry>& entries, std::size_t goal,
                                        bool why, double eps) {
  std::optional<double> best;
  for (const auto& e : entries) {
    if ((why ? e.goal : e.other) != goal) continue;
    if (!best || (why ? e.woe > *best : e.woe < *best)) best = e.woe;
  }
  std::set<std::size_t> steps;
  if (!best) return {};
  for (const auto& e : entries) {
    if ((why ? e.goal : e.other) == goal && std::abs(e.woe - *best) <= eps) steps.insert(e.step);
  }
  return {steps.begin(), steps.end()};
}

}  // namespace oracle
