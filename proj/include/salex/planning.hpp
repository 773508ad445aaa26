#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "salex/grid_map.hpp"
#include "salex/perception.hpp"

namespace salex {

struct PathResult {
  std::vector<std::int32_t> cells;
  double cost_m = 0.0;
};

// Single-source distances over the free 8-connected subgraph. Unknown cells
// are not traversable: the planner only commits to mapped space.
struct DistanceField {
  std::vector<double> dist_m;
  std::vector<std::int32_t> parent;  // -1 at the source and unreached cells

  bool reached(std::int32_t i) const {
    return dist_m[i] != std::numeric_limits<double>::infinity();
  }
};

inline DistanceField dijkstra_free(const GridMap& map, std::int32_t source) {
  if (map.at(source) != CellState::Free)
    throw PoseError("dijkstra_free: source cell is not free");
  const int w = map.width(), h = map.height();
  const double straight = map.resolution();
  const double diagonal = map.resolution() * std::sqrt(2.0);

  DistanceField field;
  field.dist_m.assign(map.size(), std::numeric_limits<double>::infinity());
  field.parent.assign(map.size(), -1);
  field.dist_m[source] = 0.0;

  using Entry = std::pair<double, std::int32_t>;  // ties resolved by index
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  queue.push({0.0, source});
  while (!queue.empty()) {
    auto [d, i] = queue.top();
    queue.pop();
    if (d > field.dist_m[i]) continue;
    int x = map.x_of(i), y = map.y_of(i);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        std::int32_t ni = ny * w + nx;
        if (map.at(ni) != CellState::Free) continue;
        double nd = d + ((dx != 0 && dy != 0) ? diagonal : straight);
        if (nd < field.dist_m[ni]) {
          field.dist_m[ni] = nd;
          field.parent[ni] = i;
          queue.push({nd, ni});
        }
      }
  }
  return field;
}

inline std::optional<PathResult> extract_path(const DistanceField& field,
                                              std::int32_t to) {
  if (!field.reached(to)) return std::nullopt;
  PathResult r;
  r.cost_m = field.dist_m[to];
  for (std::int32_t i = to; i != -1; i = field.parent[i]) r.cells.push_back(i);
  std::reverse(r.cells.begin(), r.cells.end());
  return r;
}

inline std::optional<PathResult> shortest_path(const GridMap& map,
                                               std::int32_t from,
                                               std::int32_t to) {
  map.at(to);  // bounds check
  if (map.at(from) != CellState::Free)
    throw PoseError("shortest_path: start cell is not free");
  if (from == to) return PathResult{{from}, 0.0};
  DistanceField field = dijkstra_free(map, from);
  return extract_path(field, to);
}

// Path distance from the robot to every frontier's navigation target, all
// from one sweep. Unreachable frontiers come back empty.
inline std::vector<std::optional<double>> distances_to_frontiers(
    const GridMap& map, const Pose& pose, const std::vector<Frontier>& frontiers) {
  RationalPoint p = point_from_double(pose.x, pose.y);
  int px = p.round_x(), py = p.round_y();
  if (!map.in_bounds(px, py) || map.at(px, py) != CellState::Free)
    throw PoseError("distances_to_frontiers: pose cell is not free");
  DistanceField field = dijkstra_free(map, map.index(px, py));
  std::vector<std::optional<double>> out;
  out.reserve(frontiers.size());
  for (const Frontier& f : frontiers) {
    std::int32_t target = frontier_target_cell(map, f);
    if (field.reached(target)) out.emplace_back(field.dist_m[target]);
    else out.emplace_back(std::nullopt);
  }
  return out;
}

}  // namespace salex
