#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "salex/grid_map.hpp"
#include "salex/raycast.hpp"

namespace salex {

struct SensorModel {
  double range_m = 10.0;
  double fov_rad = kTwoPi;
  int ray_count = 720;
};

inline void validate_sensor(const SensorModel& s) {
  if (!(s.range_m > 0.0)) throw ParamError("sensor: range must be > 0");
  if (!(s.fov_rad > 0.0) || s.fov_rad > kTwoPi + 1e-9)
    throw ParamError("sensor: fov must be in (0, 2*pi]");
  if (s.ray_count < 1) throw ParamError("sensor: ray_count must be >= 1");
}

// Maximal 8-connected component of free cells that touch unknown space.
// cells is sorted ascending; centroid is the plain mean of cell coordinates,
// kept alongside as exact integer sums for downstream geometry.
struct Frontier {
  std::vector<std::int32_t> cells;
  std::int64_t sum_x = 0;
  std::int64_t sum_y = 0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  int length = 0;

  std::int32_t first_cell() const { return cells.front(); }
  RationalPoint centroid_point() const { return {sum_x, sum_y, length}; }
};

inline bool is_frontier_cell(const GridMap& map, int x, int y) {
  if (map.at(x, y) != CellState::Free) return false;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      int nx = x + dx, ny = y + dy;
      if (map.in_bounds(nx, ny) && map.at(nx, ny) == CellState::Unknown)
        return true;
    }
  return false;
}

// Frontiers in deterministic order: grouped by BFS from ascending seeds, so
// the list is sorted by each frontier's smallest cell index.
inline std::vector<Frontier> detect_frontiers(const GridMap& map,
                                              int min_length = 3) {
  if (min_length < 1) throw ParamError("detect_frontiers: min_length >= 1");
  const int w = map.width(), h = map.height();
  std::vector<bool> mask(static_cast<std::size_t>(w) * h, false);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) mask[y * w + x] = is_frontier_cell(map, x, y);

  std::vector<Frontier> out;
  std::vector<bool> seen(mask.size(), false);
  std::vector<std::int32_t> queue;
  for (std::int32_t seed = 0; seed < map.size(); ++seed) {
    if (!mask[seed] || seen[seed]) continue;
    Frontier f;
    queue.clear();
    queue.push_back(seed);
    seen[seed] = true;
    while (!queue.empty()) {
      std::int32_t i = queue.back();
      queue.pop_back();
      f.cells.push_back(i);
      int x = map.x_of(i), y = map.y_of(i);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          int nx = x + dx, ny = y + dy;
          if (!map.in_bounds(nx, ny)) continue;
          std::int32_t ni = ny * w + nx;
          if (mask[ni] && !seen[ni]) {
            seen[ni] = true;
            queue.push_back(ni);
          }
        }
    }
    if (static_cast<int>(f.cells.size()) < min_length) continue;
    std::sort(f.cells.begin(), f.cells.end());
    f.length = static_cast<int>(f.cells.size());
    for (std::int32_t i : f.cells) {
      f.sum_x += map.x_of(i);
      f.sum_y += map.y_of(i);
    }
    f.centroid_x = static_cast<double>(f.sum_x) / f.length;
    f.centroid_y = static_cast<double>(f.sum_y) / f.length;
    out.push_back(std::move(f));
  }
  return out;
}

// Viewpoint a frontier is evaluated (and navigated) from: the exact centroid
// when its nearest cell is free on the map, otherwise the frontier cell
// closest to the centroid (ties to the smaller index). Averaging a concave
// chain can park the centroid inside a wall; the snap keeps it reachable.
inline RationalPoint ig_origin(const GridMap& map, const Frontier& f) {
  RationalPoint c = f.centroid_point();
  int rx = c.round_x(), ry = c.round_y();
  if (map.in_bounds(rx, ry) && map.at(rx, ry) == CellState::Free)
    return c.normalized();
  std::int64_t best = -1;
  std::int32_t best_cell = f.cells.front();
  for (std::int32_t i : f.cells) {
    std::int64_t dx = static_cast<std::int64_t>(map.x_of(i)) * f.length - f.sum_x;
    std::int64_t dy = static_cast<std::int64_t>(map.y_of(i)) * f.length - f.sum_y;
    std::int64_t d2 = dx * dx + dy * dy;
    if (best < 0 || d2 < best) {
      best = d2;
      best_cell = i;
    }
  }
  return cell_center(map.x_of(best_cell), map.y_of(best_cell));
}

// Cell the planner steers to for this frontier.
inline std::int32_t frontier_target_cell(const GridMap& map, const Frontier& f) {
  RationalPoint o = ig_origin(map, f);
  return map.index(o.round_x(), o.round_y());
}

// Deterministic noise-free LiDAR: every in-bounds cell whose center is
// within range, inside the field of view, and in line of sight gets
// observed; obstacle cells report their own surface.
inline Scan simulate_scan(const GridMap& ground_truth, const Pose& pose,
                          const SensorModel& sensor) {
  validate_sensor(sensor);
  RationalPoint origin = point_from_double(pose.x, pose.y);
  int px = origin.round_x(), py = origin.round_y();
  if (!ground_truth.in_bounds(px, py))
    throw PoseError("simulate_scan: pose out of bounds");
  if (ground_truth.at(px, py) != CellState::Free)
    throw PoseError("simulate_scan: pose cell is not free");

  double range_cells = sensor.range_m / ground_truth.resolution();
  Scan scan;
  for_each_visible(
      ground_truth.width(), ground_truth.height(), origin, range_cells,
      pose.heading, sensor.fov_rad,
      [&](int x, int y) { return ground_truth.at(x, y) == CellState::Obstacle; },
      [&](int x, int y) {
        CellState s = ground_truth.at(x, y) == CellState::Obstacle
                          ? CellState::Obstacle
                          : CellState::Free;
        scan.observations.push_back({ground_truth.index(x, y), s});
      });
  return scan;
}

namespace detail {

// Unknown cells of `map` that are in unblocked line of sight of origin,
// full-circle, within range. `blocks` is the raw blocking predicate.
template <typename Blocks>
inline std::vector<std::int32_t> visible_unknown_cells(const GridMap& map,
                                                       const RationalPoint& origin,
                                                       double range_cells,
                                                       Blocks&& blocks) {
  std::vector<std::int32_t> cells;
  const auto origin_touch = touching_cells(origin);
  const double ox = origin.x(), oy = origin.y();
  int r = static_cast<int>(std::ceil(range_cells)) + 1;
  int x0 = std::max(0, static_cast<int>(std::floor(ox)) - r);
  int x1 = std::min(map.width() - 1, static_cast<int>(std::ceil(ox)) + r);
  int y0 = std::max(0, static_cast<int>(std::floor(oy)) - r);
  int y1 = std::min(map.height() - 1, static_cast<int>(std::ceil(oy)) + r);
  auto bounded_blocks = [&](int x, int y) {
    if (!map.in_bounds(x, y)) return false;
    return static_cast<bool>(blocks(x, y));
  };
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      if (map.at(x, y) != CellState::Unknown) continue;
      if (!within_range(origin, x, y, range_cells)) continue;
      if (segment_blocked(origin, x, y, origin_touch, bounded_blocks)) continue;
      cells.push_back(map.index(x, y));
    }
  return cells;
}

}  // namespace detail

// Optimistic information gain: unknown cells reachable by sight from the
// frontier viewpoint if unknown space were empty; only known obstacles
// occlude.
inline int ig_optimistic(const GridMap& map, const Frontier& f,
                         const SensorModel& sensor) {
  validate_sensor(sensor);
  RationalPoint origin = ig_origin(map, f);
  double range_cells = sensor.range_m / map.resolution();
  auto cells = detail::visible_unknown_cells(
      map, origin, range_cells,
      [&](int x, int y) { return map.at(x, y) == CellState::Obstacle; });
  return static_cast<int>(cells.size());
}

// Exact information gain: unknown cells of `map` that a scan of the real
// environment from the frontier viewpoint would actually observe.
inline int ig_true(const GridMap& ground_truth, const GridMap& map,
                   const Frontier& f, const SensorModel& sensor) {
  validate_sensor(sensor);
  if (ground_truth.width() != map.width() ||
      ground_truth.height() != map.height())
    throw DimensionError("ig_true: map dimensions differ");
  RationalPoint origin = ig_origin(map, f);
  int rx = origin.round_x(), ry = origin.round_y();
  if (!ground_truth.in_bounds(rx, ry) ||
      ground_truth.at(rx, ry) != CellState::Free)
    throw PoseError("ig_true: viewpoint is not free in the environment");
  double range_cells = sensor.range_m / map.resolution();
  auto cells = detail::visible_unknown_cells(
      map, origin, range_cells, [&](int x, int y) {
        return ground_truth.at(x, y) == CellState::Obstacle;
      });
  return static_cast<int>(cells.size());
}

}  // namespace salex
