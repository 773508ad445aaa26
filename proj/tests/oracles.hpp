#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is written the straightforward (slow) way on purpose and
// shares no code with include/salex.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "salex/grid_map.hpp"

namespace oracles {

inline salex::GridMap make_map(const std::vector<std::string>& rows,
                               double res = 1.0) {
  int h = static_cast<int>(rows.size());
  int w = static_cast<int>(rows[0].size());
  salex::GridMap map(w, h, res);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      char c = rows[y][x];
      salex::CellState s = salex::CellState::Unknown;
      if (c == '.') s = salex::CellState::Free;
      else if (c == '#') s = salex::CellState::Obstacle;
      map.set(x, y, s);
    }
  return map;
}

inline salex::GridMap random_map(std::mt19937_64& rng, int w, int h,
                                 double p_free, double p_obstacle) {
  salex::GridMap map(w, h, 0.1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::int32_t i = 0; i < map.size(); ++i) {
    double r = u(rng);
    if (r < p_free) map.set(i, salex::CellState::Free);
    else if (r < p_free + p_obstacle) map.set(i, salex::CellState::Obstacle);
  }
  return map;
}

// Segment/square contact test by separating axes, in exact integer math.
// The segment runs (x0/den, y0/den) -> (x1/den, y1/den) in cell units; the
// cell (cx, cy) is the closed square of side 1 centered on the integer point.
// Touching the boundary counts as contact.  Axes: x, y, segment normal.
inline bool sat_segment_touches_cell(std::int64_t x0, std::int64_t y0,
                                     std::int64_t x1, std::int64_t y1,
                                     std::int64_t den, int cx, int cy) {
  using I = __int128;
  // scale everything by 2*den so the square corners become integers
  I ax = 2 * static_cast<I>(x0), ay = 2 * static_cast<I>(y0);
  I bx = 2 * static_cast<I>(x1), by = 2 * static_cast<I>(y1);
  I lox = (2 * static_cast<I>(cx) - 1) * den, hix = (2 * static_cast<I>(cx) + 1) * den;
  I loy = (2 * static_cast<I>(cy) - 1) * den, hiy = (2 * static_cast<I>(cy) + 1) * den;

  // axis x
  if (std::max(ax, bx) < lox || std::min(ax, bx) > hix) return false;
  // axis y
  if (std::max(ay, by) < loy || std::min(ay, by) > hiy) return false;

  I dx = bx - ax, dy = by - ay;
  if (dx == 0 && dy == 0) return true;  // point, already inside both slabs

  // axis (-dy, dx): segment projects to a single value
  I seg = -dy * ax + dx * ay;
  I c1 = -dy * lox + dx * loy;
  I c2 = -dy * lox + dx * hiy;
  I c3 = -dy * hix + dx * loy;
  I c4 = -dy * hix + dx * hiy;
  I lo = std::min(std::min(c1, c2), std::min(c3, c4));
  I hi = std::max(std::max(c1, c2), std::max(c3, c4));
  return lo <= seg && seg <= hi;
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// 8-connected components of a boolean mask, as sorted cell-index lists
// ordered by their smallest member.
inline std::vector<std::vector<std::int32_t>> mask_components(
    const std::vector<bool>& mask, int w, int h) {
  Dsu dsu(w * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask[y * w + x]) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (mask[ny * w + nx]) dsu.unite(y * w + x, ny * w + nx);
        }
    }
  std::vector<std::vector<std::int32_t>> comps;
  std::vector<int> comp_of(w * h, -1);
  for (int i = 0; i < w * h; ++i) {
    if (!mask[i]) continue;
    int root = dsu.find(i);
    if (comp_of[root] < 0) {
      comp_of[root] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[comp_of[root]].push_back(i);
  }
  return comps;  // roots are minima, so scan order already sorts everything
}

// A cell belongs to the frontier mask when it is free and has an in-bounds
// unknown 8-neighbour.
inline std::vector<bool> frontier_mask(const salex::GridMap& map) {
  int w = map.width(), h = map.height();
  std::vector<bool> mask(static_cast<std::size_t>(w) * h, false);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (map.at(x, y) != salex::CellState::Free) continue;
      for (int dy = -1; dy <= 1 && !mask[y * w + x]; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          int nx = x + dx, ny = y + dy;
          if (!map.in_bounds(nx, ny)) continue;
          if (map.at(nx, ny) == salex::CellState::Unknown) {
            mask[y * w + x] = true;
            break;
          }
        }
    }
  return mask;
}

// Visibility by definition: a cell is visible from the origin when its
// center is within range and no obstacle square other than the target itself
// or the squares containing the origin touches the sight segment. Origin is
// the exact rational point (onx/oden, ony/oden). O(cells^2), SAT per pair.
inline std::vector<std::int32_t> sat_visible_cells(const salex::GridMap& map,
                                                   std::int64_t onx,
                                                   std::int64_t ony,
                                                   std::int64_t oden,
                                                   double range_cells,
                                                   bool only_unknown = false) {
  auto in_touch = [&](int x, int y) {
    return std::abs(2 * (onx - oden * static_cast<std::int64_t>(x))) <= oden &&
           std::abs(2 * (ony - oden * static_cast<std::int64_t>(y))) <= oden;
  };
  std::vector<std::int32_t> visible;
  for (int ty = 0; ty < map.height(); ++ty)
    for (int tx = 0; tx < map.width(); ++tx) {
      if (only_unknown && map.at(tx, ty) != salex::CellState::Unknown) continue;
      __int128 dx = static_cast<__int128>(tx) * oden - onx;
      __int128 dy = static_cast<__int128>(ty) * oden - ony;
      long double num = static_cast<long double>(dx) * static_cast<long double>(dx) +
                        static_cast<long double>(dy) * static_cast<long double>(dy);
      long double rhs = static_cast<long double>(range_cells) * range_cells *
                        oden * oden;
      if (num > rhs) continue;
      bool blocked = false;
      for (int gy = 0; gy < map.height() && !blocked; ++gy)
        for (int gx = 0; gx < map.width() && !blocked; ++gx) {
          if (map.at(gx, gy) != salex::CellState::Obstacle) continue;
          if (gx == tx && gy == ty) continue;
          if (in_touch(gx, gy)) continue;
          if (sat_segment_touches_cell(onx, ony,
                                       oden * static_cast<std::int64_t>(tx),
                                       oden * static_cast<std::int64_t>(ty),
                                       oden, gx, gy))
            blocked = true;
        }
      if (!blocked) visible.push_back(ty * map.width() + tx);
    }
  return visible;
}

// Bellman-Ford over free cells, 8-connected, diagonal steps cost sqrt(2).
// Returns per-cell distance in meters from `source`, infinity if unreachable.
inline std::vector<double> bellman_ford_free(const salex::GridMap& map,
                                             std::int32_t source) {
  const double inf = std::numeric_limits<double>::infinity();
  int w = map.width(), h = map.height();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, inf);
  if (map.at(source) != salex::CellState::Free) return dist;
  dist[source] = 0.0;
  const double straight = map.resolution();
  const double diagonal = map.resolution() * std::sqrt(2.0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        std::int32_t i = y * w + x;
        if (dist[i] == inf) continue;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            int nx = x + dx, ny = y + dy;
            if (!map.in_bounds(nx, ny)) continue;
            if (map.at(nx, ny) != salex::CellState::Free) continue;
            double step = (dx != 0 && dy != 0) ? diagonal : straight;
            if (dist[i] + step < dist[ny * w + nx] - 1e-15) {
              dist[ny * w + nx] = dist[i] + step;
              changed = true;
            }
          }
      }
  }
  return dist;
}

// First cumulative cost at which coverage reaches x, scanning rows naively.
inline double first_cost_reaching(const std::vector<double>& cum_cost,
                                  const std::vector<double>& coverage,
                                  double x) {
  for (std::size_t i = 0; i < cum_cost.size(); ++i)
    if (coverage[i] >= x) return cum_cost[i];
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace oracles
