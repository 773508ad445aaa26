#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <utility>
#include <vector>

#include "salex/errors.hpp"

namespace salex {

// Exact line-of-sight geometry. Points are rationals in cell units; cell
// (x, y) is the closed unit square centered on the integer point (x, y),
// so cell boundaries sit on half-integers. All traversal decisions are made
// in integer arithmetic, which keeps segments that pass exactly through cell
// corners deterministic.

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

struct RationalPoint {
  std::int64_t nx = 0;
  std::int64_t ny = 0;
  std::int64_t den = 1;  // > 0

  double x() const { return static_cast<double>(nx) / static_cast<double>(den); }
  double y() const { return static_cast<double>(ny) / static_cast<double>(den); }

  // nearest integer cell coordinate, halves rounding up
  int round_x() const {
    return static_cast<int>(floor_div(2 * nx + den, 2 * den));
  }
  int round_y() const {
    return static_cast<int>(floor_div(2 * ny + den, 2 * den));
  }

  RationalPoint normalized() const {
    std::int64_t g = std::gcd(std::gcd(std::abs(nx), std::abs(ny)), den);
    if (g <= 1) return *this;
    return {nx / g, ny / g, den / g};
  }

  bool operator==(const RationalPoint& o) const {
    return nx == o.nx && ny == o.ny && den == o.den;
  }
};

inline RationalPoint cell_center(int x, int y) { return {x, y, 1}; }

// Quantizes a continuous pose to 1/4096 of a cell. Cell centers and cell
// boundaries survive the quantization exactly.
inline RationalPoint point_from_double(double x, double y) {
  if (!(std::abs(x) < 1e6) || !(std::abs(y) < 1e6))
    throw ParamError("point_from_double: coordinate out of range");
  constexpr std::int64_t kDen = 4096;
  return {std::llround(x * kDen), std::llround(y * kDen), kDen};
}

// Cells whose closed square contains the point: 1, 2, or 4 cells depending
// on whether the point sits on a boundary or a corner.
inline std::vector<std::pair<int, int>> touching_cells(const RationalPoint& p) {
  // shift so boundaries land on multiples of 2*den
  std::int64_t S = 2 * p.den;
  std::int64_t qx = 2 * p.nx + p.den;
  std::int64_t qy = 2 * p.ny + p.den;
  int cx = static_cast<int>(floor_div(qx, S));
  int cy = static_cast<int>(floor_div(qy, S));
  bool on_x = (qx % S == 0);
  bool on_y = (qy % S == 0);
  std::vector<std::pair<int, int>> cells;
  cells.emplace_back(cx, cy);
  if (on_x) cells.emplace_back(cx - 1, cy);
  if (on_y) cells.emplace_back(cx, cy - 1);
  if (on_x && on_y) cells.emplace_back(cx - 1, cy - 1);
  return cells;
}

namespace detail {

constexpr std::int64_t kMaxScaled = std::int64_t{1} << 26;

// visits the one or two rows (columns) touched at a boundary-crossing event
template <typename Visit>
inline bool emit_crossing(std::int64_t k, std::int64_t q, std::int64_t den2,
                          bool swap_xy, Visit&& visit) {
  std::int64_t j = floor_div(q, den2);
  auto emit = [&](std::int64_t a, std::int64_t b) {
    int x = static_cast<int>(swap_xy ? b : a);
    int y = static_cast<int>(swap_xy ? a : b);
    return visit(x, y);
  };
  if (!emit(k, j) || !emit(k + 1, j)) return false;
  if (q % den2 == 0) {
    if (!emit(k, j - 1) || !emit(k + 1, j - 1)) return false;
  }
  return true;
}

// sweeps the boundary crossings perpendicular to one axis; coordinates are
// pre-swapped so the swept axis is always "x"
template <typename Visit>
inline bool sweep_axis(std::int64_t Ax, std::int64_t Ay, std::int64_t Bx,
                       std::int64_t By, std::int64_t L, bool swap_xy,
                       Visit&& visit) {
  if (Ax == Bx) return true;
  if (Ax > Bx) {
    std::swap(Ax, Bx);
    std::swap(Ay, By);
  }
  std::int64_t S = 2 * L;
  std::int64_t ddx = Bx - Ax, ddy = By - Ay;
  // boundaries at X = S*k + L within [Ax, Bx]
  std::int64_t klo = -floor_div(-(Ax - L), S);  // ceil
  std::int64_t khi = floor_div(Bx - L, S);
  for (std::int64_t k = klo; k <= khi; ++k) {
    std::int64_t bx = S * k + L - Ax;
    std::int64_t q = Ay * ddx + bx * ddy + L * ddx;
    if (!emit_crossing(k, q, S * ddx, swap_xy, visit)) return false;
  }
  return true;
}

}  // namespace detail

// Visits every cell whose closed square the closed segment a->b touches.
// The visitor returns false to abort (the walk then returns false). Cells
// can be visited more than once and the order is not the travel order.
template <typename Visit>
inline bool walk_supercover(const RationalPoint& a, const RationalPoint& b,
                            Visit&& visit) {
  std::int64_t L = std::lcm(a.den, b.den);
  if (L > (std::int64_t{1} << 21))
    throw ParamError("walk_supercover: denominator too large");
  std::int64_t Ax = 2 * a.nx * (L / a.den), Ay = 2 * a.ny * (L / a.den);
  std::int64_t Bx = 2 * b.nx * (L / b.den), By = 2 * b.ny * (L / b.den);
  for (std::int64_t v : {Ax, Ay, Bx, By})
    if (std::abs(v) > detail::kMaxScaled)
      throw ParamError("walk_supercover: coordinate too large");

  auto touch = [&](std::int64_t X, std::int64_t Y) {
    std::int64_t S = 2 * L;
    std::int64_t qx = X + L, qy = Y + L;
    std::int64_t cx = floor_div(qx, S), cy = floor_div(qy, S);
    bool on_x = (qx % S == 0), on_y = (qy % S == 0);
    int icx = static_cast<int>(cx), icy = static_cast<int>(cy);
    if (!visit(icx, icy)) return false;
    if (on_x && !visit(icx - 1, icy)) return false;
    if (on_y && !visit(icx, icy - 1)) return false;
    if (on_x && on_y && !visit(icx - 1, icy - 1)) return false;
    return true;
  };

  if (!touch(Ax, Ay)) return false;
  if (Ax == Bx && Ay == By) return true;
  if (!touch(Bx, By)) return false;
  if (!detail::sweep_axis(Ax, Ay, Bx, By, L, false, visit)) return false;
  if (!detail::sweep_axis(Ay, Ax, By, Bx, L, true, visit)) return false;
  return true;
}

// Deduplicated supercover cell list, row-major order.
inline std::vector<std::pair<int, int>> supercover_cells(
    const RationalPoint& a, const RationalPoint& b) {
  std::vector<std::pair<int, int>> cells;
  walk_supercover(a, b, [&](int x, int y) {
    cells.emplace_back(x, y);
    return true;
  });
  std::sort(cells.begin(), cells.end(), [](const auto& p, const auto& q) {
    return p.second != q.second ? p.second < q.second : p.first < q.first;
  });
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

// True when some cell touched by the segment blocks it. The target cell and
// the cells containing the origin point never block (a sensor sees out of
// its own cell and up to an obstacle's surface).
template <typename Blocking>
inline bool segment_blocked(const RationalPoint& origin, int tx, int ty,
                            const std::vector<std::pair<int, int>>& origin_touch,
                            Blocking&& blocks) {
  bool hit = false;
  walk_supercover(origin, cell_center(tx, ty), [&](int x, int y) {
    if (x == tx && y == ty) return true;
    for (const auto& [ox, oy] : origin_touch)
      if (x == ox && y == oy) return true;
    if (blocks(x, y)) {
      hit = true;
      return false;
    }
    return true;
  });
  return hit;
}

// Exact squared-distance gate: is the center of (cx, cy) within range_cells
// of the origin point?
inline bool within_range(const RationalPoint& origin, int cx, int cy,
                         double range_cells) {
  __int128 dx = static_cast<__int128>(cx) * origin.den - origin.nx;
  __int128 dy = static_cast<__int128>(cy) * origin.den - origin.ny;
  long double num = static_cast<long double>(dx) * static_cast<long double>(dx) +
                    static_cast<long double>(dy) * static_cast<long double>(dy);
  long double rhs = static_cast<long double>(range_cells) * range_cells *
                    origin.den * origin.den;
  return num <= rhs;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Enumerates, in row-major order, every in-bounds cell visible from origin:
// within range, inside the field of view, and with an unblocked line of
// sight to the cell center. `blocks(x, y)` reports raw blocking state and is
// only consulted for in-bounds cells.
template <typename Blocking, typename Emit>
inline void for_each_visible(int width, int height, const RationalPoint& origin,
                             double range_cells, double heading, double fov,
                             Blocking&& blocks, Emit&& emit) {
  const bool full_circle = fov >= kTwoPi - 1e-9;
  const double ox = origin.x(), oy = origin.y();
  const auto origin_touch = touching_cells(origin);

  int r = static_cast<int>(std::ceil(range_cells)) + 1;
  int x0 = std::max(0, static_cast<int>(std::floor(ox)) - r);
  int x1 = std::min(width - 1, static_cast<int>(std::ceil(ox)) + r);
  int y0 = std::max(0, static_cast<int>(std::floor(oy)) - r);
  int y1 = std::min(height - 1, static_cast<int>(std::ceil(oy)) + r);

  auto in_bounds_blocks = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= width || y >= height) return false;
    return static_cast<bool>(blocks(x, y));
  };

  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      if (!within_range(origin, x, y, range_cells)) continue;
      if (!full_circle) {
        double dx = x - ox, dy = y - oy;
        if (dx != 0.0 || dy != 0.0) {
          double rel = std::remainder(std::atan2(dy, dx) - heading, kTwoPi);
          if (std::abs(rel) > fov / 2 + 1e-12) continue;
        }
      }
      if (segment_blocked(origin, x, y, origin_touch, in_bounds_blocks))
        continue;
      emit(x, y);
    }
}

}  // namespace salex
