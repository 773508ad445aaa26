#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "salex/errors.hpp"
#include "salex/grid_map.hpp"

namespace salex {

struct GenParams {
  int size = 128;  // square side in cells
  int rooms = 8;
  int corridor_width = 8;
  double resolution = 0.1;
};

// Seeded office-style floor plan: a full-width corridor band through the
// middle with jittered room slots above and below, each opening onto the
// corridor through a two or three cell door. All Free space is a union of
// edge-joined rectangles, so it is 4-connected and has no diagonal chokes.
inline GridMap generate_environment(std::uint64_t seed,
                                    const GenParams& params = {}) {
  const GenParams& p = params;
  if (p.size < 32)
    throw ParamError("generate_environment: size must be at least 32");
  if (p.rooms < 1)
    throw ParamError("generate_environment: rooms must be at least 1");
  if (p.corridor_width < 1)
    throw ParamError("generate_environment: corridor_width must be positive");
  if (!(p.resolution > 0.0))
    throw ParamError("generate_environment: resolution must be positive");

  GridMap map(p.size, p.size, p.resolution, CellState::Obstacle);
  auto carve = [&](int x0, int y0, int x1, int y1) {
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) map.set(x, y, CellState::Free);
  };

  if (p.rooms == 1) {
    carve(1, 1, p.size - 2, p.size - 2);
    return map;
  }

  std::mt19937_64 rng(seed);
  auto pick = [&](int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  };

  const int cy0 = (p.size - p.corridor_width) / 2;
  const int cy1 = cy0 + p.corridor_width - 1;
  // each side needs a wall row plus at least three rows of room
  if (cy0 < 5 || p.size - cy1 < 6)
    throw ParamError("generate_environment: corridor leaves no room space");
  carve(1, cy0, p.size - 2, cy1);

  const int top = (p.rooms + 1) / 2;
  const int bottom = p.rooms - top;
  const int span = p.size - 2;
  const int min_w = 4;
  if (static_cast<long>(top) * (min_w + 1) - 1 > span)
    throw ParamError("generate_environment: too many rooms for the width");

  auto lay_rooms = [&](int count, int y0, int y1, int wall_y, bool anchor_low) {
    // split [1, size-2] into count slots separated by one-column walls,
    // equal widths plus remainder, then jitter the dividers
    std::vector<int> width(count, (span - (count - 1)) / count);
    int rem = (span - (count - 1)) % count;
    for (int i = 0; i < rem; ++i) ++width[i];
    for (int i = 0; i + 1 < count; ++i) {
      int delta = pick(5) - 2;
      if (width[i] + delta >= min_w && width[i + 1] - delta >= min_w) {
        width[i] += delta;
        width[i + 1] -= delta;
      }
    }
    int x = 1;
    for (int i = 0; i < count; ++i) {
      const int x0 = x, x1 = x + width[i] - 1;
      const int depth = y1 - y0 + 1;
      // pull the far edge in a little so room depths vary
      const int jit = pick(std::min(3, depth - 2));
      if (anchor_low)
        carve(x0, y0 + jit, x1, y1);
      else
        carve(x0, y0, x1, y1 - jit);
      int dw = 2 + pick(2);
      if (dw > width[i]) dw = width[i];
      const int dx = x0 + pick(width[i] - dw + 1);
      carve(dx, wall_y, dx + dw - 1, wall_y);
      x = x1 + 2;
    }
  };
  lay_rooms(top, 1, cy0 - 2, cy0 - 1, true);
  lay_rooms(bottom, cy1 + 2, p.size - 2, cy1 + 1, false);
  return map;
}

}  // namespace salex
