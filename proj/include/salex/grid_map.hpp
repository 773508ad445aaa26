#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salex/errors.hpp"

namespace salex {

enum class CellState : std::uint8_t { Free, Obstacle, Unknown };

inline char glyph_of(CellState s) {
  switch (s) {
    case CellState::Free: return '.';
    case CellState::Obstacle: return '#';
    default: return '?';
  }
}

// Occupancy grid. Cells are addressed row-major; cell (x, y) covers the unit
// square centered on the integer point (x, y), so cell boundaries sit on
// half-integers. resolution is meters per cell.
class GridMap {
 public:
  GridMap() = default;

  GridMap(int width, int height, double resolution,
          CellState fill = CellState::Unknown)
      : w_(width), h_(height), res_(resolution) {
    if (width <= 0 || height <= 0)
      throw ParamError("GridMap: non-positive dimensions");
    if (!(resolution > 0.0)) throw ParamError("GridMap: resolution must be > 0");
    cells_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const { return w_; }
  int height() const { return h_; }
  double resolution() const { return res_; }
  std::int32_t size() const { return static_cast<std::int32_t>(cells_.size()); }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < w_ && y >= 0 && y < h_;
  }

  std::int32_t index(int x, int y) const {
    if (!in_bounds(x, y))
      throw BoundsError("GridMap: cell (" + std::to_string(x) + ", " +
                        std::to_string(y) + ") out of bounds");
    return static_cast<std::int32_t>(y) * w_ + x;
  }

  int x_of(std::int32_t i) const { return static_cast<int>(i % w_); }
  int y_of(std::int32_t i) const { return static_cast<int>(i / w_); }

  CellState at(int x, int y) const { return cells_[index(x, y)]; }

  CellState at(std::int32_t i) const {
    check_index(i);
    return cells_[i];
  }

  void set(int x, int y, CellState s) { cells_[index(x, y)] = s; }

  void set(std::int32_t i, CellState s) {
    check_index(i);
    cells_[i] = s;
  }

  const std::vector<CellState>& cells() const { return cells_; }

  int count(CellState s) const {
    int n = 0;
    for (CellState c : cells_)
      if (c == s) ++n;
    return n;
  }

  bool operator==(const GridMap& o) const {
    return w_ == o.w_ && h_ == o.h_ && res_ == o.res_ && cells_ == o.cells_;
  }

 private:
  void check_index(std::int32_t i) const {
    if (i < 0 || i >= size())
      throw BoundsError("GridMap: index " + std::to_string(i) +
                        " out of bounds");
  }

  int w_ = 0, h_ = 0;
  double res_ = 0.1;
  std::vector<CellState> cells_;
};

// Robot pose in cell units (fractional allowed), heading in radians.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

struct Observation {
  std::int32_t cell = 0;
  CellState state = CellState::Free;  // Free or Obstacle only
};

struct Scan {
  std::vector<Observation> observations;
};

// Applies a scan in place. Observation precedence: an Obstacle observation is
// permanent; a Free observation fills Unknown but never downgrades a known
// Obstacle. Returns the number of cells that left the Unknown state.
inline int apply_scan(GridMap& map, const Scan& scan) {
  int newly_known = 0;
  for (const Observation& obs : scan.observations) {
    CellState prior = map.at(obs.cell);
    CellState next = prior;
    if (obs.state == CellState::Obstacle) {
      next = CellState::Obstacle;
    } else if (prior == CellState::Unknown) {
      next = CellState::Free;
    }
    if (prior == CellState::Unknown && next != CellState::Unknown)
      ++newly_known;
    if (next != prior) map.set(obs.cell, next);
  }
  return newly_known;
}

inline GridMap integrate_scan(GridMap map, const Scan& scan) {
  apply_scan(map, scan);
  return map;
}

// Fraction of the ground truth's Free cells that the current map knows
// (any state other than Unknown). Obstacle interiors never enter the
// denominator; a map that has seen every reachable free cell scores 1.0.
inline double coverage_ratio(const GridMap& current, const GridMap& ground_truth) {
  if (current.width() != ground_truth.width() ||
      current.height() != ground_truth.height())
    throw DimensionError("coverage_ratio: dimension mismatch");
  std::int64_t total = 0, known = 0;
  const auto& cur = current.cells();
  const auto& gt = ground_truth.cells();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] != CellState::Free) continue;
    ++total;
    if (cur[i] != CellState::Unknown) ++known;
  }
  if (total == 0) return 1.0;
  return static_cast<double>(known) / static_cast<double>(total);
}

}  // namespace salex
