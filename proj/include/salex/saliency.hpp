#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "salex/grid_map.hpp"
#include "salex/perception.hpp"
#include "salex/pgm.hpp"

namespace salex {

// Upper bound of the values painted by the stand-in heatmap providers.
// Matches the scale the bias weights were tuned against.
constexpr double kSaliencyScale = 0.25;

struct Heatmap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Heatmap() = default;
  Heatmap(int w, int h) : width(w), height(h) {
    if (w <= 0 || h <= 0) throw ParamError("Heatmap: non-positive dimensions");
    values.assign(static_cast<std::size_t>(w) * h, 0.0);
  }

  double at(int x, int y) const { return values[index(x, y)]; }
  void set(int x, int y, double v) { values[index(x, y)] = v; }

  std::int32_t index(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height)
      throw BoundsError("Heatmap: cell out of bounds");
    return static_cast<std::int32_t>(y) * width + x;
  }
};

// Connected region of above-threshold heat, carrying the mean of its
// surviving raw values.
struct SaliencyArea {
  std::vector<std::int32_t> cells;
  double mean_value = 0.0;
};

class SaliencyField {
 public:
  SaliencyField() = default;

  SaliencyField(int width, int height, std::vector<SaliencyArea> areas,
                double theta)
      : width_(width), height_(height), theta_(theta), areas_(std::move(areas)) {
    area_of_.assign(static_cast<std::size_t>(width) * height, -1);
    for (std::size_t a = 0; a < areas_.size(); ++a)
      for (std::int32_t c : areas_[a].cells)
        area_of_[c] = static_cast<std::int32_t>(a);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double theta() const { return theta_; }
  const std::vector<SaliencyArea>& areas() const { return areas_; }

  // index of the area covering the cell, -1 when none
  std::int32_t area_at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return -1;
    return area_of_[static_cast<std::size_t>(y) * width_ + x];
  }

 private:
  int width_ = 0, height_ = 0;
  double theta_ = 0.0;
  std::vector<SaliencyArea> areas_;
  std::vector<std::int32_t> area_of_;
};

// Thresholds the heatmap and groups the survivors into 8-connected areas,
// each scored by the mean of its surviving values. Cells at exactly theta
// survive; zero-valued cells never form areas.
inline SaliencyField extract_saliency_areas(const Heatmap& heatmap,
                                            double theta) {
  if (!(theta >= 0.0) || theta >= 1.0)
    throw ParamError("extract_saliency_areas: theta must be in [0, 1)");
  const int w = heatmap.width, h = heatmap.height;
  const auto survives = [&](std::int32_t i) {
    return heatmap.values[i] >= theta && heatmap.values[i] > 0.0;
  };

  std::vector<SaliencyArea> areas;
  std::vector<bool> seen(heatmap.values.size(), false);
  std::vector<std::int32_t> queue;
  const std::int32_t n = static_cast<std::int32_t>(heatmap.values.size());
  for (std::int32_t seed = 0; seed < n; ++seed) {
    if (!survives(seed) || seen[seed]) continue;
    SaliencyArea area;
    queue.clear();
    queue.push_back(seed);
    seen[seed] = true;
    while (!queue.empty()) {
      std::int32_t i = queue.back();
      queue.pop_back();
      area.cells.push_back(i);
      int x = i % w, y = i / w;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          std::int32_t ni = ny * w + nx;
          if (survives(ni) && !seen[ni]) {
            seen[ni] = true;
            queue.push_back(ni);
          }
        }
    }
    std::sort(area.cells.begin(), area.cells.end());
    double sum = 0.0;
    for (std::int32_t c : area.cells) sum += heatmap.values[c];
    area.mean_value = sum / static_cast<double>(area.cells.size());
    areas.push_back(std::move(area));
  }
  return SaliencyField(w, h, std::move(areas), theta);
}

// S(f): mean value of the area the frontier centroid projects into, zero
// when the centroid lands outside every area. A zero score does not
// disqualify the frontier.
inline double frontier_saliency(const SaliencyField& field, const Frontier& f) {
  RationalPoint c = f.centroid_point();
  std::int32_t a = field.area_at(c.round_x(), c.round_y());
  return a < 0 ? 0.0 : field.areas()[a].mean_value;
}

namespace detail {

// paints v over every cell within Chebyshev radius `decay` of the frontier,
// keeping the max where paints overlap
inline void paint_frontier(Heatmap& hm, const Frontier& f, int decay,
                           double v) {
  for (std::int32_t c : f.cells) {
    int x = c % hm.width, y = c / hm.width;
    for (int dy = -decay; dy <= decay; ++dy)
      for (int dx = -decay; dx <= decay; ++dx) {
        int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= hm.width || ny >= hm.height) continue;
        std::int32_t i = ny * hm.width + nx;
        hm.values[i] = std::max(hm.values[i], v);
      }
  }
}

template <typename SizeOf>
inline Heatmap frontier_size_heatmap(const GridMap& map, int decay,
                                     SizeOf&& size_of) {
  if (decay < 0) throw ParamError("heatmap: decay must be >= 0");
  Heatmap hm(map.width(), map.height());
  auto frontiers = detect_frontiers(map, 1);
  if (frontiers.empty()) return hm;
  std::vector<double> sizes;
  sizes.reserve(frontiers.size());
  double max_size = 0.0;
  for (const Frontier& f : frontiers) {
    sizes.push_back(static_cast<double>(size_of(f)));
    max_size = std::max(max_size, sizes.back());
  }
  if (max_size <= 0.0) return hm;
  for (std::size_t k = 0; k < frontiers.size(); ++k) {
    if (sizes[k] <= 0.0) continue;
    paint_frontier(hm, frontiers[k], decay,
                   kSaliencyScale * sizes[k] / max_size);
  }
  return hm;
}

}  // namespace detail

// Stand-in saliency with perfect knowledge: each frontier is scored by the
// amount of unexplored environment actually behind it (flood fill from the
// frontier through unknown cells that are free in reality), scaled so the
// best frontier gets kSaliencyScale.
inline Heatmap oracle_heatmap(const GridMap& ground_truth, const GridMap& map,
                              int decay = 5) {
  if (ground_truth.width() != map.width() ||
      ground_truth.height() != map.height())
    throw DimensionError("oracle_heatmap: dimension mismatch");
  const int w = map.width(), h = map.height();
  std::vector<bool> seen(static_cast<std::size_t>(w) * h, false);
  std::vector<std::int32_t> queue;
  return detail::frontier_size_heatmap(map, decay, [&](const Frontier& f) {
    std::fill(seen.begin(), seen.end(), false);
    queue.clear();
    for (std::int32_t c : f.cells) {
      seen[c] = true;
      queue.push_back(c);
    }
    std::int64_t count = 0;
    while (!queue.empty()) {
      std::int32_t i = queue.back();
      queue.pop_back();
      int x = i % w, y = i / w;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          std::int32_t ni = ny * w + nx;
          if (seen[ni]) continue;
          if (map.at(ni) != CellState::Unknown) continue;
          if (ground_truth.at(ni) != CellState::Free) continue;
          seen[ni] = true;
          queue.push_back(ni);
          ++count;
        }
    }
    return count;
  });
}

// Ground-truth-free variant: frontier regions estimated by the optimistic
// sensor-disc count instead of the real map.
inline Heatmap heuristic_heatmap(const GridMap& map, const SensorModel& sensor,
                                 int decay = 5) {
  validate_sensor(sensor);
  return detail::frontier_size_heatmap(map, decay, [&](const Frontier& f) {
    return ig_optimistic(map, f, sensor);
  });
}

// PGM-encoded heatmap, pixel/255. Pass expected dimensions to enforce a
// match with the session's map.
inline Heatmap load_heatmap(std::istream& in, int expect_width = -1,
                            int expect_height = -1) {
  PgmImage img = read_pgm(in);
  if (expect_width > 0 &&
      (img.width != expect_width || img.height != expect_height))
    throw DimensionError("load_heatmap: dimensions do not match the map");
  Heatmap hm(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    hm.values[i] = img.pixels[i] / 255.0;
  return hm;
}

inline void save_heatmap(const Heatmap& hm, std::ostream& out) {
  PgmImage img;
  img.width = hm.width;
  img.height = hm.height;
  img.pixels.resize(hm.values.size());
  for (std::size_t i = 0; i < hm.values.size(); ++i) {
    double v = std::clamp(hm.values[i], 0.0, 1.0);
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  write_pgm(img, out);
}

}  // namespace salex
