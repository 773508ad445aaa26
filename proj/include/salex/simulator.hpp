#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "salex/grid_map.hpp"
#include "salex/perception.hpp"
#include "salex/planning.hpp"
#include "salex/saliency.hpp"
#include "salex/strategy.hpp"

namespace salex {

enum class SaliencyProvider { None, Oracle, Heuristic, File };

struct ExplorationConfig {
  GridMap environment;  // ground truth; unknown cells are treated as walls
  std::optional<Pose> start_pose;  // cell units; chosen from seed when absent
  StrategySpec strategy;
  SensorModel sensor;
  SaliencyProvider provider = SaliencyProvider::None;
  Heatmap file_heatmap;  // consulted only with the File provider
  TerminationCriterion termination = TerminationCriterion::no_frontiers();
  std::uint64_t seed = 0;
  double scan_stride_m = 1.0;
  int min_frontier_length = 3;
  double theta = 0.1;
  int saliency_decay_cells = 5;
};

struct TraceStep {
  int step = 0;
  int frontier_x = 0;   // navigation target cell (start cell on step 0)
  int frontier_y = 0;
  double path_cost_m = 0.0;
  double cum_cost_m = 0.0;
  double coverage = 0.0;
  int frontier_count = 0;  // frontiers of admissible length on this row's map
  double s_value = 0.0;    // saliency of the chosen frontier
  int explored_flag = 0;   // termination verdict on this row's map
};

struct ExplorationTrace {
  std::vector<TraceStep> steps;
  std::optional<double> t_bar;  // cum cost of the first Explored row
  GridMap final_map;
  int start_x = 0;
  int start_y = 0;
};

struct MetricsRow {
  std::vector<std::optional<double>> a_x;  // aligned with the thresholds
  std::optional<double> t_bar;
  double final_coverage = 0.0;
};

inline const std::vector<double>& default_thresholds() {
  static const std::vector<double> t{0.30, 0.50, 0.70, 0.90, 0.95, 0.99};
  return t;
}

namespace detail {

inline int count_admissible(const std::vector<Frontier>& frontiers,
                            int min_length) {
  int n = 0;
  for (const Frontier& f : frontiers)
    if (f.length >= min_length) ++n;
  return n;
}

// Scans are a pure function of the origin cell for full-circle sensors, so
// one run can reuse them across revisits.
class ScanCache {
 public:
  ScanCache(const GridMap& gt, const SensorModel& sensor)
      : gt_(gt), sensor_(sensor),
        cacheable_(sensor.fov_rad >= kTwoPi - 1e-9) {}

  const Scan& at(const Pose& pose) {
    if (!cacheable_) {
      last_ = simulate_scan(gt_, pose, sensor_);
      return last_;
    }
    std::int32_t key = gt_.index(static_cast<int>(std::llround(pose.x)),
                                 static_cast<int>(std::llround(pose.y)));
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, simulate_scan(gt_, pose, sensor_)).first;
    return it->second;
  }

 private:
  const GridMap& gt_;
  SensorModel sensor_;
  bool cacheable_;
  std::unordered_map<std::int32_t, Scan> cache_;
  Scan last_;
};

}  // namespace detail

// Runs the sense / integrate / select / travel loop until no admissible
// frontier remains. The termination criterion is consulted every step but
// only stamps t_bar; the loop always continues to exhaustion.
inline ExplorationTrace run_exploration(const ExplorationConfig& config) {
  if (!(config.scan_stride_m > 0.0))
    throw ParamError("run_exploration: scan_stride must be positive");
  if (config.min_frontier_length < 1)
    throw ParamError("run_exploration: min_frontier_length must be >= 1");
  validate_sensor(config.sensor);

  // unknown ground-truth cells act as solid walls
  GridMap gt = config.environment;
  std::int64_t free_cells = 0;
  for (std::int32_t i = 0; i < gt.size(); ++i) {
    if (gt.at(i) == CellState::Unknown) gt.set(i, CellState::Obstacle);
    if (gt.at(i) == CellState::Free) ++free_cells;
  }
  if (free_cells == 0)
    throw FormatError("run_exploration: environment has no free space");

  Pose pose;
  if (config.start_pose) {
    pose = *config.start_pose;
  } else {
    std::mt19937_64 rng(config.seed);
    std::int64_t pick = static_cast<std::int64_t>(rng() % free_cells);
    for (std::int32_t i = 0; i < gt.size(); ++i) {
      if (gt.at(i) != CellState::Free) continue;
      if (pick-- == 0) {
        pose = Pose{static_cast<double>(gt.x_of(i)),
                    static_cast<double>(gt.y_of(i)), 0.0};
        break;
      }
    }
  }
  {
    RationalPoint p = point_from_double(pose.x, pose.y);
    int cx = p.round_x(), cy = p.round_y();
    if (!gt.in_bounds(cx, cy) || gt.at(cx, cy) != CellState::Free)
      throw PoseError("run_exploration: start pose not on free space");
    pose.x = cx;  // snap to the cell center; travel is cell to cell
    pose.y = cy;
  }

  TerminationCriterion term = config.termination;
  detail::ScanCache scans(gt, config.sensor);
  GridMap map(gt.width(), gt.height(), gt.resolution());

  ExplorationTrace trace;
  trace.start_x = static_cast<int>(pose.x);
  trace.start_y = static_cast<int>(pose.y);

  // cells already used as a scan vantage; with a full-circle sensor a
  // revisit cannot observe anything new
  std::set<std::int32_t> scanned_from;
  const bool full_circle = config.sensor.fov_rad >= kTwoPi - 1e-9;
  auto scan_here = [&](const Pose& at) {
    scanned_from.insert(
        map.index(static_cast<int>(at.x), static_cast<int>(at.y)));
    return apply_scan(map, scans.at(at));
  };

  scan_here(pose);
  auto frontiers = detect_frontiers(map, 1);
  bool explored_seen = false;
  double cum_cost = 0.0;

  auto record = [&](int step, int tx, int ty, double path_cost,
                    double s_value) {
    Verdict v = term.check(map, &gt, frontiers);
    if (v == Verdict::Explored && !explored_seen) {
      explored_seen = true;
      trace.t_bar = cum_cost;
    }
    TraceStep row;
    row.step = step;
    row.frontier_x = tx;
    row.frontier_y = ty;
    row.path_cost_m = path_cost;
    row.cum_cost_m = cum_cost;
    row.coverage = coverage_ratio(map, gt);
    row.frontier_count =
        detail::count_admissible(frontiers, config.min_frontier_length);
    row.s_value = s_value;
    row.explored_flag = v == Verdict::Explored ? 1 : 0;
    trace.steps.push_back(row);
  };

  record(0, static_cast<int>(pose.x), static_cast<int>(pose.y), 0.0, 0.0);

  std::optional<SaliencyField> field;  // last available saliency areas
  std::set<std::int32_t> blacklist;
  // zero-gain selections per frontier since the last informative scan; a
  // second strike blacklists the frontier so the loop cannot cycle
  std::unordered_map<std::int32_t, int> zero_gain_strikes;
  const long iteration_cap = 16L * gt.size() + 64;

  for (long iter = 1;; ++iter) {
    if (iter > iteration_cap)
      throw std::runtime_error(
          "run_exploration: halting invariant violated (iteration cap)");

    std::vector<Frontier> candidates;
    for (const Frontier& f : frontiers)
      if (f.length >= config.min_frontier_length &&
          blacklist.count(f.first_cell()) == 0)
        candidates.push_back(f);
    if (candidates.empty()) break;

    std::int32_t pose_cell =
        map.index(static_cast<int>(pose.x), static_cast<int>(pose.y));
    DistanceField dists = dijkstra_free(map, pose_cell);

    std::vector<Frontier> reachable;
    std::vector<std::int32_t> targets;
    std::vector<double> dist_raw;
    for (const Frontier& f : candidates) {
      std::int32_t t = frontier_target_cell(map, f);
      if (!dists.reached(t)) continue;
      reachable.push_back(f);
      targets.push_back(t);
      dist_raw.push_back(dists.dist_m[t]);
    }
    if (reachable.empty()) break;

    std::vector<double> ig_raw(reachable.size(), 0.0);
    if (config.strategy.kind == StrategyKind::InfoGainOptimistic)
      for (std::size_t i = 0; i < reachable.size(); ++i)
        ig_raw[i] = ig_optimistic(map, reachable[i], config.sensor);
    else if (config.strategy.kind == StrategyKind::InfoGainTrue)
      for (std::size_t i = 0; i < reachable.size(); ++i)
        ig_raw[i] = ig_true(gt, map, reachable[i], config.sensor);

    std::vector<double> s(reachable.size(), 0.0);
    if (config.strategy.biased && config.provider != SaliencyProvider::None) {
      // refresh the areas only while the criterion still says Continue;
      // afterwards the last available field is reused unchanged
      if (!explored_seen || !field) {
        if (!explored_seen) {
          Heatmap hm;
          switch (config.provider) {
            case SaliencyProvider::Oracle:
              hm = oracle_heatmap(gt, map, config.saliency_decay_cells);
              break;
            case SaliencyProvider::Heuristic:
              hm = heuristic_heatmap(map, config.sensor,
                                     config.saliency_decay_cells);
              break;
            case SaliencyProvider::File:
              if (config.file_heatmap.width != map.width() ||
                  config.file_heatmap.height != map.height())
                throw DimensionError(
                    "run_exploration: heatmap dimensions do not match the "
                    "environment");
              hm = config.file_heatmap;
              break;
            case SaliencyProvider::None:
              break;
          }
          field = extract_saliency_areas(hm, config.theta);
        } else {
          // criterion fired before any field existed; score with no areas
          field = SaliencyField(map.width(), map.height(), {}, config.theta);
        }
      }
      for (std::size_t i = 0; i < reachable.size(); ++i)
        s[i] = frontier_saliency(*field, reachable[i]);
    }

    UtilityParams params{config.strategy.alpha, config.strategy.beta};
    auto scored = score_frontiers(reachable, ig_raw, dist_raw, s, params);
    std::size_t pick = select_frontier(scored);
    const Frontier chosen = reachable[pick];
    std::int32_t target = targets[pick];
    double s_value = s[pick];

    // the centroid target of a wide frontier often lands on a vantage the
    // robot has already scanned from (commonly its own cell); a deterministic
    // full-circle sensor gains nothing there, so steer to the nearest fresh
    // cell of the same frontier instead
    bool fresh_vantage = scanned_from.count(target) == 0;
    if (full_circle && !fresh_vantage) {
      std::int32_t alt = -1;
      double best = std::numeric_limits<double>::infinity();
      for (std::int32_t c : chosen.cells)
        if (scanned_from.count(c) == 0 && dists.reached(c) &&
            dists.dist_m[c] < best) {
          best = dists.dist_m[c];
          alt = c;
        }
      if (alt >= 0) {
        target = alt;
        fresh_vantage = true;
      }
    }

    auto path = extract_path(dists, target);

    // walk the path, scanning every scan_stride meters and on arrival;
    // abort early if the chosen frontier is observed away
    double traveled = 0.0;
    int new_cells = 0;
    double next_scan_at = config.scan_stride_m;
    const double res = map.resolution();
    int cx = static_cast<int>(pose.x), cy = static_cast<int>(pose.y);
    double heading = pose.heading;
    bool vanished = false;

    auto frontier_alive = [&] {
      for (std::int32_t c : chosen.cells)
        if (is_frontier_cell(map, map.x_of(c), map.y_of(c))) return true;
      return false;
    };

    for (std::size_t leg = 1; leg < path->cells.size() && !vanished; ++leg) {
      int nx = map.x_of(path->cells[leg]), ny = map.y_of(path->cells[leg]);
      bool diag = nx != cx && ny != cy;
      traveled += diag ? res * std::sqrt(2.0) : res;
      heading = std::atan2(ny - cy, nx - cx);
      cx = nx;
      cy = ny;
      if (traveled >= next_scan_at && leg + 1 < path->cells.size()) {
        while (next_scan_at <= traveled) next_scan_at += config.scan_stride_m;
        new_cells += scan_here(Pose{static_cast<double>(cx),
                                    static_cast<double>(cy), heading});
        if (!frontier_alive()) vanished = true;
      }
    }
    if (!vanished) {
      new_cells += scan_here(
          Pose{static_cast<double>(cx), static_cast<double>(cy), heading});
    }

    pose = Pose{static_cast<double>(cx), static_cast<double>(cy), heading};
    cum_cost += traveled;
    frontiers = detect_frontiers(map, 1);
    record(static_cast<int>(trace.steps.size()), map.x_of(target),
           map.y_of(target), traveled, s_value);

    if (new_cells > 0) {
      zero_gain_strikes.clear();
    } else if (!fresh_vantage) {
      // only a frontier with no unscanned vantage left can strike out;
      // zero gain from a fresh cell still shrinks the untried set, so the
      // loop cannot cycle without the strikes
      if (++zero_gain_strikes[chosen.first_cell()] >= 2)
        blacklist.insert(chosen.first_cell());
    }
  }

  trace.final_map = map;
  return trace;
}

// A_x per threshold (first cumulative cost with coverage >= x), T-bar, and
// the final coverage.
inline MetricsRow compute_metrics(const ExplorationTrace& trace,
                                  const std::vector<double>& thresholds =
                                      default_thresholds()) {
  if (trace.steps.empty()) throw ParamError("compute_metrics: empty trace");
  MetricsRow row;
  row.t_bar = trace.t_bar;
  row.final_coverage = trace.steps.back().coverage;
  for (double x : thresholds) {
    std::optional<double> a;
    for (const TraceStep& s : trace.steps)
      if (s.coverage >= x) {
        a = s.cum_cost_m;
        break;
      }
    row.a_x.push_back(a);
  }
  return row;
}

inline const char* trace_csv_header() {
  return "step,frontier_x,frontier_y,path_cost_m,cum_cost_m,coverage,"
         "frontier_count,s_value,explored_flag";
}

inline void write_trace_csv(const ExplorationTrace& trace, std::ostream& out) {
  out << trace_csv_header() << "\n";
  char buf[128];
  for (const TraceStep& s : trace.steps) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%d,%.17g,%d\n",
                  s.step, s.frontier_x, s.frontier_y, s.path_cost_m,
                  s.cum_cost_m, s.coverage, s.frontier_count, s.s_value,
                  s.explored_flag);
    out << buf;
  }
}

// Rebuilds a trace from its CSV form; t_bar is recovered from the first
// row flagged Explored.
inline ExplorationTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw FormatError("trace csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != trace_csv_header())
    throw FormatError("trace csv: unexpected header");
  ExplorationTrace trace;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    TraceStep s;
    char trail = 0;
    int got = std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf,%lf,%d,%lf,%d%c",
                          &s.step, &s.frontier_x, &s.frontier_y,
                          &s.path_cost_m, &s.cum_cost_m, &s.coverage,
                          &s.frontier_count, &s.s_value, &s.explored_flag,
                          &trail);
    if (got != 9)
      throw FormatError("trace csv: malformed row '" + line + "'");
    if (s.explored_flag == 1 && !trace.t_bar) trace.t_bar = s.cum_cost_m;
    trace.steps.push_back(s);
  }
  return trace;
}

}  // namespace salex
