// End-to-end acceptance suite. Runs outside the unit framework so each
// criterion prints exactly one PASS/FAIL line with its wall time; the exit
// code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "salex/envgen.hpp"
#include "salex/simulator.hpp"

#include "oracles.hpp"

using namespace salex;

namespace {

void addf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  out += "       ";
  out += buf;
  out += '\n';
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::vector<std::int32_t>> canon(
    std::vector<std::vector<std::int32_t>> groups) {
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end());
  return groups;
}

std::vector<std::vector<std::int32_t>> frontier_cells(
    const std::vector<Frontier>& frontiers) {
  std::vector<std::vector<std::int32_t>> out;
  for (const Frontier& f : frontiers) out.push_back(f.cells);
  return out;
}

// 1. Component-by-component equality against the brute-force labeling.
bool c1_frontier_components(std::string& detail) {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 100; ++round) {
    GridMap map = oracles::random_map(rng, 32, 32, 0.55, 0.2);
    auto got = canon(frontier_cells(detect_frontiers(map, 1)));
    auto want = canon(oracles::mask_components(oracles::frontier_mask(map),
                                               map.width(), map.height()));
    if (got != want) {
      addf(detail, "round %d: %zu components vs %zu expected", round,
           got.size(), want.size());
      return false;
    }
  }
  return true;
}

// 2. Scan and optimistic-gain cell sets against the exact segment oracle.
bool c2_visibility(std::string& detail) {
  std::mt19937_64 rng(202);
  int frontier_total = 0;
  for (int round = 0; round < 50; ++round) {
    GridMap map = oracles::random_map(rng, 16, 16, 0.6, 0.25);
    SensorModel sensor{round % 2 ? 0.85 : 0.55, kTwoPi, 720};
    double range_cells = sensor.range_m / map.resolution();

    for (const Frontier& f : detect_frontiers(map, 1)) {
      RationalPoint o = ig_origin(map, f);
      int want = static_cast<int>(
          oracles::sat_visible_cells(map, o.nx, o.ny, o.den, range_cells, true)
              .size());
      int got = ig_optimistic(map, f, sensor);
      if (got != want) {
        addf(detail, "round %d: gain %d vs %d at frontier cell %d", round, got,
             want, f.first_cell());
        return false;
      }
      ++frontier_total;
    }

    // same grid with the unknowns filled in doubles as a scan environment
    GridMap gt = map;
    std::vector<std::int32_t> free_cells;
    for (std::int32_t i = 0; i < gt.size(); ++i) {
      if (gt.at(i) == CellState::Unknown) gt.set(i, CellState::Free);
      if (gt.at(i) == CellState::Free) free_cells.push_back(i);
    }
    if (free_cells.empty()) continue;
    std::int32_t pc = free_cells[rng() % free_cells.size()];
    Scan scan = simulate_scan(
        gt, Pose{double(gt.x_of(pc)), double(gt.y_of(pc)), 0.0}, sensor);
    std::vector<std::int32_t> got;
    for (const auto& obs : scan.observations) got.push_back(obs.cell);
    auto want = oracles::sat_visible_cells(gt, gt.x_of(pc), gt.y_of(pc), 1,
                                           range_cells);
    if (got != want) {
      addf(detail, "round %d: scan saw %zu cells, oracle %zu from cell %d",
           round, got.size(), want.size(), pc);
      return false;
    }
  }
  if (frontier_total < 200) {
    addf(detail, "only %d frontiers exercised", frontier_total);
    return false;
  }
  return true;
}

// 3. Thresholded-region extraction against an independent labeling, plus
// the per-region means.
bool c3_saliency_areas(std::string& detail) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 100; ++round) {
    Heatmap hm(64, 64);
    for (double& v : hm.values) v = u(rng) < 0.4 ? 0.0 : u(rng);
    SaliencyField field = extract_saliency_areas(hm, 0.1);

    std::vector<bool> mask(hm.values.size(), false);
    for (std::size_t i = 0; i < hm.values.size(); ++i)
      mask[i] = hm.values[i] >= 0.1 && hm.values[i] > 0.0;
    auto want = canon(oracles::mask_components(mask, 64, 64));

    std::vector<std::vector<std::int32_t>> got_cells;
    for (const SaliencyArea& a : field.areas()) got_cells.push_back(a.cells);
    auto got = canon(got_cells);
    if (got != want) {
      addf(detail, "round %d: %zu areas vs %zu expected", round, got.size(),
           want.size());
      return false;
    }
    for (const SaliencyArea& a : field.areas()) {
      double sum = 0.0;
      for (std::int32_t c : a.cells) sum += hm.values[c];
      if (std::fabs(a.mean_value - sum / a.cells.size()) > 1e-12) {
        addf(detail, "round %d: area mean %.17g vs %.17g", round, a.mean_value,
             sum / a.cells.size());
        return false;
      }
    }
  }
  return true;
}

// 4. With beta 0 the utility must equal the plain two-term blend, and with
// alpha 0 as well the selection must be the nearest candidate.
bool c4_utility_degeneration(std::string& detail) {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 1000; ++round) {
    std::size_t n = 1 + rng() % 8;
    std::vector<Frontier> frontiers(n);
    std::vector<double> ig(n), dist(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
      frontiers[i].cells = {static_cast<std::int32_t>(3 * i + 1)};
      frontiers[i].length = 1;
      ig[i] = 100.0 * u(rng);
      dist[i] = i > 0 && u(rng) < 0.3 ? dist[rng() % i] : 0.05 + 50.0 * u(rng);
      s[i] = 0.25 * u(rng);
    }
    double alpha = u(rng);

    auto norm = [](const std::vector<double>& v) {
      double lo = *std::min_element(v.begin(), v.end());
      double hi = *std::max_element(v.begin(), v.end());
      std::vector<double> out(v.size(), 0.0);
      if (hi > lo)
        for (std::size_t i = 0; i < v.size(); ++i)
          out[i] = (v[i] - lo) / (hi - lo);
      return out;
    };
    auto ig_n = norm(ig);
    auto dist_n = norm(dist);

    auto scored = score_frontiers(frontiers, ig, dist, s, {alpha, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
      double want = alpha * ig_n[i] - (1.0 - alpha) * dist_n[i];
      if (std::fabs(scored[i].utility - want) > 1e-12) {
        addf(detail, "round %d: utility %.17g vs %.17g", round,
             scored[i].utility, want);
        return false;
      }
    }

    auto nearest = score_frontiers(frontiers, ig, dist, s, {0.0, 0.0});
    std::size_t got = select_frontier(nearest);
    std::size_t want = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (dist[i] < dist[want] ||
          (dist[i] == dist[want] &&
           frontiers[i].first_cell() < frontiers[want].first_cell()))
        want = i;
    if (got != want) {
      addf(detail, "round %d: selected %zu (d=%.6g), nearest is %zu (d=%.6g)",
           round, got, dist[got], want, dist[want]);
      return false;
    }
  }
  return true;
}

// 5. Counting only reachable cells can never beat the optimistic count.
bool c5_gain_dominance(std::string& detail) {
  std::mt19937_64 rng(505);
  const double ranges[] = {0.55, 0.9, 1.3};
  int frontier_total = 0;
  for (int round = 0; round < 100; ++round) {
    GridMap gt = oracles::random_map(rng, 24, 24, 0.72, 0.28);
    std::vector<std::int32_t> free_cells;
    for (std::int32_t i = 0; i < gt.size(); ++i)
      if (gt.at(i) == CellState::Free) free_cells.push_back(i);
    if (free_cells.empty()) continue;

    SensorModel sensor{ranges[round % 3], kTwoPi, 720};
    GridMap map(24, 24, gt.resolution());
    int scans = 1 + rng() % 3;
    for (int k = 0; k < scans; ++k) {
      std::int32_t pc = free_cells[rng() % free_cells.size()];
      apply_scan(map, simulate_scan(
                          gt, Pose{double(gt.x_of(pc)), double(gt.y_of(pc)), 0.0},
                          sensor));
    }
    for (const Frontier& f : detect_frontiers(map, 1)) {
      int opt = ig_optimistic(map, f, sensor);
      int tru = ig_true(gt, map, f, sensor);
      if (tru > opt) {
        addf(detail, "round %d: true gain %d exceeds optimistic %d", round,
             tru, opt);
        return false;
      }
      ++frontier_total;
    }
  }
  if (frontier_total < 100) {
    addf(detail, "only %d frontiers exercised", frontier_total);
    return false;
  }
  return true;
}

std::string trace_bytes(const ExplorationConfig& cfg) {
  std::ostringstream out;
  write_trace_csv(run_exploration(cfg), out);
  return out.str();
}

// 6. Same config, same seed, same bytes.
bool c6_determinism(std::string& detail) {
  GridMap office = generate_environment(7, {96, 8, 6, 0.1});
  GridMap small = generate_environment(9, {64, 6, 6, 0.1});

  struct Case {
    const GridMap* env;
    const char* strategy;
    SaliencyProvider provider;
    std::uint64_t seed;
  } cases[] = {
      {&office, "NF", SaliencyProvider::None, 3},
      {&office, "IG+S(2)", SaliencyProvider::Oracle, 4},
      {&small, "NF+S(-1.5)", SaliencyProvider::Heuristic, 5},
  };
  for (const Case& c : cases) {
    ExplorationConfig cfg;
    cfg.environment = *c.env;
    cfg.strategy = parse_strategy(c.strategy);
    cfg.sensor.range_m = 2.0;
    cfg.provider = c.provider;
    cfg.seed = c.seed;
    if (trace_bytes(cfg) != trace_bytes(cfg)) {
      addf(detail, "%s seed %llu produced differing traces", c.strategy,
           static_cast<unsigned long long>(c.seed));
      return false;
    }
  }
  return true;
}

// 7. Every preset finishes every generated map with nothing left unseen.
bool c7_completeness(std::string& detail) {
  const char* presets[] = {"NF",      "IG",       "IG*",
                           "NF+S(2)", "NF+S(-2)", "IG+S(2)"};
  bool ok = true;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    GenParams gp;
    gp.size = 128;
    gp.rooms = 8 + static_cast<int>(s % 6);
    gp.corridor_width = 6 + static_cast<int>(s % 4);
    GridMap env = generate_environment(s, gp);
    for (const char* preset : presets) {
      ExplorationConfig cfg;
      cfg.environment = env;
      cfg.strategy = parse_strategy(preset);
      cfg.sensor.range_m = 2.0;
      cfg.provider = cfg.strategy.biased ? SaliencyProvider::Oracle
                                         : SaliencyProvider::None;
      cfg.seed = s;
      ExplorationTrace tr = run_exploration(cfg);
      double cov = tr.steps.back().coverage;
      if (cov != 1.0) {
        addf(detail, "map seed %llu, %s: coverage %.6f",
             static_cast<unsigned long long>(s), preset, cov);
        ok = false;
      }
    }
  }
  return ok;
}

// 8. Directional benchmark claims: the saliency bias must help where it is
// supposed to. Medians over 5 run seeds, vote over 3 environments.
bool c8_bias_directions(std::string& detail) {
  const std::uint64_t env_seeds[] = {1, 2, 4};
  const std::uint64_t run_seeds[] = {1, 2, 3, 4, 5};
  int a_ok = 0, b_ok = 0, c_ok = 0;
  std::string table;
  for (std::uint64_t es : env_seeds) {
    GenParams gp;
    gp.size = 128;
    gp.rooms = 12;
    GridMap env = generate_environment(es, gp);

    auto metric = [&](const char* strategy, int threshold_idx) {
      std::vector<double> vals;
      for (std::uint64_t seed : run_seeds) {
        ExplorationConfig cfg;
        cfg.environment = env;
        cfg.strategy = parse_strategy(strategy);
        cfg.sensor.range_m = 3.0;
        cfg.provider = cfg.strategy.biased ? SaliencyProvider::Oracle
                                           : SaliencyProvider::None;
        cfg.seed = seed;
        MetricsRow row = compute_metrics(run_exploration(cfg));
        vals.push_back(row.a_x[threshold_idx].value_or(
            std::numeric_limits<double>::infinity()));
      }
      return median(vals);
    };
    auto t_bar_at_95 = [&](const char* strategy) {
      std::vector<double> vals;
      for (std::uint64_t seed : run_seeds) {
        ExplorationConfig cfg;
        cfg.environment = env;
        cfg.strategy = parse_strategy(strategy);
        cfg.sensor.range_m = 3.0;
        cfg.provider = SaliencyProvider::Oracle;
        cfg.seed = seed;
        cfg.termination = parse_termination("coverage:0.95");
        ExplorationTrace tr = run_exploration(cfg);
        vals.push_back(
            tr.t_bar.value_or(std::numeric_limits<double>::infinity()));
      }
      return median(vals);
    };

    double ig = metric("IG", 2), igs = metric("IG+S(2)", 2);
    double nf = metric("NF", 5), nfs = metric("NF+S(-2)", 5);
    double tneg = t_bar_at_95("NF+S(-2)"), tpos = t_bar_at_95("NF+S(2)");
    if (igs <= ig) ++a_ok;
    if (nfs <= nf) ++b_ok;
    if (tneg <= tpos) ++c_ok;
    addf(table,
         "env %llu: A70 IG+S(2) %.1f vs IG %.1f | A99 NF+S(-2) %.1f vs NF "
         "%.1f | T95 NF+S(-2) %.1f vs NF+S(2) %.1f",
         static_cast<unsigned long long>(es), igs, ig, nfs, nf, tneg, tpos);
  }
  bool ok = a_ok >= 2 && b_ok >= 2 && c_ok >= 2;
  if (!ok) {
    addf(detail, "votes: early-bias %d/3, late-bias %d/3, t95 %d/3", a_ok,
         b_ok, c_ok);
    detail += table;
  }
  return ok;
}

// 9. A threshold above the heat ceiling leaves every frontier unsalient;
// the biased strategies must still sweep the whole map.
bool c9_zero_saliency(std::string& detail) {
  GridMap env = generate_environment(11, {64, 6, 6, 0.1});
  const double theta = 0.35;

  std::int32_t first_free = -1;
  for (std::int32_t i = 0; i < env.size() && first_free < 0; ++i)
    if (env.at(i) == CellState::Free) first_free = i;
  GridMap partial(env.width(), env.height(), env.resolution());
  SensorModel sensor{1.2, kTwoPi, 720};
  apply_scan(partial,
             simulate_scan(env,
                           Pose{double(env.x_of(first_free)),
                                double(env.y_of(first_free)), 0.0},
                           sensor));
  Heatmap heat = oracle_heatmap(env, partial);
  if (!extract_saliency_areas(heat, theta).areas().empty()) {
    addf(detail, "threshold %.2f unexpectedly keeps saliency areas", theta);
    return false;
  }

  const char* presets[] = {"NF+S(2)",  "NF+S(-2)",  "IG+S(2)",
                           "IG+S(-2)", "IG*+S(2)", "IG*+S(-2)"};
  for (const char* preset : presets) {
    ExplorationConfig cfg;
    cfg.environment = env;
    cfg.strategy = parse_strategy(preset);
    cfg.sensor = sensor;
    cfg.provider = SaliencyProvider::Oracle;
    cfg.theta = theta;
    cfg.seed = 2;
    ExplorationTrace tr = run_exploration(cfg);
    for (const TraceStep& s : tr.steps)
      if (s.s_value != 0.0) {
        addf(detail, "%s: step %d has saliency %.6g", preset, s.step,
             s.s_value);
        return false;
      }
    if (tr.steps.back().coverage != 1.0) {
      addf(detail, "%s: coverage %.6f", preset, tr.steps.back().coverage);
      return false;
    }
  }
  return true;
}

// 10. Threshold-crossing costs against a linear scan, and monotone in the
// threshold.
bool c10_metrics(std::string& detail) {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& thresholds = default_thresholds();
  for (int round = 0; round < 1000; ++round) {
    std::size_t n = 1 + rng() % 60;
    ExplorationTrace tr;
    std::vector<double> cum(n), cov(n);
    double c = 0.4 * u(rng), d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) {
        c = std::min(1.0, c + 0.08 * u(rng));
        d += 4.0 * u(rng);
      }
      cov[i] = c;
      cum[i] = d;
      TraceStep s;
      s.step = static_cast<int>(i);
      s.coverage = c;
      s.cum_cost_m = d;
      tr.steps.push_back(s);
    }
    if (u(rng) < 0.5) {
      tr.steps.back().coverage = 1.0;
      cov.back() = 1.0;
    }

    MetricsRow row = compute_metrics(tr);
    double prev = -1.0;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      double want = oracles::first_cost_reaching(cum, cov, thresholds[i]);
      if (std::isnan(want) != !row.a_x[i].has_value()) {
        addf(detail, "round %d: threshold %.2f presence mismatch", round,
             thresholds[i]);
        return false;
      }
      if (row.a_x[i]) {
        if (*row.a_x[i] != want) {
          addf(detail, "round %d: threshold %.2f cost %.17g vs %.17g", round,
               thresholds[i], *row.a_x[i], want);
          return false;
        }
        if (*row.a_x[i] < prev) {
          addf(detail, "round %d: costs decrease across thresholds", round);
          return false;
        }
        prev = *row.a_x[i];
      } else if (i + 1 < thresholds.size() && row.a_x[i + 1]) {
        addf(detail, "round %d: gap in reached thresholds", round);
        return false;
      }
    }
  }
  return true;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 means untimed
  bool (*fn)(std::string&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "frontier components match brute-force labeling", 5, c1_frontier_components},
      {2, "scan and gain cells match the exact-geometry oracle", 5, c2_visibility},
      {3, "saliency areas match reference labeling and means", 10, c3_saliency_areas},
      {4, "zero bias recovers the plain blend and nearest choice", 0, c4_utility_degeneration},
      {5, "true gain never exceeds optimistic gain", 0, c5_gain_dominance},
      {6, "identical configs replay byte-identical traces", 0, c6_determinism},
      {7, "every preset fully explores 20 generated maps", 120, c7_completeness},
      {8, "saliency bias shifts costs in the claimed directions", 600, c8_bias_directions},
      {9, "all-zero saliency still yields full coverage", 0, c9_zero_saliency},
      {10, "threshold metrics match a linear scan", 0, c10_metrics},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      addf(detail, "exception: %s", e.what());
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    if (ok && c.budget_s > 0 && secs > c.budget_s) {
      ok = false;
      addf(detail, "over budget: %.1fs > %.0fs", secs, c.budget_s);
    }
    std::printf("%s %2d. %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                secs);
    if (!ok) {
      std::fputs(detail.c_str(), stdout);
      ++failed;
    }
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed;
}
