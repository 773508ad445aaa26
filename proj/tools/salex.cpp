#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "salex/bench.hpp"

using namespace salex;

namespace {

namespace fs = std::filesystem;

struct ExploreArgs {
  std::string env;
  std::string out = "trace.csv";
  std::string strategy = "NF";
  std::string provider = "none";
  std::string termination = "no-frontiers";
  std::string overlays;
  std::uint64_t seed = 0;
  double range = 1.5;
  double theta = 0.1;
  double alpha = -1.0;  // negative means not given
  double beta = 0.0;
  bool beta_given = false;
};

int cmd_explore(const ExploreArgs& a) {
  ExplorationConfig cfg;
  cfg.environment = parse_env_source(a.env).realize();
  cfg.strategy = parse_strategy(a.strategy);
  if (a.alpha >= 0.0) cfg.strategy.alpha = a.alpha;
  if (a.beta_given) {
    cfg.strategy.beta = a.beta;
    cfg.strategy.biased = true;
  }
  cfg.sensor.range_m = a.range;
  cfg.theta = a.theta;
  cfg.termination = parse_termination(a.termination);
  cfg.seed = a.seed;

  std::string heatmap_path;
  if (a.provider == "none") {
    cfg.provider = SaliencyProvider::None;
  } else if (a.provider == "oracle") {
    cfg.provider = SaliencyProvider::Oracle;
  } else if (a.provider == "heuristic") {
    cfg.provider = SaliencyProvider::Heuristic;
  } else if (a.provider.rfind("file:", 0) == 0) {
    cfg.provider = SaliencyProvider::File;
    heatmap_path = a.provider.substr(5);
    std::ifstream in(heatmap_path, std::ios::binary);
    if (!in) throw FormatError("cannot open heatmap: " + heatmap_path);
    cfg.file_heatmap = load_heatmap(in);
  } else {
    throw ParamError("provider must be none, oracle, heuristic or file:<pgm>");
  }

  auto trace = run_exploration(cfg);
  {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw FormatError("cannot write trace: " + a.out);
    write_trace_csv(trace, out);
  }

  if (!a.overlays.empty()) {
    fs::create_directories(a.overlays);
    save_map_file(trace.final_map, (fs::path(a.overlays) / "map.pgm").string());
    Heatmap frontier_overlay(trace.final_map.width(),
                             trace.final_map.height());
    for (const Frontier& f : detect_frontiers(trace.final_map, 1))
      for (std::int32_t c : f.cells) frontier_overlay.values[c] = 1.0;
    std::ofstream fo(fs::path(a.overlays) / "frontiers.pgm",
                     std::ios::binary);
    save_heatmap(frontier_overlay, fo);
    if (cfg.provider != SaliencyProvider::None) {
      Heatmap hm;
      if (cfg.provider == SaliencyProvider::Oracle)
        hm = oracle_heatmap(cfg.environment, trace.final_map,
                            cfg.saliency_decay_cells);
      else if (cfg.provider == SaliencyProvider::Heuristic)
        hm = heuristic_heatmap(trace.final_map, cfg.sensor,
                               cfg.saliency_decay_cells);
      else
        hm = cfg.file_heatmap;
      std::ofstream ho(fs::path(a.overlays) / "heatmap.pgm",
                       std::ios::binary);
      save_heatmap(hm, ho);
    }
  }

  const TraceStep& last = trace.steps.back();
  std::printf("steps=%zu coverage=%.6f distance_m=%.3f", trace.steps.size(),
              last.coverage, last.cum_cost_m);
  if (trace.t_bar)
    std::printf(" t_bar=%.3f", *trace.t_bar);
  std::printf(" trace=%s\n", a.out.c_str());
  return 0;
}

struct BenchArgs {
  std::string spec;
  std::string out;
  std::string strategy;
  std::string provider;
  std::string termination;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double theta = -1.0;
  double alpha = -1.0;
  double beta = 0.0;
  bool beta_given = false;
  int jobs = 1;
};

int cmd_bench(const BenchArgs& a) {
  BenchmarkSpec spec = parse_spec_path(a.spec);
  if (!a.out.empty()) spec.output_dir = a.out;
  if (!a.strategy.empty()) spec.strategies = {parse_strategy(a.strategy)};
  if (a.alpha >= 0.0 || a.beta_given) {
    if (a.strategy.empty())
      throw ParamError("--alpha/--beta need --strategy to apply to");
    if (a.alpha >= 0.0) spec.strategies[0].alpha = a.alpha;
    if (a.beta_given) {
      spec.strategies[0].beta = a.beta;
      spec.strategies[0].biased = true;
    }
  }
  if (a.seed_given) spec.seeds = {a.seed};
  if (a.theta >= 0.0) spec.settings.theta = a.theta;
  if (!a.provider.empty()) spec.settings.provider = a.provider;
  if (!a.termination.empty()) spec.settings.termination = a.termination;

  auto table = run_benchmark(spec, a.jobs);
  std::ifstream md(fs::path(spec.output_dir) / "table.md");
  std::cout << md.rdbuf();
  std::printf("wrote %zu rows under %s\n", table.rows.size(),
              spec.output_dir.c_str());
  return 0;
}

struct GenmapArgs {
  std::string source = "gen:";
  std::string out = "map.pgm";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int cmd_genmap(const GenmapArgs& a) {
  EnvSource src = parse_env_source(a.source);
  if (a.seed_given) {
    if (!src.generated)
      throw ParamError("--seed only applies to gen: sources");
    src.gen_seed = a.seed;
  }
  GridMap map = src.realize();
  save_map_file(map, a.out);
  int free = 0;
  for (std::int32_t i = 0; i < map.size(); ++i)
    if (map.at(i) == CellState::Free) ++free;
  std::printf("%dx%d map, %d free cells -> %s\n", map.width(), map.height(),
              free, a.out.c_str());
  return 0;
}

struct MetricsArgs {
  std::string trace;
  std::string out;
};

int cmd_metrics(const MetricsArgs& a) {
  std::ifstream in(a.trace, std::ios::binary);
  if (!in) throw FormatError("cannot open trace: " + a.trace);
  auto trace = read_trace_csv(in);
  auto row = compute_metrics(trace);

  std::ostringstream text;
  const auto& thresholds = default_thresholds();
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    char label[32];
    std::snprintf(label, sizeof label, "A_%g", thresholds[i] * 100.0);
    text << (i ? "," : "") << label;
  }
  text << ",t_bar,final_coverage\n";
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (i) text << ',';
    if (row.a_x[i]) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", *row.a_x[i]);
      text << buf;
    }
  }
  text << ',';
  if (row.t_bar) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *row.t_bar);
    text << buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", row.final_coverage);
  text << ',' << buf << '\n';

  if (a.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw FormatError("cannot write metrics: " + a.out);
    out << text.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frontier exploration toolkit"};
  app.require_subcommand(1);

  ExploreArgs ex;
  auto* explore = app.add_subcommand(
      "explore", "run one exploration and write its trace CSV");
  explore->add_option("env", ex.env,
                      "map file or gen:seed=..,size=..,rooms=..")
      ->required();
  explore->add_option("--out", ex.out, "trace CSV path");
  explore->add_option("--seed", ex.seed, "start pose seed");
  explore->add_option("--strategy", ex.strategy, "NF, IG, IG* or base+S(b)");
  explore->add_option("--alpha", ex.alpha, "override the gain weight");
  explore->add_option("--beta", ex.beta, "override the saliency weight")
      ->each([&](const std::string&) { ex.beta_given = true; });
  explore->add_option("--theta", ex.theta, "saliency threshold");
  explore->add_option("--provider", ex.provider,
                      "none, oracle, heuristic or file:<pgm>");
  explore->add_option("--termination", ex.termination,
                      "no-frontiers, min-frontier-length:L, coverage:t or "
                      "external:path");
  explore->add_option("--range", ex.range, "sensor range in meters");
  explore->add_option("--overlays", ex.overlays,
                      "directory for map/frontier/heatmap PGM overlays");

  BenchArgs bn;
  auto* bench = app.add_subcommand(
      "bench", "run the cross-product described by a spec file");
  bench->add_option("--spec", bn.spec, "benchmark spec file")->required();
  bench->add_option("--out", bn.out, "override the output directory");
  bench->add_option("--jobs", bn.jobs, "worker threads");
  bench->add_option("--seed", bn.seed, "replace the seed list")
      ->each([&](const std::string&) { bn.seed_given = true; });
  bench->add_option("--strategy", bn.strategy, "replace the strategy list");
  bench->add_option("--alpha", bn.alpha, "override the gain weight");
  bench->add_option("--beta", bn.beta, "override the saliency weight")
      ->each([&](const std::string&) { bn.beta_given = true; });
  bench->add_option("--theta", bn.theta, "saliency threshold");
  bench->add_option("--provider", bn.provider, "oracle or heuristic");
  bench->add_option("--termination", bn.termination, "termination criterion");

  GenmapArgs gm;
  auto* genmap = app.add_subcommand("genmap", "write a floor plan map file");
  genmap->add_option("source", gm.source,
                     "gen:seed=..,size=..,rooms=.. or a map to convert");
  genmap->add_option("--out", gm.out, "output map path (.pgm or .txt)");
  genmap->add_option("--seed", gm.seed, "override the generator seed")
      ->each([&](const std::string&) { gm.seed_given = true; });

  MetricsArgs mt;
  auto* metrics =
      app.add_subcommand("metrics", "coverage thresholds from a trace CSV");
  metrics->add_option("trace", mt.trace, "trace CSV path")->required();
  metrics->add_option("--out", mt.out, "write the row here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (explore->parsed()) return cmd_explore(ex);
    if (bench->parsed()) return cmd_bench(bn);
    if (genmap->parsed()) return cmd_genmap(gm);
    return cmd_metrics(mt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "salex: %s\n", e.what());
    return 1;
  }
}
