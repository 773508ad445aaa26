#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "salex/envgen.hpp"
#include "salex/errors.hpp"
#include "salex/map_io.hpp"
#include "salex/simulator.hpp"

namespace salex {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double to_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParamError(std::string(what) + ": bad number '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v))
    throw ParamError(std::string(what) + ": bad number '" + s + "'");
  return v;
}

inline long to_long(const std::string& s, const char* what) {
  std::size_t used = 0;
  long v;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw ParamError(std::string(what) + ": bad integer '" + s + "'");
  }
  if (used != s.size())
    throw ParamError(std::string(what) + ": bad integer '" + s + "'");
  return v;
}

inline std::uint64_t to_seed(const std::string& s, const char* what) {
  std::size_t used = 0;
  unsigned long long v;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw ParamError(std::string(what) + ": bad seed '" + s + "'");
  }
  if (used != s.size())
    throw ParamError(std::string(what) + ": bad seed '" + s + "'");
  return static_cast<std::uint64_t>(v);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace detail

// one benchmark environment: either a generator call or a map file
struct EnvSource {
  std::string text;
  bool generated = false;
  std::uint64_t gen_seed = 0;
  GenParams gen_params;
  std::string path;

  GridMap realize() const {
    if (generated) return generate_environment(gen_seed, gen_params);
    return load_map_file(path);
  }
};

// "gen:seed=3,size=64,rooms=4,corridor=6,resolution=0.1" or a map file path
inline EnvSource parse_env_source(const std::string& raw) {
  EnvSource src;
  src.text = detail::trim(raw);
  if (src.text.empty()) throw ParamError("env source: empty");
  if (src.text.rfind("gen:", 0) != 0) {
    src.path = src.text;
    return src;
  }
  src.generated = true;
  std::string body = src.text.substr(4);
  if (body.empty()) return src;  // all defaults
  for (const std::string& part : detail::split(body, ',')) {
    std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw ParamError("env source: expected key=value, got '" + part + "'");
    std::string key = detail::trim(part.substr(0, eq));
    std::string val = detail::trim(part.substr(eq + 1));
    if (key == "seed")
      src.gen_seed = detail::to_seed(val, "env source seed");
    else if (key == "size")
      src.gen_params.size = static_cast<int>(detail::to_long(val, "env size"));
    else if (key == "rooms")
      src.gen_params.rooms =
          static_cast<int>(detail::to_long(val, "env rooms"));
    else if (key == "corridor")
      src.gen_params.corridor_width =
          static_cast<int>(detail::to_long(val, "env corridor"));
    else if (key == "resolution")
      src.gen_params.resolution = detail::to_double(val, "env resolution");
    else
      throw ParamError("env source: unknown key '" + key + "'");
  }
  return src;
}

// settings shared by every run of a benchmark
struct RunSettings {
  SensorModel sensor{1.5, kTwoPi, 720};
  double theta = 0.1;
  double scan_stride_m = 1.0;
  int min_frontier_length = 3;
  int saliency_decay_cells = 5;
  std::string termination = "no-frontiers";
  std::string provider = "oracle";  // applied to biased strategies only
};

struct BenchmarkSpec {
  std::vector<EnvSource> environments;
  std::vector<StrategySpec> strategies;
  std::vector<std::uint64_t> seeds;
  std::vector<double> thresholds = default_thresholds();
  std::string output_dir = "bench_out";
  RunSettings settings;
};

// plain key=value lines; env, strategy and seed repeat, '#' starts a comment
inline BenchmarkSpec parse_spec_file(std::istream& in) {
  BenchmarkSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParamError("spec line " + std::to_string(lineno) +
                       ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (key == "env") {
      spec.environments.push_back(parse_env_source(val));
    } else if (key == "strategy") {
      spec.strategies.push_back(parse_strategy(val));
    } else if (key == "seed") {
      spec.seeds.push_back(detail::to_seed(val, "spec seed"));
    } else if (key == "thresholds") {
      spec.thresholds.clear();
      for (const std::string& t : detail::split(val, ','))
        spec.thresholds.push_back(
            detail::to_double(detail::trim(t), "spec threshold"));
    } else if (key == "out") {
      spec.output_dir = val;
    } else if (key == "range") {
      spec.settings.sensor.range_m = detail::to_double(val, "spec range");
    } else if (key == "stride") {
      spec.settings.scan_stride_m = detail::to_double(val, "spec stride");
    } else if (key == "theta") {
      spec.settings.theta = detail::to_double(val, "spec theta");
    } else if (key == "decay") {
      spec.settings.saliency_decay_cells =
          static_cast<int>(detail::to_long(val, "spec decay"));
    } else if (key == "min-frontier-length") {
      spec.settings.min_frontier_length =
          static_cast<int>(detail::to_long(val, "spec min-frontier-length"));
    } else if (key == "termination") {
      spec.settings.termination = val;
    } else if (key == "provider") {
      spec.settings.provider = val;
    } else {
      throw ParamError("spec line " + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    }
  }
  return spec;
}

inline BenchmarkSpec parse_spec_path(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open spec file: " + path);
  return parse_spec_file(in);
}

// mean and sample stddev over the runs that produced a value
struct AggCell {
  int included = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct TableRow {
  std::string environment;
  std::string strategy;
  int runs_total = 0;
  int runs_ok = 0;
  std::vector<AggCell> a_x;
  AggCell t_bar;
  std::vector<std::string> errors;  // "s<seed>: message" per failed run
};

struct MetricsTable {
  std::vector<double> thresholds;
  std::vector<TableRow> rows;
};

namespace detail {

inline AggCell aggregate(const std::vector<double>& vals) {
  AggCell c;
  c.included = static_cast<int>(vals.size());
  if (vals.empty()) return c;
  double sum = 0.0;
  for (double v : vals) sum += v;
  c.mean = sum / c.included;
  if (c.included >= 2) {
    double sq = 0.0;
    for (double v : vals) sq += (v - c.mean) * (v - c.mean);
    c.stddev = std::sqrt(sq / (c.included - 1));
  }
  return c;
}

inline std::string sanitize_strategy(const std::string& name) {
  std::string out;
  for (char ch : name) {
    if (ch == '*')
      out += "star";
    else if (ch == '+')
      out += '_';
    else if (ch == '(' || ch == ')')
      continue;
    else
      out += ch;
  }
  return out;
}

inline std::string threshold_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "A_%g", x * 100.0);
  return buf;
}

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string f2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    out += ch;
  }
  out += '"';
  return out;
}

// "12.34 ± 5.67 (3/5)", "12.34", or an em dash when nothing reached it
inline std::string md_cell(const AggCell& c, int runs_ok) {
  if (c.included == 0) return "—";
  std::string out = f2(c.mean);
  if (c.included >= 2) out += " ± " + f2(c.stddev);
  if (c.included < runs_ok)
    out += " (" + std::to_string(c.included) + "/" + std::to_string(runs_ok) +
           ")";
  return out;
}

}  // namespace detail

inline MetricsTable run_benchmark(const BenchmarkSpec& spec, int jobs = 1) {
  if (spec.environments.empty())
    throw ParamError("run_benchmark: no environments");
  if (spec.strategies.empty()) throw ParamError("run_benchmark: no strategies");
  if (spec.seeds.empty()) throw ParamError("run_benchmark: no seeds");
  if (spec.thresholds.empty()) throw ParamError("run_benchmark: no thresholds");
  for (double x : spec.thresholds)
    if (!(x > 0.0) || x > 1.0)
      throw ParamError("run_benchmark: thresholds must lie in (0, 1]");
  if (jobs < 1) throw ParamError("run_benchmark: jobs must be positive");

  SaliencyProvider biased_provider;
  if (spec.settings.provider == "oracle")
    biased_provider = SaliencyProvider::Oracle;
  else if (spec.settings.provider == "heuristic")
    biased_provider = SaliencyProvider::Heuristic;
  else
    throw ParamError("run_benchmark: provider must be oracle or heuristic");
  TerminationCriterion term = parse_termination(spec.settings.termination);

  namespace fs = std::filesystem;
  fs::create_directories(fs::path(spec.output_dir) / "traces");
  fs::create_directories(fs::path(spec.output_dir) / "progress");

  // realize each environment once; a failure here fails all its runs
  std::vector<std::optional<GridMap>> envs(spec.environments.size());
  std::vector<std::string> env_errors(spec.environments.size());
  for (std::size_t i = 0; i < spec.environments.size(); ++i) {
    try {
      envs[i] = spec.environments[i].realize();
    } catch (const std::exception& e) {
      env_errors[i] = e.what();
    }
  }

  struct RunResult {
    bool ok = false;
    std::string error;
    ExplorationTrace trace;
    MetricsRow metrics;
  };
  const std::size_t ne = spec.environments.size();
  const std::size_t ns = spec.strategies.size();
  const std::size_t nr = spec.seeds.size();
  std::vector<RunResult> results(ne * ns * nr);

  auto do_run = [&](std::size_t flat) {
    RunResult& r = results[flat];
    std::size_t ei = flat / (ns * nr);
    std::size_t si = (flat / nr) % ns;
    std::size_t ki = flat % nr;
    if (!envs[ei]) {
      r.error = env_errors[ei];
      return;
    }
    try {
      ExplorationConfig cfg;
      cfg.environment = *envs[ei];
      cfg.strategy = spec.strategies[si];
      cfg.sensor = spec.settings.sensor;
      cfg.provider = spec.strategies[si].biased ? biased_provider
                                                : SaliencyProvider::None;
      cfg.termination = term;
      cfg.seed = spec.seeds[ki];
      cfg.scan_stride_m = spec.settings.scan_stride_m;
      cfg.min_frontier_length = spec.settings.min_frontier_length;
      cfg.theta = spec.settings.theta;
      cfg.saliency_decay_cells = spec.settings.saliency_decay_cells;
      r.trace = run_exploration(cfg);
      r.metrics = compute_metrics(r.trace, spec.thresholds);
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  };

  // fixed job list, atomic dispatch, results land at their own index, so
  // aggregation order never depends on completion order
  const std::size_t total = results.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < total;
         i = next.fetch_add(1))
      do_run(i);
  };
  std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), total);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  MetricsTable table;
  table.thresholds = spec.thresholds;
  std::ofstream failures(fs::path(spec.output_dir) / "failures.csv",
                         std::ios::binary);
  failures << "environment,strategy,seed,error\n";

  for (std::size_t ei = 0; ei < ne; ++ei) {
    std::string env_name = "e" + std::to_string(ei + 1);
    for (std::size_t si = 0; si < ns; ++si) {
      std::string strat_name = spec.strategies[si].name();
      std::string file_stem =
          env_name + "__" + detail::sanitize_strategy(strat_name);
      TableRow row;
      row.environment = env_name;
      row.strategy = strat_name;
      row.runs_total = static_cast<int>(nr);

      std::ofstream progress(
          fs::path(spec.output_dir) / "progress" / (file_stem + ".csv"),
          std::ios::binary);
      progress << "seed,cum_cost_m,coverage\n";

      std::vector<std::vector<double>> ax_vals(spec.thresholds.size());
      std::vector<double> tbar_vals;
      for (std::size_t ki = 0; ki < nr; ++ki) {
        const RunResult& r = results[(ei * ns + si) * nr + ki];
        if (!r.ok) {
          row.errors.push_back("s" + std::to_string(spec.seeds[ki]) + ": " +
                               r.error);
          failures << env_name << ',' << detail::csv_quote(strat_name) << ','
                   << spec.seeds[ki] << ',' << detail::csv_quote(r.error)
                   << '\n';
          continue;
        }
        ++row.runs_ok;
        std::ofstream trace_out(
            fs::path(spec.output_dir) / "traces" /
                (file_stem + "__s" + std::to_string(spec.seeds[ki]) + ".csv"),
            std::ios::binary);
        write_trace_csv(r.trace, trace_out);
        for (const TraceStep& s : r.trace.steps)
          progress << spec.seeds[ki] << ',' << detail::g17(s.cum_cost_m) << ','
                   << detail::g17(s.coverage) << '\n';
        for (std::size_t ti = 0; ti < spec.thresholds.size(); ++ti)
          if (r.metrics.a_x[ti]) ax_vals[ti].push_back(*r.metrics.a_x[ti]);
        if (r.metrics.t_bar) tbar_vals.push_back(*r.metrics.t_bar);
      }
      for (const auto& vals : ax_vals) row.a_x.push_back(detail::aggregate(vals));
      row.t_bar = detail::aggregate(tbar_vals);
      table.rows.push_back(std::move(row));
    }
  }

  // table.csv: machine readable, full precision
  {
    std::ofstream out(fs::path(spec.output_dir) / "table.csv",
                      std::ios::binary);
    out << "environment,strategy,runs_ok,runs_total";
    for (double x : spec.thresholds) {
      std::string label = detail::threshold_label(x);
      out << ',' << label << "_mean," << label << "_std," << label << "_n";
    }
    out << ",tbar_mean,tbar_std,tbar_n\n";
    for (const TableRow& row : table.rows) {
      out << row.environment << ',' << detail::csv_quote(row.strategy) << ','
          << row.runs_ok << ',' << row.runs_total;
      auto cell = [&](const AggCell& c) {
        out << ',';
        if (c.included > 0) out << detail::g17(c.mean);
        out << ',';
        if (c.included >= 2) out << detail::g17(c.stddev);
        out << ',' << c.included;
      };
      for (const AggCell& c : row.a_x) cell(c);
      cell(row.t_bar);
      out << '\n';
    }
  }

  // table.md: per environment and column the smallest mean is bolded
  {
    std::ofstream out(fs::path(spec.output_dir) / "table.md",
                      std::ios::binary);
    out << "| environment | strategy | runs |";
    for (double x : spec.thresholds) out << ' ' << detail::threshold_label(x)
                                         << " |";
    out << " T-bar |\n";
    out << "|---|---|---|";
    for (std::size_t i = 0; i <= spec.thresholds.size(); ++i) out << "---|";
    out << '\n';

    const std::size_t ncols = spec.thresholds.size() + 1;
    auto cell_of = [&](const TableRow& row, std::size_t col) -> const AggCell& {
      return col < spec.thresholds.size() ? row.a_x[col] : row.t_bar;
    };
    for (std::size_t ei = 0; ei < ne; ++ei) {
      std::vector<double> best(ncols,
                               std::numeric_limits<double>::infinity());
      for (std::size_t si = 0; si < ns; ++si) {
        const TableRow& row = table.rows[ei * ns + si];
        for (std::size_t col = 0; col < ncols; ++col) {
          const AggCell& c = cell_of(row, col);
          if (c.included > 0) best[col] = std::min(best[col], c.mean);
        }
      }
      for (std::size_t si = 0; si < ns; ++si) {
        const TableRow& row = table.rows[ei * ns + si];
        out << "| " << row.environment << " | " << row.strategy << " | ";
        if (row.runs_ok == row.runs_total)
          out << row.runs_ok;
        else
          out << row.runs_ok << '/' << row.runs_total;
        out << " |";
        for (std::size_t col = 0; col < ncols; ++col) {
          const AggCell& c = cell_of(row, col);
          std::string text = detail::md_cell(c, row.runs_ok);
          if (c.included > 0 && ns > 1 && c.mean == best[col])
            text = "**" + text + "**";
          out << ' ' << text << " |";
        }
        out << '\n';
      }
    }
  }

  return table;
}

}  // namespace salex
