#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "salex/grid_map.hpp"
#include "salex/perception.hpp"

namespace salex {

enum class StrategyKind {
  NearestFrontier,    // distance only
  InfoGainOptimistic, // blend with ig_optimistic
  InfoGainTrue,       // blend with ig_true
};

struct StrategySpec {
  StrategyKind kind = StrategyKind::NearestFrontier;
  double alpha = 0.0;
  double beta = 0.0;
  bool biased = false;  // saliency term requested, even with beta == 0

  std::string name() const {
    std::string base = kind == StrategyKind::NearestFrontier ? "NF"
                       : kind == StrategyKind::InfoGainOptimistic ? "IG"
                                                                  : "IG*";
    if (!biased) return base;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s+S(%g)", base.c_str(), beta);
    return buf;
  }
};

// Accepts NF, IG, IG* (or IGstar), optionally followed by +S(beta),
// e.g. "NF+S(-2)" or "IGstar+S(4)".
inline StrategySpec parse_strategy(const std::string& text) {
  auto first = text.find_first_not_of(" \t");
  auto last = text.find_last_not_of(" \t");
  if (first == std::string::npos)
    throw ParamError("parse_strategy: empty strategy");
  std::string s = text.substr(first, last - first + 1);

  StrategySpec spec;
  std::string base = s;
  auto plus = s.find('+');
  if (plus != std::string::npos) {
    base = s.substr(0, plus);
    std::string suffix = s.substr(plus);
    if (suffix.size() < 5 || suffix.compare(0, 3, "+S(") != 0 ||
        suffix.back() != ')')
      throw ParamError("parse_strategy: bad bias suffix in '" + text + "'");
    std::string inner = suffix.substr(3, suffix.size() - 4);
    std::size_t used = 0;
    try {
      spec.beta = std::stod(inner, &used);
    } catch (const std::exception&) {
      throw ParamError("parse_strategy: bad beta in '" + text + "'");
    }
    if (used != inner.size() || !std::isfinite(spec.beta))
      throw ParamError("parse_strategy: bad beta in '" + text + "'");
    spec.biased = true;
  }

  if (base == "NF") {
    spec.kind = StrategyKind::NearestFrontier;
    spec.alpha = 0.0;
  } else if (base == "IG") {
    spec.kind = StrategyKind::InfoGainOptimistic;
    spec.alpha = 0.5;
  } else if (base == "IG*" || base == "IGstar") {
    spec.kind = StrategyKind::InfoGainTrue;
    spec.alpha = 0.5;
  } else {
    throw ParamError("parse_strategy: unknown strategy '" + text + "'");
  }
  return spec;
}

struct UtilityParams {
  double alpha = 0.5;
  double beta = 0.0;
};

struct ScoredFrontier {
  Frontier frontier;
  double ig_raw = 0.0;
  double dist_raw = 0.0;
  double ig_norm = 0.0;
  double dist_norm = 0.0;
  double s = 0.0;
  double utility = 0.0;
};

// Min-max normalization over the candidate set; a constant list maps to all
// zeros so no candidate gets an artificial edge.
inline std::vector<double> normalize(const std::vector<double>& values) {
  if (values.empty()) throw ParamError("normalize: empty value list");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> out(values.size(), 0.0);
  if (hi > lo)
    for (std::size_t i = 0; i < values.size(); ++i)
      out[i] = (values[i] - lo) / (hi - lo);
  return out;
}

// u(f) = alpha * ig_norm - (1 - alpha) * dist_norm + beta * s
// Information gain and distance are normalized across the candidates; the
// saliency score enters raw.
inline std::vector<ScoredFrontier> score_frontiers(
    const std::vector<Frontier>& frontiers, const std::vector<double>& ig_raw,
    const std::vector<double>& dist_raw, const std::vector<double>& s,
    const UtilityParams& params) {
  if (frontiers.empty()) throw ParamError("score_frontiers: no candidates");
  if (ig_raw.size() != frontiers.size() ||
      dist_raw.size() != frontiers.size() || s.size() != frontiers.size())
    throw ParamError("score_frontiers: input length mismatch");
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
    throw ParamError("score_frontiers: alpha must be in [0, 1]");
  if (!std::isfinite(params.beta))
    throw ParamError("score_frontiers: beta must be finite");

  std::vector<double> ig_norm = normalize(ig_raw);
  std::vector<double> dist_norm = normalize(dist_raw);
  std::vector<ScoredFrontier> out(frontiers.size());
  for (std::size_t i = 0; i < frontiers.size(); ++i) {
    ScoredFrontier& sf = out[i];
    sf.frontier = frontiers[i];
    sf.ig_raw = ig_raw[i];
    sf.dist_raw = dist_raw[i];
    sf.ig_norm = ig_norm[i];
    sf.dist_norm = dist_norm[i];
    sf.s = s[i];
    sf.utility = params.alpha * sf.ig_norm -
                 (1.0 - params.alpha) * sf.dist_norm + params.beta * sf.s;
  }
  return out;
}

// Argmax of utility; ties prefer the closer frontier, then the one whose
// first cell has the smaller index.
inline std::size_t select_frontier(const std::vector<ScoredFrontier>& scored) {
  if (scored.empty()) throw NoCandidates("select_frontier: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scored.size(); ++i) {
    const ScoredFrontier& a = scored[i];
    const ScoredFrontier& b = scored[best];
    if (a.utility > b.utility ||
        (a.utility == b.utility &&
         (a.dist_raw < b.dist_raw ||
          (a.dist_raw == b.dist_raw &&
           a.frontier.first_cell() < b.frontier.first_cell()))))
      best = i;
  }
  return best;
}

enum class Verdict { Continue, Explored };

// Pluggable exploration-finished test. The verdict never stops the run by
// itself; the simulator keeps going and records when the criterion first
// fired.
class TerminationCriterion {
 public:
  enum class Kind { NoFrontiers, MinFrontierLength, CoverageOracle, ExternalLabel };

  static TerminationCriterion no_frontiers() {
    return TerminationCriterion(Kind::NoFrontiers);
  }

  static TerminationCriterion min_frontier_length(int min_length) {
    if (min_length < 1)
      throw ParamError("min_frontier_length: threshold must be >= 1");
    TerminationCriterion t(Kind::MinFrontierLength);
    t.min_length_ = min_length;
    return t;
  }

  static TerminationCriterion coverage_oracle(double tau) {
    if (!(tau > 0.0) || tau > 1.0)
      throw ParamError("coverage_oracle: tau must be in (0, 1]");
    TerminationCriterion t(Kind::CoverageOracle);
    t.tau_ = tau;
    return t;
  }

  static TerminationCriterion external_label(std::shared_ptr<std::istream> in) {
    if (!in) throw ParamError("external_label: null stream");
    TerminationCriterion t(Kind::ExternalLabel);
    t.labels_ = std::move(in);
    return t;
  }

  Kind kind() const { return kind_; }

  // `frontiers` must be the unfiltered detection result (min length 1), or
  // MinFrontierLength cannot see short remnants.
  Verdict check(const GridMap& map, const GridMap* ground_truth,
                const std::vector<Frontier>& frontiers) {
    switch (kind_) {
      case Kind::NoFrontiers:
        return frontiers.empty() ? Verdict::Explored : Verdict::Continue;
      case Kind::MinFrontierLength: {
        for (const Frontier& f : frontiers)
          if (f.length >= min_length_) return Verdict::Continue;
        return Verdict::Explored;
      }
      case Kind::CoverageOracle: {
        if (!ground_truth)
          throw ParamError("coverage_oracle: ground truth unavailable");
        return coverage_ratio(map, *ground_truth) >= tau_ ? Verdict::Explored
                                                          : Verdict::Continue;
      }
      case Kind::ExternalLabel: {
        std::string token;
        if (*labels_ >> token) {
          if (token == "explored") last_ = Verdict::Explored;
          else if (token == "not-explored") last_ = Verdict::Continue;
          else
            throw ParamError("external_label: unrecognized label '" + token +
                             "'");
        }
        return last_;  // exhausted stream keeps the final verdict
      }
    }
    return Verdict::Continue;
  }

 private:
  explicit TerminationCriterion(Kind kind) : kind_(kind) {}

  Kind kind_;
  int min_length_ = 1;
  double tau_ = 1.0;
  std::shared_ptr<std::istream> labels_;
  Verdict last_ = Verdict::Continue;
};

// no-frontiers | min-frontier-length:L | coverage:tau | external:path
inline TerminationCriterion parse_termination(const std::string& text) {
  if (text == "no-frontiers") return TerminationCriterion::no_frontiers();
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "min-frontier-length") {
    std::size_t used = 0;
    int len = 0;
    try {
      len = std::stoi(arg, &used);
    } catch (const std::exception&) {
      throw ParamError("parse_termination: bad length in '" + text + "'");
    }
    if (used != arg.size())
      throw ParamError("parse_termination: bad length in '" + text + "'");
    return TerminationCriterion::min_frontier_length(len);
  }
  if (head == "coverage") {
    std::size_t used = 0;
    double tau = 0.0;
    try {
      tau = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw ParamError("parse_termination: bad tau in '" + text + "'");
    }
    if (used != arg.size())
      throw ParamError("parse_termination: bad tau in '" + text + "'");
    return TerminationCriterion::coverage_oracle(tau);
  }
  if (head == "external") {
    auto in = std::make_shared<std::ifstream>(arg);
    if (!*in)
      throw FormatError("parse_termination: cannot open label file '" + arg +
                        "'");
    return TerminationCriterion::external_label(in);
  }
  throw ParamError("parse_termination: unknown criterion '" + text + "'");
}

}  // namespace salex
