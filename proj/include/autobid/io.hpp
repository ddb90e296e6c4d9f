// Copyright 2026 The autobid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment configs (YAML) and result files (JSON, CSV).
//
// Config keys, all optional except true_dist and horizon (or sweep.horizons):
//
//   true_dist: "[(0, 0.5), (1, 1)]"      competing-bid law, literal or list of pairs
//   value_dist: "uniform(0, 1)"
//   horizon: 4096
//   algorithm: known_f | full_feedback | bandit
//   scoring: expected | realized
//   seeds: [1, 2, 3]
//   threads: 1
//   full_feedback: {eps_scale: 1.0, prior: "uniform_grid(0, 1, 101)"}
//   bandit: {grid_count: 8, samples_per_point: 64, epsilon: 0.2, confidence_exponent: 1.0}
//   sweep: {horizons: [1024, 4096, 16384]}
//   report: {regret_slope_max: 0.6, violation_slope_max: 0.6}
//
// Requires yaml-cpp and nlohmann/json.

#ifndef AUTOBID_IO_HPP
#define AUTOBID_IO_HPP

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "autobid/harness.hpp"

namespace autobid::io {

/// Shortest round-trip decimal form of a double, independent of locale.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string to_literal(const StepDistribution& d) {
  std::string out = "[";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += ", ";
    out += "(" + format_double(d.support()[i]) + ", " + format_double(d.cdf_values()[i]) + ")";
  }
  return out + "]";
}

inline std::string to_literal(const ValueDistribution& v) {
  if (v.kind() == ValueDistribution::Kind::kUniform) {
    return "uniform(" + format_double(v.lo()) + ", " + format_double(v.hi()) + ")";
  }
  return to_literal(v.atom_distribution());
}

struct ReportThresholds {
  std::optional<double> regret_slope_max;
  std::optional<double> violation_slope_max;
};

/// Everything one config file describes.
struct RunConfig {
  ExperimentConfig experiment;
  std::vector<long> horizons;  // sweep only
  unsigned threads = 1;
  ReportThresholds report;
};

inline const std::set<std::string>& declared_keys() {
  static const std::set<std::string> keys{
      "true_dist",          "value_dist",
      "horizon",            "algorithm",
      "scoring",            "seeds",
      "threads",            "full_feedback.eps_scale",
      "full_feedback.prior", "bandit.grid_count",
      "bandit.samples_per_point", "bandit.epsilon",
      "bandit.confidence_exponent", "sweep.horizons",
      "report.regret_slope_max", "report.violation_slope_max"};
  return keys;
}

namespace detail {

inline std::string where(const YAML::Node& n, const std::string& key) {
  const YAML::Mark m = n.Mark();
  if (m.line < 0) return "field '" + key + "'";
  return "line " + std::to_string(m.line + 1) + ", field '" + key + "'";
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) throw ConfigError(where(n, key) + ": expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(n, key) + ": cannot read '" + n.Scalar() + "'");
  }
}

template <typename T>
std::vector<T> scalar_list(const YAML::Node& n, const std::string& key) {
  std::vector<T> out;
  if (n.IsScalar()) {
    out.push_back(scalar<T>(n, key));
    return out;
  }
  if (!n.IsSequence()) throw ConfigError(where(n, key) + ": expected a list");
  for (const auto& item : n) out.push_back(scalar<T>(item, key));
  return out;
}

inline std::string dist_text(const YAML::Node& n, const std::string& key) {
  if (n.IsScalar()) return n.Scalar();
  if (!n.IsSequence()) throw ConfigError(where(n, key) + ": expected a distribution literal");
  std::string text = "[";
  bool first = true;
  for (const auto& pair : n) {
    if (!pair.IsSequence() || pair.size() != 2) {
      throw ConfigError(where(pair, key) + ": expected [threshold, cumulative] pairs");
    }
    if (!first) text += ", ";
    first = false;
    text += "(" + pair[0].Scalar() + ", " + pair[1].Scalar() + ")";
  }
  return text + "]";
}

inline StepDistribution step_dist(const YAML::Node& n, const std::string& key) {
  try {
    return parse_step_distribution(dist_text(n, key));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where(n, key) + ": " + e.what());
  }
}

inline void check_keys(const YAML::Node& root) {
  if (!root.IsMap()) throw ConfigError("config must be a mapping of keys to values");
  for (const auto& kv : root) {
    const std::string key = kv.first.Scalar();
    if (kv.second.IsMap()) {
      for (const auto& sub : kv.second) {
        const std::string full = key + "." + sub.first.Scalar();
        if (!declared_keys().count(full)) throw ConfigError(where(sub.first, full) + ": unknown key");
      }
    } else if (!declared_keys().count(key)) {
      throw ConfigError(where(kv.first, key) + ": unknown key");
    }
  }
}

inline YAML::Node child(const YAML::Node& root, const std::string& dotted) {
  const auto dot = dotted.find('.');
  if (dot == std::string::npos) return root[dotted];
  const YAML::Node parent = root[dotted.substr(0, dot)];
  if (!parent) return YAML::Node(YAML::NodeType::Undefined);
  return parent[dotted.substr(dot + 1)];
}

}  // namespace detail

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "known_f") return Algorithm::kKnownF;
  if (s == "full_feedback") return Algorithm::kFullFeedback;
  if (s == "bandit") return Algorithm::kBandit;
  throw ConfigError("algorithm must be known_f, full_feedback or bandit, got '" + s + "'");
}

inline Scoring parse_scoring(const std::string& s) {
  if (s == "expected") return Scoring::kExpected;
  if (s == "realized") return Scoring::kRealized;
  throw ConfigError("scoring must be expected or realized, got '" + s + "'");
}

/// Applies `key=value` overrides to a parsed document. Only declared keys are
/// accepted; the value is read as YAML, so lists work: seeds=[1,2,3].
inline void apply_overrides(YAML::Node& root, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + ov + "' must look like key=value");
    const std::string key = ov.substr(0, eq);
    if (!declared_keys().count(key)) throw ConfigError("override '" + ov + "': unknown key '" + key + "'");
    YAML::Node value;
    try {
      value = YAML::Load(ov.substr(eq + 1));
    } catch (const YAML::Exception& e) {
      throw ConfigError("override '" + ov + "': " + e.msg);
    }
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      root[key] = value;
    } else {
      YAML::Node parent = root[key.substr(0, dot)];
      parent[key.substr(dot + 1)] = value;
    }
  }
}

/// Builds a RunConfig from a parsed document. Every error names its field.
inline RunConfig config_from_yaml(const YAML::Node& root) {
  detail::check_keys(root);
  RunConfig rc;
  ExperimentConfig& cfg = rc.experiment;
  auto get = [&](const std::string& k) { return detail::child(root, k); };

  const YAML::Node td = get("true_dist");
  if (!td) throw ConfigError("field 'true_dist' is required");
  cfg.true_dist = detail::step_dist(td, "true_dist");

  if (const YAML::Node n = get("value_dist")) {
    try {
      cfg.value_dist = parse_value_distribution(detail::dist_text(n, "value_dist"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(detail::where(n, "value_dist") + ": " + e.what());
    }
  }
  if (const YAML::Node n = get("horizon")) cfg.horizon = detail::scalar<long>(n, "horizon");
  if (const YAML::Node n = get("algorithm")) {
    try {
      cfg.algorithm = parse_algorithm(detail::scalar<std::string>(n, "algorithm"));
    } catch (const ConfigError& e) {
      throw ConfigError(detail::where(n, "algorithm") + ": " + e.what());
    }
  }
  if (const YAML::Node n = get("scoring")) {
    try {
      cfg.scoring = parse_scoring(detail::scalar<std::string>(n, "scoring"));
    } catch (const ConfigError& e) {
      throw ConfigError(detail::where(n, "scoring") + ": " + e.what());
    }
  }
  if (const YAML::Node n = get("seeds")) {
    cfg.seeds = detail::scalar_list<std::uint64_t>(n, "seeds");
    if (cfg.seeds.empty()) throw ConfigError(detail::where(n, "seeds") + ": at least one seed is required");
  }
  if (const YAML::Node n = get("threads")) {
    const long t = detail::scalar<long>(n, "threads");
    if (t < 1) throw ConfigError(detail::where(n, "threads") + ": must be at least 1");
    rc.threads = static_cast<unsigned>(t);
  }
  if (const YAML::Node n = get("full_feedback.eps_scale")) {
    cfg.full_feedback.eps_scale = detail::scalar<double>(n, "full_feedback.eps_scale");
    if (!(cfg.full_feedback.eps_scale >= 0.0)) {
      throw ConfigError(detail::where(n, "full_feedback.eps_scale") + ": must be non-negative");
    }
  }
  if (const YAML::Node n = get("full_feedback.prior")) cfg.full_feedback.prior = detail::step_dist(n, "full_feedback.prior");
  if (const YAML::Node n = get("bandit.grid_count")) {
    if (!n.IsNull()) cfg.bandit.grid_count = detail::scalar<int>(n, "bandit.grid_count");
  }
  if (const YAML::Node n = get("bandit.samples_per_point")) {
    if (!n.IsNull()) cfg.bandit.samples_per_point = detail::scalar<int>(n, "bandit.samples_per_point");
  }
  if (const YAML::Node n = get("bandit.epsilon")) {
    if (!n.IsNull()) cfg.bandit.epsilon = detail::scalar<double>(n, "bandit.epsilon");
  }
  if (const YAML::Node n = get("bandit.confidence_exponent")) {
    cfg.bandit.confidence_exponent = detail::scalar<double>(n, "bandit.confidence_exponent");
  }
  if ((cfg.bandit.grid_count && *cfg.bandit.grid_count < 1) ||
      (cfg.bandit.samples_per_point && *cfg.bandit.samples_per_point < 1)) {
    throw ConfigError("field 'bandit.grid_count' / 'bandit.samples_per_point': must be at least 1");
  }
  if (const YAML::Node n = get("sweep.horizons")) rc.horizons = detail::scalar_list<long>(n, "sweep.horizons");
  if (const YAML::Node n = get("report.regret_slope_max")) {
    rc.report.regret_slope_max = detail::scalar<double>(n, "report.regret_slope_max");
  }
  if (const YAML::Node n = get("report.violation_slope_max")) {
    rc.report.violation_slope_max = detail::scalar<double>(n, "report.violation_slope_max");
  }
  if (!get("horizon") && !rc.horizons.empty()) cfg.horizon = rc.horizons.front();
  if (!get("horizon") && rc.horizons.empty()) throw ConfigError("field 'horizon' is required");
  return rc;
}

/// Reads a config file and applies overrides. Missing files and YAML syntax
/// errors become ConfigError naming the path and line.
inline RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  YAML::Node root;
  try {
    root = YAML::Load(in);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(path + ": line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  apply_overrides(root, overrides);
  try {
    return config_from_yaml(root);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// The config with every default written out, including the horizon-dependent
/// bandit constants and the pacer step size for `horizon`.
inline nlohmann::ordered_json materialize(const RunConfig& rc, long horizon) {
  const ExperimentConfig& c = rc.experiment;
  nlohmann::ordered_json j;
  j["true_dist"] = to_literal(c.true_dist);
  j["value_dist"] = to_literal(c.value_dist);
  j["horizon"] = horizon;
  j["algorithm"] = to_string(c.algorithm);
  j["scoring"] = to_string(c.scoring);
  j["seeds"] = c.seeds;
  j["threads"] = rc.threads;
  j["pacer"] = {{"lambda_init", 1.0}, {"alpha_rule", "1/sqrt(T)"}};
  switch (c.algorithm) {
    case Algorithm::kKnownF:
      j["pacer"]["alpha"] = 1.0 / std::sqrt(static_cast<double>(horizon));
      break;
    case Algorithm::kFullFeedback:
      j["full_feedback"] = {{"eps_scale", c.full_feedback.eps_scale},
                            {"eps_rule", "eps_scale * log(N) / sqrt(N)"},
                            {"prior", to_literal(c.full_feedback.prior)},
                            {"stage_lengths", doubling_schedule(horizon)}};
      break;
    case Algorithm::kBandit: {
      const BanditParams p = c.bandit.resolve(horizon);
      j["bandit"] = {{"grid_count", p.grid_count},
                     {"samples_per_point", p.samples_per_point},
                     {"epsilon", p.epsilon},
                     {"confidence_exponent", c.bandit.confidence_exponent},
                     {"grid_count_rule", c.bandit.grid_count ? "set" : "ceil(T^(1/4))"},
                     {"samples_per_point_rule", c.bandit.samples_per_point ? "set" : "ceil(sqrt(T))"},
                     {"epsilon_rule", c.bandit.epsilon ? "set" : "sqrt(c * log(T) / (2M))"},
                     {"exploration_rounds", static_cast<long>(p.grid_count) * p.samples_per_point}};
      j["pacer"]["alpha"] = 1.0 / std::sqrt(static_cast<double>(horizon - static_cast<long>(p.grid_count) *
                                                                               p.samples_per_point));
      break;
    }
  }
  if (!rc.horizons.empty()) j["sweep"] = {{"horizons", rc.horizons}};
  return j;
}

inline nlohmann::ordered_json metrics_json(const Metrics& m) {
  return {{"reward", m.reward},
          {"payment", m.payment},
          {"regret", m.regret},
          {"roi_violation", m.roi_violation},
          {"roi_violation_positive", m.positive_violation()}};
}

inline nlohmann::ordered_json episode_json(const RunConfig& rc, const EpisodeResult& r) {
  nlohmann::ordered_json j;
  j["config"] = materialize(rc, r.horizon);
  j["seed"] = r.seed;
  j["metrics"] = metrics_json(r.metrics);
  nlohmann::ordered_json opt = {{"opt_reward", r.opt.opt_reward}, {"opt_payment", r.opt.opt_payment}};
  if (std::isfinite(r.opt.lambda_star)) {
    opt["lambda_star"] = r.opt.lambda_star;
  } else {
    opt["lambda_star"] = "inf";
  }
  j["opt"] = opt;
  j["final_lambda"] = r.lambda.empty() ? 1.0 : r.lambda.back();
  j["invariant_violations"] = r.invariant_violations;
  if (!r.first_violation.empty()) j["first_violation"] = r.first_violation;
  return j;
}

inline void write_trajectory_csv(std::ostream& out, const EpisodeResult& r) {
  out << "t,cum_reward,cum_payment,lambda\n";
  for (std::size_t i = 0; i < r.cum_reward.size(); ++i) {
    out << (i + 1) << ',' << format_double(r.cum_reward[i]) << ',' << format_double(r.cum_payment[i]) << ','
        << format_double(r.lambda[i]) << '\n';
  }
}

inline const char* const kSweepCsvHeader = "algorithm,T,seed,reward,payment,regret,roi_violation";

inline void write_sweep_csv(std::ostream& out, const SweepResult& s) {
  out << kSweepCsvHeader << '\n';
  for (const EpisodeSummary& e : s.episodes) {
    out << to_string(s.algorithm) << ',' << e.horizon << ',' << e.seed << ',' << format_double(e.metrics.reward)
        << ',' << format_double(e.metrics.payment) << ',' << format_double(e.metrics.regret) << ','
        << format_double(e.metrics.roi_violation) << '\n';
  }
}

inline void write_regret_vs_t_csv(std::ostream& out, const SweepResult& s) {
  out << "T,mean_regret,stderr_regret,mean_violation,stderr_violation,mean_opt_reward\n";
  for (const HorizonSummary& h : s.per_horizon) {
    out << h.horizon << ',' << format_double(h.mean_regret) << ',' << format_double(h.stderr_regret) << ','
        << format_double(h.mean_violation) << ',' << format_double(h.stderr_violation) << ','
        << format_double(h.mean_opt_reward) << '\n';
  }
}

inline nlohmann::ordered_json slopes_json(const RunConfig& rc, const SweepResult& s, std::size_t n_seeds) {
  std::vector<long> horizons;
  for (const HorizonSummary& h : s.per_horizon) horizons.push_back(h.horizon);
  nlohmann::ordered_json j;
  j["algorithm"] = to_string(s.algorithm);
  j["regret_slope"] = s.regret_fit.slope;
  j["violation_slope"] = s.violation_fit.slope;
  j["horizons"] = horizons;
  j["n_seeds"] = n_seeds;
  j["regret_floored"] = s.regret_fit.floored;
  j["violation_floored"] = s.violation_fit.floored;
  j["invariant_violations"] = s.invariant_violations;
  if (rc.report.regret_slope_max) j["regret_slope_max"] = *rc.report.regret_slope_max;
  if (rc.report.violation_slope_max) j["violation_slope_max"] = *rc.report.violation_slope_max;
  j["config"] = materialize(rc, horizons.front());
  return j;
}

/// One sweep.csv data row.
struct SweepRow {
  std::string algorithm;
  long horizon = 0;
  std::uint64_t seed = 0;
  Metrics metrics;
};

/// Parses sweep.csv as written by write_sweep_csv.
inline std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) {
    throw std::runtime_error("sweep.csv: unexpected header");
  }
  std::vector<SweepRow> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 7) throw std::runtime_error("sweep.csv line " + std::to_string(line_no) + ": expected 7 fields");
    try {
      SweepRow r;
      r.algorithm = f[0];
      r.horizon = std::stol(f[1]);
      r.seed = std::stoull(f[2]);
      r.metrics = {std::stod(f[3]), std::stod(f[4]), std::stod(f[5]), std::stod(f[6])};
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw std::runtime_error("sweep.csv line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return rows;
}

}  // namespace autobid::io

#endif  // AUTOBID_IO_HPP
