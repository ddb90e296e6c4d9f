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

// autobid run|sweep|report
//
// Exit status: 0 success, 2 config or usage error, 3 learner protocol error,
// 1 anything else.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "autobid/io.hpp"

namespace fs = std::filesystem;
using namespace autobid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitProtocol = 3;

struct Options {
  std::string config;
  std::string out = ".";
  std::vector<std::string> overrides;
  std::string seeds;
  unsigned threads = 0;
  std::string scoring;
  std::optional<double> regret_slope_max;
  std::optional<double> violation_slope_max;
};

// "1,2,5-8" -> {1, 2, 5, 6, 7, 8}
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      const auto dash = item.find('-', 1);
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const std::uint64_t lo = std::stoull(item.substr(0, dash));
        const std::uint64_t hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument(item);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("--seeds: cannot read '" + item + "' (expected e.g. 1,2,5-8)");
    }
  }
  if (seeds.empty()) throw ConfigError("--seeds: empty seed list");
  return seeds;
}

io::RunConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  if (!fs::exists(o.config)) throw ConfigError("config file not found: " + o.config);
  io::RunConfig rc = io::load_config(o.config, o.overrides);
  if (!o.seeds.empty()) rc.experiment.seeds = parse_seed_list(o.seeds);
  if (!o.scoring.empty()) rc.experiment.scoring = io::parse_scoring(o.scoring);
  if (o.threads > 0) rc.threads = o.threads;
  if (o.regret_slope_max) rc.report.regret_slope_max = o.regret_slope_max;
  if (o.violation_slope_max) rc.report.violation_slope_max = o.violation_slope_max;
  return rc;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << contents;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

int cmd_run(const Options& o) {
  const io::RunConfig rc = load(o);
  rc.experiment.validate();
  fs::create_directories(o.out);
  double sum_regret = 0.0;
  double sum_violation = 0.0;
  double sum_opt = 0.0;
  for (std::uint64_t seed : rc.experiment.seeds) {
    const EpisodeResult r = run_episode(rc.experiment, seed);
    write_file(fs::path(o.out) / ("episode_" + std::to_string(seed) + ".json"), dump(io::episode_json(rc, r)));
    std::ostringstream csv;
    io::write_trajectory_csv(csv, r);
    write_file(fs::path(o.out) / ("trajectory_" + std::to_string(seed) + ".csv"), csv.str());
    sum_regret += r.metrics.regret;
    sum_violation += r.metrics.roi_violation;
    sum_opt += r.opt.opt_reward;
    if (r.invariant_violations > 0) {
      std::cerr << "warning: seed " << seed << ": " << r.invariant_violations
                << " invariant violations, first at " << r.first_violation << "\n";
    }
  }
  const double n = static_cast<double>(rc.experiment.seeds.size());
  std::printf("algorithm=%s T=%ld seeds=%zu mean_regret=%.6f mean_violation=%.6f opt_reward=%.4f\n",
              to_string(rc.experiment.algorithm), rc.experiment.horizon, rc.experiment.seeds.size(),
              sum_regret / n, sum_violation / n, sum_opt / n);
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const io::RunConfig rc = load(o);
  if (rc.horizons.size() < 3) {
    throw ConfigError("sweep.horizons: need at least 3 horizons for a slope fit, got " +
                      std::to_string(rc.horizons.size()));
  }
  if (rc.experiment.seeds.size() < 5) {
    throw ConfigError("seeds: a sweep needs at least 5 seeds, got " + std::to_string(rc.experiment.seeds.size()));
  }
  const SweepResult s = run_sweep(rc.experiment, rc.horizons, rc.experiment.seeds, rc.threads);
  fs::create_directories(o.out);
  std::ostringstream sweep_csv;
  io::write_sweep_csv(sweep_csv, s);
  write_file(fs::path(o.out) / "sweep.csv", sweep_csv.str());
  std::ostringstream curve;
  io::write_regret_vs_t_csv(curve, s);
  write_file(fs::path(o.out) / "regret_vs_T.csv", curve.str());
  write_file(fs::path(o.out) / "slopes.json", dump(io::slopes_json(rc, s, rc.experiment.seeds.size())));
  std::printf("algorithm=%s horizons=%zu seeds=%zu regret_slope=%.4f violation_slope=%.4f\n",
              to_string(s.algorithm), rc.horizons.size(), rc.experiment.seeds.size(), s.regret_fit.slope,
              s.violation_fit.slope);
  if (s.invariant_violations > 0) std::fprintf(stderr, "warning: %ld invariant violations\n", s.invariant_violations);
  return kExitOk;
}

double default_threshold(const std::string& algorithm) {
  if (algorithm == "known_f") return 0.6;
  if (algorithm == "full_feedback") return 0.65;
  return 0.85;
}

int cmd_report(const Options& o) {
  const fs::path dir(o.out);
  const std::vector<std::string> expected{"sweep.csv", "slopes.json"};
  std::vector<std::string> missing;
  for (const auto& f : expected) {
    if (!fs::exists(dir / f)) missing.push_back((dir / f).string());
  }
  if (!missing.empty()) {
    std::string msg = "missing sweep artifacts:";
    for (const auto& m : missing) msg += " " + m;
    throw ConfigError(msg + " (run the sweep subcommand with --out " + dir.string() + " first)");
  }
  std::ifstream csv(dir / "sweep.csv");
  const std::vector<io::SweepRow> rows = io::read_sweep_csv(csv);
  if (rows.empty()) throw ConfigError((dir / "sweep.csv").string() + ": no data rows");
  nlohmann::json slopes;
  try {
    std::ifstream sj(dir / "slopes.json");
    slopes = nlohmann::json::parse(sj);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError((dir / "slopes.json").string() + ": " + e.what());
  }

  const std::string algorithm = rows.front().algorithm;
  auto threshold = [&](const std::optional<double>& flag, const char* key) {
    if (flag) return *flag;
    if (slopes.contains(key)) return slopes[key].get<double>();
    return default_threshold(algorithm);
  };
  const double regret_max = threshold(o.regret_slope_max, "regret_slope_max");
  const double violation_max = threshold(o.violation_slope_max, "violation_slope_max");

  std::map<long, std::pair<std::vector<double>, std::vector<double>>> by_t;
  for (const auto& r : rows) {
    by_t[r.horizon].first.push_back(r.metrics.regret);
    by_t[r.horizon].second.push_back(r.metrics.roi_violation);
  }
  std::vector<std::pair<double, double>> reg_pts;
  std::vector<std::pair<double, double>> vio_pts;
  std::printf("algorithm: %s\n", algorithm.c_str());
  std::printf("%10s %6s %26s %26s\n", "T", "seeds", "regret (mean +- se)", "violation (mean +- se)");
  for (const auto& [t, vals] : by_t) {
    const auto [rm, rs] = mean_and_stderr(vals.first);
    const auto [vm, vs] = mean_and_stderr(vals.second);
    std::printf("%10ld %6zu %14.4f +- %8.4f %14.4f +- %8.4f\n", t, vals.first.size(), rm, rs, vm, vs);
    reg_pts.emplace_back(static_cast<double>(t), rm);
    vio_pts.emplace_back(static_cast<double>(t), vm);
  }
  if (by_t.size() < 3) throw ConfigError("sweep.csv: need at least 3 horizons for a slope fit");
  const ScalingFit rf = fit_scaling_exponent(reg_pts);
  const ScalingFit vf = fit_scaling_exponent(vio_pts);
  auto floored = [](const ScalingFit& f) {
    for (bool b : f.floored) {
      if (b) return " (non-positive means floored at 1e-6)";
    }
    return "";
  };
  const bool reg_ok = rf.slope <= regret_max;
  const bool vio_ok = vf.slope <= violation_max;
  std::printf("regret slope    %8.4f  max %.4f  %s%s\n", rf.slope, regret_max, reg_ok ? "ok" : "exceeded",
              floored(rf));
  std::printf("violation slope %8.4f  max %.4f  %s%s\n", vf.slope, violation_max, vio_ok ? "ok" : "exceeded",
              floored(vf));
  std::printf("%s\n", reg_ok && vio_ok ? "PASS" : "FAIL");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for ROI-constrained autobidding in repeated first-price auctions"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Experiment config (YAML)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--set", o.overrides, "Override a config key, e.g. --set horizon=4096 (repeatable)");
    sub->add_option("--seeds", o.seeds, "Seed list, e.g. 1,2,5-8 (replaces the config's seeds)");
    sub->add_option("--scoring", o.scoring, "expected | realized");
  };
  CLI::App* run = app.add_subcommand("run", "Run one episode per seed");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "Run every (horizon, seed) pair and fit scaling exponents");
  add_common(sweep);
  sweep->add_option("--threads", o.threads, "Worker threads (default: config value)");
  CLI::App* report = app.add_subcommand("report", "Summarize sweep artifacts in --out");
  report->add_option("--out", o.out, "Directory holding sweep.csv and slopes.json");
  report->add_option("--regret-slope-max", o.regret_slope_max, "Regret slope threshold");
  report->add_option("--violation-slope-max", o.violation_slope_max, "Violation slope threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    return cmd_report(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EpisodeError& e) {
    std::cerr << "protocol error at round " << e.round() << ": " << e.what() << "\n";
    return kExitProtocol;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
