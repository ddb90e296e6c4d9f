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

// Simulated repeated first-price auctions: single episodes, multi-seed sweeps
// over horizons, and log-log scaling fits.
//
// Random streams: every episode derives three independent generators from
// its seed, in this order of use within a round:
//   stream 1  the bidder's value v_t
//   stream 2  the highest competing bid d_t
//   stream 3  the learner's lottery draw
// so the environment is identical across algorithms for a given seed.

#ifndef AUTOBID_HARNESS_HPP
#define AUTOBID_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "autobid/benchmark.hpp"
#include "autobid/dist.hpp"
#include "autobid/errors.hpp"
#include "autobid/learners.hpp"

namespace autobid {

enum class Algorithm { kKnownF, kFullFeedback, kBandit };
enum class Scoring { kExpected, kRealized };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kKnownF: return "known_f";
    case Algorithm::kFullFeedback: return "full_feedback";
    case Algorithm::kBandit: return "bandit";
  }
  return "?";
}

inline const char* to_string(Scoring s) { return s == Scoring::kExpected ? "expected" : "realized"; }

struct FullFeedbackConfig {
  double eps_scale = 1.0;
  StepDistribution prior = FullFeedbackLearner::default_prior();
};

/// Unset fields take the horizon-dependent defaults of BanditParams.
struct BanditConfig {
  std::optional<int> grid_count;
  std::optional<int> samples_per_point;
  std::optional<double> epsilon;
  double confidence_exponent = 1.0;

  BanditParams resolve(long horizon) const {
    BanditParams p = BanditParams::defaults(horizon, confidence_exponent);
    if (grid_count) p.grid_count = *grid_count;
    if (samples_per_point) p.samples_per_point = *samples_per_point;
    p.epsilon = epsilon ? *epsilon : BanditParams::default_epsilon(horizon, p.samples_per_point, confidence_exponent);
    return p;
  }
};

struct ExperimentConfig {
  StepDistribution true_dist = StepDistribution::point_mass(0.0);
  ValueDistribution value_dist;
  long horizon = 1;
  Algorithm algorithm = Algorithm::kKnownF;
  FullFeedbackConfig full_feedback;
  BanditConfig bandit;
  std::vector<std::uint64_t> seeds{1};
  Scoring scoring = Scoring::kExpected;

  void validate() const {
    if (horizon < 1) throw ConfigError("horizon must be at least 1");
    if (!true_dist.is_proper()) throw ConfigError("true_dist must reach cumulative probability 1");
    if (algorithm == Algorithm::kBandit) {
      const BanditParams p = bandit.resolve(horizon);
      if (static_cast<long>(p.grid_count) * p.samples_per_point >= horizon) {
        throw ConfigError("bandit: K*M = " + std::to_string(static_cast<long>(p.grid_count) * p.samples_per_point) +
                          " must be below the horizon T = " + std::to_string(horizon));
      }
    }
  }
};

inline std::unique_ptr<Learner> make_learner(const ExperimentConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::kKnownF:
      return std::make_unique<KnownDistributionLearner>(cfg.true_dist, cfg.horizon);
    case Algorithm::kFullFeedback:
      return std::make_unique<FullFeedbackLearner>(cfg.horizon, cfg.full_feedback.prior, cfg.full_feedback.eps_scale);
    case Algorithm::kBandit:
      return std::make_unique<BanditLearner>(cfg.horizon, cfg.bandit.resolve(cfg.horizon));
  }
  throw ConfigError("unknown algorithm");
}

/// Learner failure annotated with the (1-based) round it happened in.
class EpisodeError : public std::runtime_error {
 public:
  EpisodeError(long round, const std::string& what)
      : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}
  long round() const { return round_; }

 private:
  long round_;
};

struct RoundLog {
  double value = 0.0;
  RandomizedBid lottery;
  double bid = 0.0;
  double competing_bid = 0.0;
  bool won = false;
  double expected_reward = 0.0;
  double expected_payment = 0.0;
  std::optional<double> g;  // modelled surplus, paced rounds only
  double lambda = 1.0;      // multiplier after this round's update
};

struct EpisodeResult {
  Algorithm algorithm = Algorithm::kKnownF;
  long horizon = 0;
  std::uint64_t seed = 0;
  std::vector<RoundLog> rounds;  // empty unless requested
  std::vector<double> cum_reward;
  std::vector<double> cum_payment;
  std::vector<double> lambda;
  HindsightSolution opt;
  Metrics metrics;
  long invariant_violations = 0;
  std::string first_violation;
};

struct EpisodeOptions {
  bool keep_rounds = false;
  bool keep_trajectory = true;
};

/// Runs one episode. Deterministic in (config, seed).
inline EpisodeResult run_episode(const ExperimentConfig& cfg, std::uint64_t seed, EpisodeOptions opts = {}) {
  cfg.validate();
  Rng value_rng = Rng::derive(seed, 1);
  Rng bid_rng = Rng::derive(seed, 2);
  Rng lottery_rng = Rng::derive(seed, 3);
  auto learner = make_learner(cfg);
  const bool full = learner->feedback_kind() == FeedbackKind::kFull;
  const auto T = static_cast<std::size_t>(cfg.horizon);

  EpisodeResult res;
  res.algorithm = cfg.algorithm;
  res.horizon = cfg.horizon;
  res.seed = seed;
  std::vector<double> values(T);
  std::vector<RoundOutcome> outcomes(T);
  if (opts.keep_rounds) res.rounds.reserve(T);
  if (opts.keep_trajectory) {
    res.cum_reward.reserve(T);
    res.cum_payment.reserve(T);
    res.lambda.reserve(T);
  }

  auto flag = [&](long t, const std::string& what) {
    if (res.invariant_violations++ == 0) res.first_violation = "round " + std::to_string(t) + ": " + what;
  };

  double cum_r = 0.0;
  double cum_p = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const long round = static_cast<long>(t) + 1;
    RoundLog log;
    log.value = cfg.value_dist.sample(value_rng);
    log.competing_bid = cfg.true_dist.sample(bid_rng);
    Decision d;
    try {
      d = learner->step(log.value);
    } catch (const std::logic_error& e) {
      throw EpisodeError(round, e.what());
    }
    log.lottery = d.lottery;
    log.bid = d.lottery.sample(lottery_rng);
    log.won = log.bid >= log.competing_bid;
    try {
      if (full) {
        learner->observe(FullFeedback{log.competing_bid});
      } else {
        learner->observe(BanditFeedback{log.won});
      }
    } catch (const std::logic_error& e) {
      throw EpisodeError(round, e.what());
    }
    log.lambda = learner->lambda();

    if (cfg.scoring == Scoring::kExpected) {
      const LotteryOutcome o = evaluate_lottery(d.lottery, cfg.true_dist);
      log.expected_reward = log.value * o.win_probability;
      log.expected_payment = o.payment;
    } else {
      log.expected_reward = log.won ? log.value : 0.0;
      log.expected_payment = log.won ? log.bid : 0.0;
    }

    if (d.pacer) {
      const PacerDecision& p = *d.pacer;
      log.g = p.g;
      if (!(p.lambda > 0.0) || !(log.lambda > 0.0)) flag(round, "non-positive multiplier");
      const double lo = std::max(-1.0, -1.0 / p.lambda);
      if (p.g < lo - 1e-9 || p.g > log.value * p.win_probability + 1e-9) flag(round, "surplus outside its bounds");
      if (p.tilde_b > (1.0 + p.lambda) / p.lambda * log.value + 1e-9) flag(round, "bid above (1+lambda)/lambda * v");
    }

    values[t] = log.value;
    outcomes[t] = {log.expected_reward, log.expected_payment};
    cum_r += log.expected_reward;
    cum_p += log.expected_payment;
    if (opts.keep_trajectory) {
      res.cum_reward.push_back(cum_r);
      res.cum_payment.push_back(cum_p);
      res.lambda.push_back(log.lambda);
    }
    if (opts.keep_rounds) res.rounds.push_back(log);
  }

  res.opt = hindsight_optimal(cfg.true_dist, values);
  res.metrics = score_episode(res.opt, outcomes);
  if (!opts.keep_rounds) res.opt.per_round_payments.clear();
  return res;
}

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<bool> floored;  // points whose value was raised to 1e-6
};

/// Least squares of log(value) on log(T). Non-positive values are floored at
/// 1e-6 and flagged.
inline ScalingFit fit_scaling_exponent(std::span<const std::pair<double, double>> points) {
  std::vector<std::pair<double, double>> usable;
  for (const auto& [t, v] : points) {
    if (t > 0.0 && std::isfinite(v)) usable.emplace_back(t, v);
  }
  if (usable.size() < 3) throw std::invalid_argument("fit_scaling_exponent: need at least 3 usable points");
  ScalingFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [t, v] : usable) {
    const bool floor = v <= 0.0;
    fit.floored.push_back(floor);
    const double lx = std::log(t);
    const double ly = std::log(floor ? 1e-6 : v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(usable.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_scaling_exponent: horizons must differ");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

struct EpisodeSummary {
  long horizon = 0;
  std::uint64_t seed = 0;
  Metrics metrics;
  double opt_reward = 0.0;
  long invariant_violations = 0;
};

struct HorizonSummary {
  long horizon = 0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  double mean_violation = 0.0;
  double stderr_violation = 0.0;
  double mean_opt_reward = 0.0;
};

struct SweepResult {
  Algorithm algorithm = Algorithm::kKnownF;
  std::vector<EpisodeSummary> episodes;  // ordered by (horizon, seed) as requested
  std::vector<HorizonSummary> per_horizon;
  ScalingFit regret_fit;
  ScalingFit violation_fit;
  long invariant_violations = 0;
};

inline std::pair<double, double> mean_and_stderr(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

/// Per-horizon means and fitted exponents from episode summaries.
inline void summarize_sweep(SweepResult& res, std::span<const long> horizons) {
  res.per_horizon.clear();
  std::vector<std::pair<double, double>> reg_pts;
  std::vector<std::pair<double, double>> vio_pts;
  res.invariant_violations = 0;
  for (const auto& e : res.episodes) res.invariant_violations += e.invariant_violations;
  for (long T : horizons) {
    std::vector<double> reg, vio, opt;
    for (const auto& e : res.episodes) {
      if (e.horizon != T) continue;
      reg.push_back(e.metrics.regret);
      vio.push_back(e.metrics.roi_violation);
      opt.push_back(e.opt_reward);
    }
    if (reg.empty()) continue;
    HorizonSummary h;
    h.horizon = T;
    std::tie(h.mean_regret, h.stderr_regret) = mean_and_stderr(reg);
    std::tie(h.mean_violation, h.stderr_violation) = mean_and_stderr(vio);
    h.mean_opt_reward = mean_and_stderr(opt).first;
    res.per_horizon.push_back(h);
    reg_pts.emplace_back(static_cast<double>(T), h.mean_regret);
    vio_pts.emplace_back(static_cast<double>(T), h.mean_violation);
  }
  res.regret_fit = fit_scaling_exponent(reg_pts);
  res.violation_fit = fit_scaling_exponent(vio_pts);
}

/// Runs every (horizon, seed) pair, optionally on several threads; results
/// are merged in request order so the output does not depend on scheduling.
inline SweepResult run_sweep(const ExperimentConfig& base, std::span<const long> horizons,
                             std::span<const std::uint64_t> seeds, unsigned threads = 1) {
  if (horizons.size() < 3) throw ConfigError("sweep needs at least 3 horizons");
  if (seeds.size() < 5) throw ConfigError("sweep needs at least 5 seeds");
  for (long T : horizons) {
    ExperimentConfig cfg = base;
    cfg.horizon = T;
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("horizon " + std::to_string(T) + ": " + e.what());
    }
  }

  SweepResult res;
  res.algorithm = base.algorithm;
  const std::size_t total = horizons.size() * seeds.size();
  res.episodes.resize(total);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::optional<std::string> error;
  std::optional<long> error_round;

  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const long T = horizons[i / seeds.size()];
      const std::uint64_t seed = seeds[i % seeds.size()];
      ExperimentConfig cfg = base;
      cfg.horizon = T;
      try {
        const EpisodeResult ep = run_episode(cfg, seed, {false, false});
        res.episodes[i] = {T, seed, ep.metrics, ep.opt.opt_reward, ep.invariant_violations};
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        if (!error) {
          error = "T=" + std::to_string(T) + " seed=" + std::to_string(seed) + ": " + e.what();
          if (const auto* ee = dynamic_cast<const EpisodeError*>(&e)) error_round = ee->round();
        }
        next = total;
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error && error_round) throw EpisodeError(*error_round, "sweep aborted at " + *error);
  if (error) throw std::runtime_error("sweep aborted at " + *error);

  summarize_sweep(res, horizons);
  return res;
}

}  // namespace autobid

#endif  // AUTOBID_HARNESS_HPP
