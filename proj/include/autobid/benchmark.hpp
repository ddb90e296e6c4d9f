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

// Hindsight-optimal ROI-constrained bidding and episode scoring.

#ifndef AUTOBID_BENCHMARK_HPP
#define AUTOBID_BENCHMARK_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "autobid/envelope.hpp"
#include "autobid/errors.hpp"

namespace autobid {

struct HindsightSolution {
  double opt_reward = 0.0;
  double opt_payment = 0.0;
  double lambda_star = 0.0;
  std::vector<double> per_round_payments;
};

namespace detail {

// Vertices of the full concave frontier, starting at the origin anchor when
// the distribution has no mass at 0.
struct Frontier {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> slopes;

  explicit Frontier(const ConcaveEnvelope& env) {
    if (env.x0() > 0.0) {
      xs.push_back(0.0);
      ys.push_back(0.0);
    }
    for (const CurvePoint& p : env.breakpoints()) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
      slopes.push_back((ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]));
    }
  }

  // Multiplier at which segment j stops paying off for value v:
  // (1 + lambda) v s = lambda  <=>  lambda = v s / (1 - v s).
  static double critical_lambda(double v, double s) {
    const double vs = v * s;
    if (vs >= 1.0) return std::numeric_limits<double>::infinity();
    return vs / (1.0 - vs);
  }

  // Number of leading segments worth taking at lambda. `inclusive` takes
  // segments whose critical multiplier equals lambda (largest argmax).
  std::size_t position(double v, double lambda, bool inclusive) const {
    auto take = [&](double s) {
      const double c = critical_lambda(v, s);
      return inclusive ? c >= lambda : c > lambda;
    };
    auto it = std::partition_point(slopes.begin(), slopes.end(), take);
    return static_cast<std::size_t>(it - slopes.begin());
  }

  double slack(double v, std::size_t k) const { return v * ys[k] - xs[k]; }
};

}  // namespace detail

/// Best randomized strategy in hindsight: maximize sum_t v_t H(x_t) subject to
/// sum_t x_t <= sum_t v_t H(x_t), where H is the concave frontier of (payment,
/// win probability) pairs reachable under dist. The Lagrangian separates by
/// round; the constraint slack only grows with the multiplier, so the critical
/// multiplier is found by bisection over the finite set of slope ratios, and
/// rounds that are indifferent there are moved along their tied segment until
/// the constraint binds.
inline HindsightSolution hindsight_optimal(const StepDistribution& dist, std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("hindsight_optimal: empty value sequence");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("hindsight_optimal: value outside [0,1]");
  }
  const detail::Frontier fr(envelope_of(dist));
  const std::size_t n = values.size();

  auto total_slack = [&](double lambda, bool inclusive) {
    double s = 0.0;
    for (double v : values) s += fr.slack(v, fr.position(v, lambda, inclusive));
    return s;
  };

  std::vector<std::size_t> pos(n);
  HindsightSolution sol;
  if (total_slack(0.0, false) >= 0.0) {
    for (std::size_t t = 0; t < n; ++t) pos[t] = fr.position(values[t], 0.0, false);
  } else {
    std::vector<double> candidates;
    candidates.reserve(n * fr.slopes.size());
    for (double v : values) {
      for (double s : fr.slopes) {
        const double c = detail::Frontier::critical_lambda(v, s);
        if (std::isfinite(c) && c > 0.0) candidates.push_back(c);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    // Smallest candidate whose lower-payment selection is feasible.
    std::size_t lo = 0;
    std::size_t hi = candidates.size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (total_slack(candidates[mid], false) >= 0.0) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const double lambda_star =
        lo < candidates.size() ? candidates[lo] : std::numeric_limits<double>::infinity();
    sol.lambda_star = lambda_star;

    std::vector<std::size_t> low(n);
    double slack = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      low[t] = fr.position(values[t], lambda_star, false);
      pos[t] = std::isfinite(lambda_star) ? fr.position(values[t], lambda_star, true) : low[t];
      slack += fr.slack(values[t], pos[t]);
    }
    // Start from the largest argmax and give back payment on tied rounds.
    sol.per_round_payments.resize(n);
    double reward = 0.0;
    double payment = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = values[t];
      double x = fr.xs[pos[t]];
      double y = fr.ys[pos[t]];
      if (slack < 0.0 && low[t] != pos[t]) {
        const double gain = fr.slack(v, low[t]) - fr.slack(v, pos[t]);
        const double f = std::min(1.0, -slack / gain);
        x -= f * (fr.xs[pos[t]] - fr.xs[low[t]]);
        y -= f * (fr.ys[pos[t]] - fr.ys[low[t]]);
        slack = f < 1.0 ? 0.0 : slack + gain;
      }
      sol.per_round_payments[t] = x;
      reward += v * y;
      payment += x;
    }
    sol.opt_reward = reward;
    sol.opt_payment = payment;
    return sol;
  }

  sol.per_round_payments.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    sol.per_round_payments[t] = fr.xs[pos[t]];
    sol.opt_reward += values[t] * fr.ys[pos[t]];
    sol.opt_payment += fr.xs[pos[t]];
  }
  return sol;
}

/// Exhaustive oracle for small instances: every round picks two bids from
/// {0} ∪ support(dist) and a mixing probability on a grid of grid_n points.
/// Returns the best ROI-feasible total expected reward. Partial plans are
/// kept as a Pareto frontier over (reward, slack).
inline double brute_force_optimal(const StepDistribution& dist, std::span<const double> values, int grid_n) {
  if (values.empty() || values.size() > 4) {
    throw std::invalid_argument("brute_force_optimal: needs between 1 and 4 rounds");
  }
  if (grid_n < 2 || grid_n > 201) throw std::invalid_argument("brute_force_optimal: grid_n must be in [2, 201]");

  std::vector<double> bids{0.0};
  for (double b : dist.support()) {
    if (b != 0.0) bids.push_back(b);
  }
  std::vector<std::pair<double, double>> xy;  // (payment, win probability) per pure bid
  for (double b : bids) xy.emplace_back(b * dist.cdf(b), dist.cdf(b));

  using Plan = std::pair<double, double>;  // (reward, slack)
  auto pareto = [](std::vector<Plan> pts) {
    std::sort(pts.begin(), pts.end(), [](const Plan& a, const Plan& b) {
      return a.first != b.first ? a.first > b.first : a.second > b.second;
    });
    std::vector<Plan> keep;
    double best_slack = -std::numeric_limits<double>::infinity();
    for (const Plan& p : pts) {
      if (p.second > best_slack) {
        keep.push_back(p);
        best_slack = p.second;
      }
    }
    return keep;
  };

  auto round_options = [&](double v) {
    std::vector<Plan> opts;
    for (std::size_t i = 0; i < xy.size(); ++i) {
      for (std::size_t j = i; j < xy.size(); ++j) {
        const int steps = i == j ? 1 : grid_n;
        for (int k = 0; k < steps; ++k) {
          const double p = static_cast<double>(k) / (grid_n - 1);
          const double x = (1.0 - p) * xy[i].first + p * xy[j].first;
          const double y = (1.0 - p) * xy[i].second + p * xy[j].second;
          opts.emplace_back(v * y, v * y - x);
        }
      }
    }
    return pareto(std::move(opts));
  };

  std::vector<Plan> plans{{0.0, 0.0}};
  for (std::size_t t = 0; t + 1 < values.size(); ++t) {
    const auto opts = round_options(values[t]);
    std::vector<Plan> next;
    next.reserve(plans.size() * opts.size());
    for (const Plan& a : plans) {
      for (const Plan& o : opts) next.emplace_back(a.first + o.first, a.second + o.second);
    }
    plans = pareto(std::move(next));
  }

  // Last round: options sorted by reward descending have slack ascending, so
  // the best feasible option for a plan is the first with enough slack.
  const auto last = round_options(values.back());
  constexpr double kFeasTol = 1e-12;
  double best = -std::numeric_limits<double>::infinity();
  for (const Plan& a : plans) {
    auto it = std::partition_point(last.begin(), last.end(),
                                   [&](const Plan& o) { return a.second + o.second < -kFeasTol; });
    if (it != last.end()) best = std::max(best, a.first + it->first);
  }
  return best;
}

struct Metrics {
  double reward = 0.0;
  double payment = 0.0;
  double regret = 0.0;
  double roi_violation = 0.0;

  double positive_violation() const { return std::max(roi_violation, 0.0); }
};

/// Expected reward and payment of one round.
struct RoundOutcome {
  double reward = 0.0;
  double payment = 0.0;
};

inline Metrics score_episode(const HindsightSolution& opt, std::span<const RoundOutcome> logs) {
  if (logs.empty()) throw ProtocolError("score_episode: empty episode");
  if (!opt.per_round_payments.empty() && opt.per_round_payments.size() != logs.size()) {
    throw ProtocolError("score_episode: log length does not match the benchmark horizon");
  }
  Metrics m;
  for (const RoundOutcome& r : logs) {
    m.reward += r.reward;
    m.payment += r.payment;
  }
  m.regret = opt.opt_reward - m.reward;
  m.roi_violation = m.payment - m.reward;
  return m;
}

}  // namespace autobid

#endif  // AUTOBID_BENCHMARK_HPP
