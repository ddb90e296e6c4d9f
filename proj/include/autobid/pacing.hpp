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

// Dual mirror-descent pacer for ROI-constrained value maximization against a
// known (or modelled) competing-bid distribution.
//
// Each round the pacer picks the payment x on the concave envelope that
// maximizes (1 + lambda) * v * G_conv(x) - lambda * x, turns it into a two-bid
// lottery, and moves lambda multiplicatively against the modelled ROI surplus
// g = v * F_conv(b) - b * F_conv(b).

#ifndef AUTOBID_PACING_HPP
#define AUTOBID_PACING_HPP

#include <cmath>
#include <cstddef>
#include <utility>

#include "autobid/envelope.hpp"
#include "autobid/errors.hpp"

namespace autobid {

struct DualState {
  double lambda = 1.0;
  double alpha = 1.0;
  long t = 0;
  long horizon = 1;

  /// lambda = 1 and alpha = 1/sqrt(horizon).
  static DualState initial(long horizon) {
    if (horizon < 1) throw ConfigError("DualState: horizon must be at least 1");
    return {1.0, 1.0 / std::sqrt(static_cast<double>(horizon)), 0, horizon};
  }
};

/// Optimal envelope point for one round.
struct BestResponse {
  double x = 0.0;        // envelope payment
  double y = 0.0;        // G_conv(x) = F_conv(tilde_b)
  double tilde_b = 0.0;  // deterministic F_conv bid with payment x
};

/// Maximizes (1 + lambda) v G_conv(x) - lambda x over [0,1]. The objective is
/// concave and piecewise linear on [x0, x'], so the walk moves right while the
/// next segment's slope is at least lambda / ((1 + lambda) v). Ties go to the
/// larger payment. Paying nothing (bidding 0) is the fallback when x0 > 0.
inline BestResponse best_response(const ConcaveEnvelope& env, double v, double lambda) {
  const auto pts = env.breakpoints();
  const double scale = (1.0 + lambda) * v;
  std::size_t j = 0;
  while (j + 1 < pts.size()) {
    const double gain = scale * (pts[j + 1].y - pts[j].y);
    const double cost = lambda * (pts[j + 1].x - pts[j].x);
    if (gain < cost - 1e-12 * std::max(gain, cost)) break;
    ++j;
  }
  const double value = scale * pts[j].y - lambda * pts[j].x;
  if (env.x0() > 0.0 && value < -1e-12 * std::max(scale * pts[j].y, lambda * pts[j].x)) {
    return {0.0, 0.0, 0.0};
  }
  return {pts[j].x, pts[j].y, pts[j].bid};
}

/// lambda <- lambda * exp(-alpha * g).
inline DualState dual_update(DualState state, double g) {
  state.lambda *= std::exp(-state.alpha * g);
  ++state.t;
#ifndef NDEBUG
  if (!(state.lambda <= std::exp(50.0))) throw std::overflow_error("dual_update: lambda overflow");
#endif
  return state;
}

struct PacerDecision {
  double tilde_b = 0.0;
  RandomizedBid lottery;
  double x_target = 0.0;
  double win_probability = 0.0;  // F_conv(tilde_b) under the pacer's model
  double g = 0.0;                // modelled surplus used for the dual step
  double lambda = 1.0;           // multiplier the decision was made with
};

/// One round: best response, lottery, and dual step. The lottery is built
/// against the distribution the envelope came from; g uses that same model,
/// never the realized auction outcome.
inline std::pair<PacerDecision, DualState> pacer_step(const DualState& state, const ConcaveEnvelope& env,
                                                      double v) {
  if (state.t >= state.horizon) throw ProtocolError("pacer_step: horizon exhausted");
  const BestResponse br = best_response(env, v, state.lambda);
  PacerDecision d;
  d.tilde_b = br.tilde_b;
  d.x_target = br.x;
  d.win_probability = br.y;
  d.lottery = decompose_bid(env, br.x);
  d.g = v * br.y - br.x;
  d.lambda = state.lambda;
#ifndef NDEBUG
  const double lo = std::max(-1.0, -1.0 / state.lambda) - 1e-9;
  if (d.g < lo || d.g > v * br.y + 1e-12) throw std::logic_error("pacer_step: surplus out of bounds");
#endif
  return {d, dual_update(state, d.g)};
}

/// Stateful wrapper owning its envelope; one instance per run or stage.
class Pacer {
 public:
  Pacer(ConcaveEnvelope env, long horizon) : env_(std::move(env)), state_(DualState::initial(horizon)) {}
  Pacer(const StepDistribution& model, long horizon) : Pacer(envelope_of(model), horizon) {}

  PacerDecision step(double v) {
    auto [decision, next] = pacer_step(state_, env_, v);
    state_ = next;
    return decision;
  }

  const DualState& state() const { return state_; }
  const ConcaveEnvelope& envelope() const { return env_; }

 private:
  ConcaveEnvelope env_;
  DualState state_;
};

}  // namespace autobid

#endif  // AUTOBID_PACING_HPP
