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

// Online bidders behind one emit/observe interface:
//
//   KnownDistributionLearner  the pacer run against the true F
//   FullFeedbackLearner       doubling stages, optimistic empirical CDF
//   BanditLearner             grid exploration, then a conservative pacer
//
// Every learner alternates strictly between step() and observe(); anything
// else throws ProtocolError.

#ifndef AUTOBID_LEARNERS_HPP
#define AUTOBID_LEARNERS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "autobid/dist.hpp"
#include "autobid/errors.hpp"
#include "autobid/pacing.hpp"

namespace autobid {

struct FullFeedback {
  double competing_bid = 0.0;
};

struct BanditFeedback {
  bool won = false;
};

using Feedback = std::variant<FullFeedback, BanditFeedback>;

enum class FeedbackKind { kFull, kBandit };

/// What a learner submits for one round. `lottery` is the distribution of the
/// bid actually sent to the auction; `pacer` carries the dual diagnostics when
/// the round was paced (absent during bandit exploration).
struct Decision {
  RandomizedBid lottery;
  std::optional<PacerDecision> pacer;
};

class Learner {
 public:
  explicit Learner(long horizon) : horizon_(horizon) {
    if (horizon < 1) throw ConfigError("learner horizon must be at least 1");
  }
  virtual ~Learner() = default;

  Decision step(double v) {
    if (awaiting_feedback_) throw ProtocolError("step called before feedback for round " + std::to_string(round_));
    if (round_ >= horizon_) throw ProtocolError("step called past the horizon");
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("step: value outside [0,1]");
    Decision d = do_step(v);
    awaiting_feedback_ = true;
    return d;
  }

  void observe(const Feedback& fb) {
    if (!awaiting_feedback_) throw ProtocolError("observe called without a bid in round " + std::to_string(round_));
    const bool full = std::holds_alternative<FullFeedback>(fb);
    if (full != (feedback_kind() == FeedbackKind::kFull)) {
      throw ProtocolError("feedback variant does not match the learner");
    }
    do_observe(fb);
    awaiting_feedback_ = false;
    ++round_;
  }

  virtual FeedbackKind feedback_kind() const = 0;
  virtual std::string_view name() const = 0;
  /// Current dual multiplier (1 before any pacer exists).
  virtual double lambda() const = 0;

  long horizon() const { return horizon_; }
  long round() const { return round_; }

 protected:
  virtual Decision do_step(double v) = 0;
  virtual void do_observe(const Feedback& fb) = 0;

 private:
  long horizon_;
  long round_ = 0;
  bool awaiting_feedback_ = false;
};

class KnownDistributionLearner final : public Learner {
 public:
  KnownDistributionLearner(const StepDistribution& true_dist, long horizon)
      : Learner(horizon), pacer_(true_dist, horizon) {}

  FeedbackKind feedback_kind() const override { return FeedbackKind::kFull; }
  std::string_view name() const override { return "known_f"; }
  double lambda() const override { return pacer_.state().lambda; }

 protected:
  Decision do_step(double v) override {
    PacerDecision d = pacer_.step(v);
    return {d.lottery, d};
  }
  void do_observe(const Feedback&) override {}

 private:
  Pacer pacer_;
};

/// Stage lengths 1, 2, 4, ... with the last stage truncated so they sum to T.
inline std::vector<long> doubling_schedule(long horizon) {
  std::vector<long> stages;
  long used = 0;
  for (long len = 1; used < horizon; len *= 2) {
    stages.push_back(std::min(len, horizon - used));
    used += stages.back();
  }
  return stages;
}

/// scale * log(N) / sqrt(N), and 0 for N <= 1.
inline double full_feedback_epsilon(long n, double scale = 1.0) {
  if (n <= 1) return 0.0;
  const double nd = static_cast<double>(n);
  return scale * std::log(nd) / std::sqrt(nd);
}

class FullFeedbackLearner final : public Learner {
 public:
  FullFeedbackLearner(long horizon, StepDistribution prior, double eps_scale = 1.0)
      : Learner(horizon), prior_(std::move(prior)), eps_scale_(eps_scale), stages_(doubling_schedule(horizon)) {
    if (!prior_.is_proper()) throw ConfigError("full-feedback prior must be a proper distribution");
    if (!(eps_scale >= 0.0)) throw ConfigError("eps_scale must be non-negative");
  }

  static StepDistribution default_prior() { return StepDistribution::uniform_grid(0.0, 1.0, 101); }

  FeedbackKind feedback_kind() const override { return FeedbackKind::kFull; }
  std::string_view name() const override { return "full_feedback"; }
  double lambda() const override { return pacer_ ? pacer_->state().lambda : 1.0; }

  const std::vector<long>& stage_lengths() const { return stages_; }
  /// 1-based index of the stage the next (or current) round belongs to.
  std::size_t stage() const { return stage_index_ + 1; }
  double epsilon() const { return epsilon_; }
  const std::vector<double>& observations() const { return pool_; }
  const std::optional<StepDistribution>& model() const { return model_; }
  /// Number of observations the current stage's model was fit on.
  long stage_sample_count() const { return stage_samples_; }

 protected:
  Decision do_step(double v) override {
    if (rounds_in_stage_ == 0) begin_stage();
    PacerDecision d = pacer_->step(v);
    return {d.lottery, d};
  }

  void do_observe(const Feedback& fb) override {
    const double d = std::get<FullFeedback>(fb).competing_bid;
    if (!(d >= 0.0 && d <= 1.0)) throw std::domain_error("observe: competing bid outside [0,1]");
    pool_.push_back(d);
    if (++rounds_in_stage_ == stages_[stage_index_]) {
      ++stage_index_;
      rounds_in_stage_ = 0;
    }
  }

 private:
  void begin_stage() {
    stage_samples_ = static_cast<long>(pool_.size());
    if (pool_.empty()) {
      epsilon_ = 0.0;
      model_ = prior_;
    } else {
      epsilon_ = full_feedback_epsilon(stage_samples_, eps_scale_);
      model_ = optimistic_cdf(empirical_cdf(pool_), epsilon_);
    }
    pacer_.emplace(*model_, stages_[stage_index_]);
  }

  StepDistribution prior_;
  double eps_scale_;
  std::vector<long> stages_;
  std::size_t stage_index_ = 0;
  long rounds_in_stage_ = 0;
  long stage_samples_ = 0;
  double epsilon_ = 0.0;
  std::vector<double> pool_;
  std::optional<StepDistribution> model_;
  std::optional<Pacer> pacer_;
};

struct BanditParams {
  int grid_count = 0;         // K
  int samples_per_point = 0;  // M
  double epsilon = 0.0;

  /// M = ceil(sqrt(T)), K = ceil(T^(1/4)), eps = sqrt(c * log(T) / (2M)).
  static BanditParams defaults(long horizon, double confidence_exponent = 1.0) {
    const double root = std::sqrt(static_cast<double>(horizon));
    BanditParams p;
    p.samples_per_point = static_cast<int>(std::ceil(root - 1e-9));
    p.grid_count = static_cast<int>(std::ceil(std::sqrt(root) - 1e-9));
    p.epsilon = default_epsilon(horizon, p.samples_per_point, confidence_exponent);
    return p;
  }

  static double default_epsilon(long horizon, int samples_per_point, double confidence_exponent = 1.0) {
    return std::sqrt(confidence_exponent * std::log(static_cast<double>(horizon)) / (2.0 * samples_per_point));
  }
};

class BanditLearner final : public Learner {
 public:
  enum class Phase { kExplore, kExploit };

  BanditLearner(long horizon, BanditParams params) : Learner(horizon), params_(params) {
    if (params.grid_count < 1 || params.samples_per_point < 1) {
      throw ConfigError("bandit learner needs K >= 1 and M >= 1");
    }
    if (!(params.epsilon >= 0.0)) throw ConfigError("bandit epsilon must be non-negative");
    if (static_cast<long>(params.grid_count) * params.samples_per_point >= horizon) {
      throw ConfigError("bandit learner: K*M = " +
                        std::to_string(static_cast<long>(params.grid_count) * params.samples_per_point) +
                        " leaves no exploitation rounds for T = " + std::to_string(horizon));
    }
    blocks_.grid_count = params.grid_count;
    blocks_.samples_per_point = params.samples_per_point;
    blocks_.win_counts.assign(static_cast<std::size_t>(params.grid_count), 0);
  }

  FeedbackKind feedback_kind() const override { return FeedbackKind::kBandit; }
  std::string_view name() const override { return "bandit"; }
  double lambda() const override { return pacer_ ? pacer_->state().lambda : 1.0; }

  Phase phase() const { return round() < exploration_rounds() ? Phase::kExplore : Phase::kExploit; }
  long exploration_rounds() const { return static_cast<long>(params_.grid_count) * params_.samples_per_point; }
  const BanditParams& params() const { return params_; }
  const BanditBlockOutcomes& blocks() const { return blocks_; }
  const std::optional<StepDistribution>& empirical() const { return empirical_; }
  const std::optional<StepDistribution>& optimistic() const { return optimistic_; }
  const std::optional<StepDistribution>& conservative() const { return conservative_; }

 protected:
  Decision do_step(double v) override {
    if (phase() == Phase::kExplore) {
      const long block = round() / params_.samples_per_point;
      return {RandomizedBid::deterministic(grid_point(block, params_.grid_count)), std::nullopt};
    }
    if (!pacer_) begin_exploitation();
    PacerDecision d = pacer_->step(v);
    const RandomizedBid& raw = d.lottery;
    RandomizedBid shifted{shift_up_one_cell(raw.b1, params_.grid_count), raw.p1,
                          raw.p2 == 0.0 ? shift_up_one_cell(raw.b1, params_.grid_count)
                                        : shift_up_one_cell(raw.b2, params_.grid_count),
                          raw.p2};
    return {shifted, d};
  }

  void do_observe(const Feedback& fb) override {
    if (phase() == Phase::kExplore && std::get<BanditFeedback>(fb).won) {
      ++blocks_.win_counts[static_cast<std::size_t>(round() / params_.samples_per_point)];
    }
  }

 private:
  void begin_exploitation() {
    empirical_ = bandit_empirical_cdf(blocks_);
    optimistic_ = optimistic_cdf(*empirical_, params_.epsilon);
    conservative_ = conservative_shift_cdf(*optimistic_, params_.grid_count);
    pacer_.emplace(*conservative_, horizon() - exploration_rounds());
  }

  BanditParams params_;
  BanditBlockOutcomes blocks_;
  std::optional<StepDistribution> empirical_;
  std::optional<StepDistribution> optimistic_;
  std::optional<StepDistribution> conservative_;
  std::optional<Pacer> pacer_;
};

}  // namespace autobid

#endif  // AUTOBID_LEARNERS_HPP
