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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "support.hpp"

namespace autobid {
namespace {

using testing::example1;

TEST(HindsightOptimal, ExampleOne) {
  const HindsightSolution s = hindsight_optimal(example1(), std::vector<double>{0.5});
  EXPECT_NEAR(s.opt_reward, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.opt_payment, 1.0 / 3.0, 1e-12);
  ASSERT_EQ(s.per_round_payments.size(), 1u);
  EXPECT_NEAR(s.per_round_payments[0], 1.0 / 3.0, 1e-12);
}

TEST(HindsightOptimal, ExampleOneTwice) {
  const std::vector<double> v{0.5, 0.5};
  const HindsightSolution s = hindsight_optimal(example1(), v);
  EXPECT_NEAR(s.opt_reward, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.opt_payment, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(brute_force_optimal(example1(), v, 201), 2.0 / 3.0, 2.0 / 201);
}

TEST(HindsightOptimal, FreeWins) {
  const std::vector<double> v{0.3, 0.9, 0.0, 0.5};
  const HindsightSolution s = hindsight_optimal(StepDistribution::point_mass(0.0), v);
  EXPECT_DOUBLE_EQ(s.opt_reward, 1.7);
  EXPECT_EQ(s.opt_payment, 0.0);
}

TEST(HindsightOptimal, UnconstrainedWhenValuesAreHigh) {
  // Winning every round at price 1 is affordable when the value is 1.
  const HindsightSolution s = hindsight_optimal(example1(), std::vector<double>{1.0, 1.0});
  EXPECT_DOUBLE_EQ(s.opt_reward, 2.0);
  EXPECT_DOUBLE_EQ(s.opt_payment, 2.0);
}

TEST(HindsightOptimal, RejectsBadInput) {
  EXPECT_THROW(hindsight_optimal(example1(), std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(hindsight_optimal(example1(), std::vector<double>{1.2}), std::invalid_argument);
}

TEST(BruteForce, Examples) {
  EXPECT_NEAR(brute_force_optimal(example1(), std::vector<double>{0.5}, 201), 1.0 / 3.0, 1.0 / 200);
  EXPECT_DOUBLE_EQ(brute_force_optimal(StepDistribution::point_mass(0.0), std::vector<double>{1.0}, 201), 1.0);
  const std::vector<double> v{0.8};
  const StepDistribution f = testing::three_atoms();
  EXPECT_NEAR(brute_force_optimal(f, v, 201), hindsight_optimal(f, v).opt_reward, 1.0 / 100);
}

TEST(BruteForce, RejectsLargeInstances) {
  EXPECT_THROW(brute_force_optimal(example1(), std::vector<double>(5, 0.5), 11), std::invalid_argument);
  EXPECT_THROW(brute_force_optimal(example1(), std::vector<double>{0.5}, 202), std::invalid_argument);
  EXPECT_THROW(brute_force_optimal(example1(), std::vector<double>{0.5}, 1), std::invalid_argument);
}

TEST(HindsightOptimal, AgreesWithBruteForce) {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const StepDistribution f = testing::random_distribution(rng, 5);
    const std::vector<double> v = testing::uniform_values(rng, 1 + rng.next_u64() % 3);
    const double exact = hindsight_optimal(f, v).opt_reward;
    const double brute = brute_force_optimal(f, v, 101);
    ASSERT_NEAR(exact, brute, 2.0 / 101) << "trial " << trial;
    ASSERT_GE(exact, brute - 1e-9);
  }
}

TEST(HindsightOptimal, UsesMixturesWithALosingBid) {
  // No mass at 0 and a low value: only mixing "lose" with the first atom is feasible.
  const StepDistribution f = StepDistribution::from_atoms({{0.5, 0.5}, {1.0, 0.5}});
  const std::vector<double> v{0.9, 0.2};
  const double exact = hindsight_optimal(f, v).opt_reward;
  EXPECT_NEAR(exact, brute_force_optimal(f, v, 201), 2.0 / 201);
}

TEST(HindsightOptimal, Feasible) {
  Rng rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    const StepDistribution f = testing::random_distribution(rng, 8);
    const std::vector<double> v = testing::uniform_values(rng, 1 + rng.next_u64() % 200);
    const HindsightSolution s = hindsight_optimal(f, v);
    ASSERT_LE(s.opt_payment, s.opt_reward + 1e-9);
    ASSERT_EQ(s.per_round_payments.size(), v.size());
    double sum = 0.0;
    for (double x : s.per_round_payments) {
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0);
      sum += x;
    }
    ASSERT_NEAR(sum, s.opt_payment, 1e-9);
    ASSERT_GE(s.lambda_star, 0.0);
  }
}

TEST(HindsightOptimal, SlackGrowsWithTheMultiplier) {
  Rng rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    const ConcaveEnvelope e = envelope_of(testing::random_distribution(rng, 8, /*zero_atom=*/true));
    const std::vector<double> v = testing::uniform_values(rng, 50);
    double prev = -1e300;
    for (int i = 0; i < 100; ++i) {
      const double lambda = std::exp(-5.0 + 10.0 * i / 99.0);
      double slack = 0.0;
      for (double x : v) {
        const BestResponse br = best_response(e, x, lambda);
        slack += x * br.y - br.x;
      }
      ASSERT_GE(slack, prev - 1e-12);
      prev = slack;
    }
  }
}

TEST(HindsightOptimal, DuplicatingValuesDoublesTheOptimum) {
  Rng rng(109);
  for (int trial = 0; trial < 100; ++trial) {
    const StepDistribution f = testing::random_distribution(rng, 8);
    std::vector<double> v = testing::uniform_values(rng, 1 + rng.next_u64() % 50);
    const double once = hindsight_optimal(f, v).opt_reward;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) v.push_back(v[i]);
    ASSERT_NEAR(hindsight_optimal(f, v).opt_reward, 2.0 * once, 1e-9 * std::max(1.0, once));
  }
}

TEST(ScoreEpisode, Metrics) {
  HindsightSolution opt;
  opt.opt_reward = 1.0 / 3.0;
  const std::vector<RoundOutcome> optimal{{1.0 / 3.0, 1.0 / 3.0}};
  EXPECT_EQ(score_episode(opt, optimal).regret, 0.0);

  const std::vector<RoundOutcome> deterministic{{0.25, 0.0}};
  const Metrics m = score_episode(opt, deterministic);
  EXPECT_NEAR(m.regret, 1.0 / 12.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.roi_violation, -0.25);
  EXPECT_EQ(m.positive_violation(), 0.0);
}

TEST(ScoreEpisode, RejectsEmptyOrMismatchedLogs) {
  HindsightSolution opt;
  EXPECT_THROW(score_episode(opt, std::vector<RoundOutcome>{}), ProtocolError);
  opt.per_round_payments = {0.1, 0.2};
  EXPECT_THROW(score_episode(opt, std::vector<RoundOutcome>{{0.1, 0.1}}), ProtocolError);
}

}  // namespace
}  // namespace autobid
