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

// Acceptance checks. Prints one "ACn PASS|FAIL" line per criterion, with
// indented detail lines, and exits nonzero if any selected criterion fails.
//
//   acceptance               run criteria 1..9
//   acceptance --criterion 6 run only criterion 6

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "autobid/io.hpp"
#include "support.hpp"

namespace autobid {
namespace {

void detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

unsigned thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<std::uint64_t> seeds_1_to(std::uint64_t n) {
  std::vector<std::uint64_t> s;
  for (std::uint64_t i = 1; i <= n; ++i) s.push_back(i);
  return s;
}

SweepResult sweep(const StepDistribution& f, Algorithm a, const std::vector<long>& horizons) {
  ExperimentConfig c;
  c.true_dist = f;
  c.value_dist = ValueDistribution::uniform(0.0, 1.0);
  c.algorithm = a;
  return run_sweep(c, horizons, seeds_1_to(20), thread_count());
}

void print_sweep(const char* env, const SweepResult& s) {
  for (const HorizonSummary& h : s.per_horizon) {
    detail("%-12s T=%-6ld regret=%10.3f +- %7.3f  violation=%10.3f +- %7.3f", env, h.horizon, h.mean_regret,
           h.stderr_regret, h.mean_violation, h.stderr_violation);
  }
  detail("%-12s regret slope=%.3f  violation slope=%.3f  invariant violations=%ld", env, s.regret_fit.slope,
         s.violation_fit.slope, s.invariant_violations);
}

const std::vector<long> kPacingHorizons{1L << 10, 1L << 12, 1L << 14};
const std::vector<long> kBanditHorizons{1L << 12, 1L << 14, 1L << 16};

bool ac1() {
  const StepDistribution f = testing::example1();
  const HindsightSolution s = hindsight_optimal(f, std::vector<double>{0.5});
  const RandomizedBid lot = decompose_bid(envelope_of(f), s.opt_payment);
  detail("reward=%.15f payment=%.15f lottery={%g w.p. %.15f, %g w.p. %.15f}", s.opt_reward, s.opt_payment, lot.b1,
         lot.p1, lot.b2, lot.p2);
  const double tol = 1e-12;
  return std::abs(s.opt_reward - 1.0 / 3.0) <= tol && std::abs(s.opt_payment - 1.0 / 3.0) <= tol && lot.b1 == 0.0 &&
         std::abs(lot.p1 - 2.0 / 3.0) <= tol && lot.b2 == 1.0 && std::abs(lot.p2 - 1.0 / 3.0) <= tol;
}

bool ac2() {
  Rng rng(20240601);
  double worst = 0.0;
  long checks = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const StepDistribution f = testing::random_distribution(rng, 8);
    const ConcaveEnvelope e = envelope_of(f);
    for (int k = 0; k < 50; ++k) {
      const double x = e.x0() + (1.0 - e.x0()) * rng.uniform();
      const LotteryOutcome lot = evaluate_lottery(decompose_bid(e, x), f);
      // The deterministic F_conv bid with payment x; x <= G_conv(x) on [x0, 1].
      const double tilde_b = std::min(x / e.gconv(x), 1.0);
      const double win = e.fconv(tilde_b);
      const double pay = tilde_b * win;
      worst = std::max({worst, std::abs(lot.win_probability - win), std::abs(lot.payment - pay)});
      ++checks;
    }
  }
  detail("%ld (distribution, payment) pairs, worst deviation %.3e", checks, worst);
  return worst <= 1e-9;
}

bool ac3() {
  Rng rng(303);
  const int grid_n = 201;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const StepDistribution f = testing::random_distribution(rng, 5);
    const std::vector<double> v = testing::uniform_values(rng, 1 + rng.next_u64() % 3);
    worst = std::max(worst, std::abs(hindsight_optimal(f, v).opt_reward - brute_force_optimal(f, v, grid_n)));
  }
  detail("200 instances, worst |exact - brute force| = %.3e, tolerance %.3e", worst, 2.0 / grid_n);
  return worst <= 2.0 / grid_n;
}

bool ac4() {
  bool ok = true;
  for (const auto& [name, f] : testing::environments()) {
    const SweepResult s = sweep(f, Algorithm::kKnownF, kPacingHorizons);
    print_sweep(name, s);
    for (const HorizonSummary& h : s.per_horizon) {
      const double bound = 2.0 * std::sqrt(static_cast<double>(h.horizon)) * std::log(static_cast<double>(h.horizon));
      if (h.mean_violation > bound) {
        detail("%s: violation %.3f above 2 sqrt(T) log T = %.3f at T=%ld", name, h.mean_violation, bound, h.horizon);
        ok = false;
      }
    }
    ok = ok && s.regret_fit.slope <= 0.6;
  }
  return ok;
}

bool ac5() {
  bool ok = true;
  for (const auto& [name, f] : testing::environments()) {
    const SweepResult s = sweep(f, Algorithm::kFullFeedback, kPacingHorizons);
    print_sweep(name, s);
    ok = ok && s.regret_fit.slope <= 0.65 && s.violation_fit.slope <= 0.65;
  }
  return ok;
}

bool ac6() {
  bool ok = true;
  for (const auto& [name, f] : testing::environments()) {
    const SweepResult s = sweep(f, Algorithm::kBandit, kBanditHorizons);
    print_sweep(name, s);
    auto rate = [](long t) {
      const double td = static_cast<double>(t);
      return std::pow(td, 0.75) * std::log(td);
    };
    const HorizonSummary& first = s.per_horizon.front();
    const double c = std::max((first.mean_regret + 2.0 * first.stderr_regret) / rate(first.horizon), 1e-12);
    bool bound_ok = true;
    for (const HorizonSummary& h : s.per_horizon) bound_ok = bound_ok && h.mean_regret <= c * rate(h.horizon);
    const bool slopes_ok = s.regret_fit.slope <= 0.85 && s.violation_fit.slope <= 0.85;
    detail("%-12s c=%.4e  absolute bound %s  slopes %s", name, c, bound_ok ? "held" : "exceeded",
           slopes_ok ? "within 0.85" : "above 0.85");
    ok = ok && bound_ok && slopes_ok;
  }
  return ok;
}

bool ac7() {
  const int n = 1000;
  const double eps = std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
  bool ok = true;
  for (const auto& [name, f] : testing::environments()) {
    Rng rng(7007);
    int covered = 0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> s(n);
      for (double& x : s) x = f.sample(rng);
      const StepDistribution emp = empirical_cdf(s);
      const StepDistribution opt = optimistic_cdf(emp, eps);
      bool dominates = true;
      for (double b : f.support()) dominates = dominates && opt.cdf(b) >= f.cdf(b);
      covered += sup_distance(emp, f) <= eps && dominates;
    }
    detail("%-12s covered in %d/200 trials", name, covered);
    ok = ok && covered >= 190;
  }
  return ok;
}

bool ac8() {
  Rng rng(8008);
  int qualifying = 0;
  int attempts = 0;
  long violations = 0;
  while (qualifying < 100) {
    ++attempts;
    const StepDistribution f = testing::random_distribution(rng, 8);
    const long horizon = 1L << (10 + rng.next_u64() % 7);
    const BanditParams p = BanditParams::defaults(horizon);
    BanditBlockOutcomes blocks{p.grid_count, p.samples_per_point, std::vector<int>(p.grid_count, 0)};
    for (int k = 0; k < p.grid_count; ++k) {
      const double b = grid_point(k, p.grid_count);
      for (int m = 0; m < p.samples_per_point; ++m) blocks.win_counts[k] += b >= f.sample(rng);
    }
    const StepDistribution opt = optimistic_cdf(bandit_empirical_cdf(blocks), p.epsilon);
    bool grid_dominates = true;
    for (int k = 0; k < p.grid_count; ++k) {
      const double b = grid_point(k, p.grid_count);
      grid_dominates = grid_dominates && opt.cdf(b) >= f.cdf(b);
    }
    if (!grid_dominates) continue;
    ++qualifying;
    const StepDistribution cons = conservative_shift_cdf(opt, p.grid_count);
    for (int i = 0; i <= 10000; ++i) {
      const double b = i / 10000.0;
      violations += cons.cdf(b) < f.cdf(b);
    }
  }
  detail("%d qualifying runs out of %d, %ld points below the true CDF", qualifying, attempts, violations);
  return violations == 0;
}

std::string episode_bytes(const io::RunConfig& rc, std::uint64_t seed) {
  const EpisodeResult r = run_episode(rc.experiment, seed);
  std::ostringstream out;
  out << io::episode_json(rc, r).dump(2) << '\n';
  io::write_trajectory_csv(out, r);
  return out.str();
}

bool ac9() {
  bool ok = true;

  int enforced = 0;
  auto expect_protocol_error = [&](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const ProtocolError&) {
      ++enforced;
    }
  };
  {
    KnownDistributionLearner l(testing::example1(), 3);
    expect_protocol_error([&] { l.observe(FullFeedback{0.0}); });
    l.step(0.5);
    expect_protocol_error([&] { l.step(0.5); });
    expect_protocol_error([&] { l.observe(BanditFeedback{true}); });
    l.observe(FullFeedback{0.0});
    l.step(0.5);
    l.observe(FullFeedback{1.0});
    l.step(0.5);
    l.observe(FullFeedback{1.0});
    expect_protocol_error([&] { l.step(0.5); });
  }
  {
    BanditLearner l(64, BanditParams{2, 4, 0.1});
    expect_protocol_error([&] { l.observe(BanditFeedback{true}); });
    l.step(0.5);
    expect_protocol_error([&] { l.observe(FullFeedback{0.5}); });
  }
  detail("protocol misuse rejected in %d/6 cases", enforced);
  ok = ok && enforced == 6;

  bool identical = true;
  for (Algorithm a : {Algorithm::kKnownF, Algorithm::kFullFeedback, Algorithm::kBandit}) {
    io::RunConfig rc;
    rc.experiment.true_dist = testing::three_atoms();
    rc.experiment.algorithm = a;
    rc.experiment.horizon = 4096;
    identical = identical && episode_bytes(rc, 11) == episode_bytes(rc, 11);

    ExperimentConfig c = rc.experiment;
    const std::vector<long> horizons{1024, 2048, 4096};
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::ostringstream one, two;
    io::write_sweep_csv(one, run_sweep(c, horizons, seeds, 1));
    io::write_sweep_csv(two, run_sweep(c, horizons, seeds, 2));
    identical = identical && one.str() == two.str();
  }
  detail("episode JSON/CSV reruns and 1- vs 2-thread sweeps %s", identical ? "byte-identical" : "DIFFER");
  ok = ok && identical;

  long violations = 0;
  for (const auto& [name, f] : testing::environments()) {
    violations += sweep(f, Algorithm::kKnownF, kPacingHorizons).invariant_violations;
    violations += sweep(f, Algorithm::kFullFeedback, kPacingHorizons).invariant_violations;
    violations += sweep(f, Algorithm::kBandit, kBanditHorizons).invariant_violations;
  }
  detail("lambda > 0 and surplus bounds: %ld violations over the criterion 4-6 runs", violations);
  return ok && violations == 0;
}

}  // namespace
}  // namespace autobid

int main(int argc, char** argv) {
  using Check = bool (*)();
  const Check checks[] = {autobid::ac1, autobid::ac2, autobid::ac3, autobid::ac4, autobid::ac5,
                          autobid::ac6, autobid::ac7, autobid::ac8, autobid::ac9};
  int only = 0;
  if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0) {
    only = std::atoi(argv[2]);
    if (only < 1 || only > 9) {
      std::fprintf(stderr, "criterion must be 1..9\n");
      return 2;
    }
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 2;
  }
  int failed = 0;
  for (int i = 1; i <= 9; ++i) {
    if (only != 0 && i != only) continue;
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = checks[i - 1]();
    } catch (const std::exception& e) {
      std::printf("    error: %s\n", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("AC%d %s (%.1fs)\n", i, pass ? "PASS" : "FAIL", secs);
    std::fflush(stdout);
    failed += !pass;
  }
  return failed == 0 ? 0 : 1;
}
