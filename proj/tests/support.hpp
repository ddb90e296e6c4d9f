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

// Shared fixtures and independent oracles for the test suites.

#ifndef AUTOBID_TESTS_SUPPORT_HPP
#define AUTOBID_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "autobid/autobid.hpp"

namespace autobid::testing {

inline StepDistribution example1() { return StepDistribution::from_atoms({{0.0, 0.5}, {1.0, 0.5}}); }

inline StepDistribution three_atoms() {
  return StepDistribution::from_atoms({{0.0, 0.5}, {0.6, 0.2}, {1.0, 0.3}});
}

inline StepDistribution grid51() { return StepDistribution::uniform_grid(0.0, 1.0, 51); }

/// The three desk-scale environments.
inline std::vector<std::pair<const char*, StepDistribution>> environments() {
  return {{"example1", example1()}, {"three_atoms", three_atoms()}, {"grid51", grid51()}};
}

/// Random law with 1..max_atoms atoms on the 1/100 grid. With zero_atom the
/// law always has mass at 0; otherwise mass at 0 appears about half the time.
inline StepDistribution random_distribution(Rng& rng, int max_atoms, bool zero_atom = false) {
  const int n = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_atoms));
  std::set<int> locs;
  if (zero_atom || rng.uniform() < 0.5) locs.insert(0);
  while (static_cast<int>(locs.size()) < n) locs.insert(static_cast<int>(rng.next_u64() % 101));
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    w.push_back(0.05 + rng.uniform());
    total += w.back();
  }
  std::vector<double> support;
  std::vector<double> cdf;
  double acc = 0.0;
  std::size_t i = 0;
  for (int l : locs) {
    acc += w[i++] / total;
    support.push_back(l / 100.0);
    cdf.push_back(acc);
  }
  cdf.back() = 1.0;
  return {support, cdf};
}

/// Upper concave hull value at x of the (payment, win) points of dist plus the
/// origin, by brute force over all pairs. Independent of ConcaveEnvelope.
inline double hull_oracle(const StepDistribution& dist, double x) {
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double b = dist.support()[i];
    const double y = dist.cdf_values()[i];
    pts.emplace_back(b * y, y);
  }
  // Bidding above the last atom pays more and wins no more; those points lie
  // on y = 1 and the hull is flat there.
  double best = 0.0;
  for (const auto& a : pts) {
    if (a.first <= x) best = std::max(best, a.second);  // paying less is free disposal
    for (const auto& b : pts) {
      if (a.first <= x && x <= b.first && b.first > a.first) {
        const double t = (x - a.first) / (b.first - a.first);
        best = std::max(best, a.second + t * (b.second - a.second));
      }
    }
  }
  return best;
}

inline std::vector<double> uniform_values(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform();
  return v;
}

}  // namespace autobid::testing

#endif  // AUTOBID_TESTS_SUPPORT_HPP
