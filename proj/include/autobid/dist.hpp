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

// Competing-bid and value distributions, plus the CDF estimators the
// learners build from observed auction outcomes.
//
// All CDFs are right-continuous step functions on [0,1]: F(b) is the value
// at the largest support point <= b, and 0 below the support. A bid b wins
// against a competing bid d iff b >= d, so F(b) is also the win probability.

#ifndef AUTOBID_DIST_HPP
#define AUTOBID_DIST_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "autobid/random.hpp"

namespace autobid {

inline constexpr double kMassTolerance = 1e-12;

/// Finite-support CDF on [0,1].
class StepDistribution {
 public:
  StepDistribution() = default;

  StepDistribution(std::vector<double> support, std::vector<double> cdf_values)
      : support_(std::move(support)), cdf_(std::move(cdf_values)) {
    if (support_.empty()) {
      throw std::invalid_argument("StepDistribution: empty support");
    }
    if (support_.size() != cdf_.size()) {
      throw std::invalid_argument("StepDistribution: support and cdf sizes differ");
    }
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (!(support_[i] >= 0.0 && support_[i] <= 1.0)) {
        throw std::invalid_argument("StepDistribution: support point outside [0,1]");
      }
      if (!(cdf_[i] >= 0.0 && cdf_[i] <= 1.0 + kMassTolerance)) {
        throw std::invalid_argument("StepDistribution: cdf value outside [0,1]");
      }
      if (i > 0 && !(support_[i] > support_[i - 1])) {
        throw std::invalid_argument("StepDistribution: support not strictly increasing");
      }
      if (i > 0 && cdf_[i] < cdf_[i - 1]) {
        throw std::invalid_argument("StepDistribution: cdf values decreasing");
      }
    }
    if (std::abs(cdf_.back() - 1.0) <= kMassTolerance) cdf_.back() = 1.0;
    for (auto& c : cdf_) c = std::min(c, cdf_.back());
  }

  /// Atoms given as (location, mass) pairs in any order; masses must sum to 1.
  static StepDistribution from_atoms(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("from_atoms: no atoms");
    std::sort(atoms.begin(), atoms.end());
    std::vector<double> support;
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& [loc, mass] : atoms) {
      if (mass < 0.0) throw std::invalid_argument("from_atoms: negative mass");
      acc += mass;
      if (!support.empty() && support.back() == loc) {
        cdf.back() = acc;
      } else {
        support.push_back(loc);
        cdf.push_back(acc);
      }
    }
    if (std::abs(acc - 1.0) > kMassTolerance) {
      throw std::invalid_argument("from_atoms: masses do not sum to 1");
    }
    return {std::move(support), std::move(cdf)};
  }

  static StepDistribution point_mass(double x) { return {{x}, {1.0}}; }

  /// n equally spaced atoms of equal mass on [lo, hi].
  static StepDistribution uniform_grid(double lo, double hi, std::size_t n) {
    if (n == 0 || lo > hi) throw std::invalid_argument("uniform_grid: bad parameters");
    if (n == 1 || lo == hi) return point_mass(lo);
    std::vector<double> support(n);
    std::vector<double> cdf(n);
    for (std::size_t i = 0; i < n; ++i) {
      support[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
      cdf[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    }
    return {std::move(support), std::move(cdf)};
  }

  /// F(b). Throws std::domain_error for b outside [0,1].
  double cdf(double b) const {
    if (!(b >= 0.0 && b <= 1.0)) throw std::domain_error("cdf: bid outside [0,1]");
    return cdf_unchecked(b);
  }

  double cdf_unchecked(double b) const {
    auto it = std::upper_bound(support_.begin(), support_.end(), b);
    if (it == support_.begin()) return 0.0;
    return cdf_[static_cast<std::size_t>(it - support_.begin()) - 1];
  }

  double operator()(double b) const { return cdf(b); }

  /// True when the final CDF value is 1, i.e. this is a law rather than a
  /// sub-probability estimate.
  bool is_proper() const { return !cdf_.empty() && cdf_.back() == 1.0; }

  /// Inverse-CDF draw.
  double sample(Rng& rng) const {
    if (!is_proper()) throw std::logic_error("sample: distribution does not reach 1");
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return support_[static_cast<std::size_t>(it - cdf_.begin())];
  }

  double mass_at(std::size_t i) const { return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1]; }

  std::span<const double> support() const { return support_; }
  std::span<const double> cdf_values() const { return cdf_; }
  std::size_t size() const { return support_.size(); }

  friend bool operator==(const StepDistribution&, const StepDistribution&) = default;

 private:
  std::vector<double> support_;
  std::vector<double> cdf_;
};

/// Distribution of the bidder's per-round values.
class ValueDistribution {
 public:
  enum class Kind { kAtoms, kUniform };

  /// Uniform on [0,1].
  ValueDistribution() = default;

  static ValueDistribution atoms(StepDistribution d) {
    if (!d.is_proper()) throw std::invalid_argument("ValueDistribution: weights must sum to 1");
    ValueDistribution v;
    v.kind_ = Kind::kAtoms;
    v.atoms_ = std::move(d);
    return v;
  }

  static ValueDistribution point_mass(double x) { return atoms(StepDistribution::point_mass(x)); }

  static ValueDistribution uniform(double lo, double hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
      throw std::invalid_argument("ValueDistribution: uniform bounds must satisfy 0 <= lo <= hi <= 1");
    }
    ValueDistribution v;
    v.kind_ = Kind::kUniform;
    v.lo_ = lo;
    v.hi_ = hi;
    return v;
  }

  double sample(Rng& rng) const {
    if (kind_ == Kind::kAtoms) return atoms_.sample(rng);
    return lo_ + (hi_ - lo_) * rng.uniform();
  }

  double mean() const {
    if (kind_ == Kind::kUniform) return 0.5 * (lo_ + hi_);
    double m = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) m += atoms_.support()[i] * atoms_.mass_at(i);
    return m;
  }

  Kind kind() const { return kind_; }
  const StepDistribution& atom_distribution() const { return atoms_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  Kind kind_ = Kind::kUniform;
  StepDistribution atoms_;
  double lo_ = 0.0;
  double hi_ = 1.0;
};

/// Win counts from the exploration phase of the bandit learner: block k bid
/// the grid point k/K for M consecutive rounds and won win_counts[k] times.
struct BanditBlockOutcomes {
  int grid_count = 0;         // K
  int samples_per_point = 0;  // M
  std::vector<int> win_counts;

  void validate() const {
    if (grid_count <= 0 || samples_per_point <= 0) {
      throw std::invalid_argument("BanditBlockOutcomes: K and M must be positive");
    }
    if (win_counts.size() != static_cast<std::size_t>(grid_count)) {
      throw std::invalid_argument("BanditBlockOutcomes: need exactly K win counts");
    }
    for (int w : win_counts) {
      if (w < 0 || w > samples_per_point) {
        throw std::invalid_argument("BanditBlockOutcomes: win count outside [0, M]");
      }
    }
  }
};

/// k/K, computed the same way everywhere so grid bids compare exactly.
inline double grid_point(long k, long grid_count) {
  return static_cast<double>(k) / static_cast<double>(grid_count);
}

/// min(b + 1/K, 1), snapped onto the grid when b is (numerically) a grid point.
inline double shift_up_one_cell(double b, int grid_count) {
  const double scaled = b * grid_count;
  const double k = std::round(scaled);
  if (std::abs(scaled - k) <= 1e-9) {
    return std::min(1.0, grid_point(static_cast<long>(k) + 1, grid_count));
  }
  return std::min(1.0, b + 1.0 / grid_count);
}

/// F_hat(b) = (1/N) * #{i : d_i <= b} over distinct sorted sample values.
inline StepDistribution empirical_cdf(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical_cdf: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double d : sorted) {
    if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("empirical_cdf: sample outside [0,1]");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> support;
  std::vector<double> cdf;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    support.push_back(sorted[i]);
    cdf.push_back(static_cast<double>(i + 1) / n);
  }
  cdf.back() = 1.0;
  return {std::move(support), std::move(cdf)};
}

/// (F_hat(b) + eps) ∧ 1 for every b in [0,1]. Below the first support point
/// the estimate is 0, so a point at b = 0 with value eps is added when needed.
inline StepDistribution optimistic_cdf(const StepDistribution& emp, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("optimistic_cdf: eps must be non-negative");
  std::vector<double> support;
  std::vector<double> cdf;
  if (eps > 0.0 && emp.support().front() > 0.0) {
    support.push_back(0.0);
    cdf.push_back(std::min(eps, 1.0));
  }
  for (std::size_t i = 0; i < emp.size(); ++i) {
    support.push_back(emp.support()[i]);
    cdf.push_back(std::min(emp.cdf_values()[i] + eps, 1.0));
  }
  return {std::move(support), std::move(cdf)};
}

/// Step estimate on the grid {k/K} from exploration win rates. The running
/// maximum over block prefixes keeps the estimate monotone; F_hat(c_0) is
/// block 0's own rate and F_hat(c_K) = 1.
inline StepDistribution bandit_empirical_cdf(const BanditBlockOutcomes& blocks) {
  blocks.validate();
  const int k_count = blocks.grid_count;
  const double m = blocks.samples_per_point;
  std::vector<double> support(static_cast<std::size_t>(k_count) + 1);
  std::vector<double> cdf(support.size());
  double running = 0.0;
  for (int k = 0; k < k_count; ++k) {
    running = std::max(running, blocks.win_counts[static_cast<std::size_t>(k)] / m);
    support[static_cast<std::size_t>(k)] = grid_point(k, k_count);
    cdf[static_cast<std::size_t>(k)] = running;
  }
  support.back() = 1.0;
  cdf.back() = 1.0;
  return {std::move(support), std::move(cdf)};
}

/// F_c(b) = F_bar((b + 1/K) ∧ 1). Each jump of F_bar moves one cell left;
/// jumps that land at or below 0 collapse onto b = 0.
inline StepDistribution conservative_shift_cdf(const StepDistribution& optimistic, int grid_count) {
  if (grid_count <= 0) throw std::invalid_argument("conservative_shift_cdf: K must be positive");
  std::vector<double> support;
  std::vector<double> cdf;
  for (std::size_t i = 0; i < optimistic.size(); ++i) {
    const double s = optimistic.support()[i];
    const double scaled = s * grid_count;
    const double k = std::round(scaled);
    double shifted = std::abs(scaled - k) <= 1e-9 ? grid_point(static_cast<long>(k) - 1, grid_count)
                                                  : s - 1.0 / grid_count;
    shifted = std::max(shifted, 0.0);
    const double value = optimistic.cdf_values()[i];
    if (!support.empty() && shifted <= support.back()) {
      cdf.back() = value;
    } else {
      support.push_back(shifted);
      cdf.push_back(value);
    }
  }
  return {std::move(support), std::move(cdf)};
}

/// sup_b |a(b) - b(b)|, exact for step functions: both are constant between
/// consecutive points of the merged support.
inline double sup_distance(const StepDistribution& a, const StepDistribution& b) {
  std::vector<double> pts(a.support().begin(), a.support().end());
  pts.insert(pts.end(), b.support().begin(), b.support().end());
  pts.push_back(0.0);
  double best = 0.0;
  for (double p : pts) best = std::max(best, std::abs(a.cdf_unchecked(p) - b.cdf_unchecked(p)));
  return best;
}

namespace detail {

class LiteralParser {
 public:
  explicit LiteralParser(const std::string& text) : s_(text) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  double number() {
    skip_ws();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail("expected a number");
    }
    pos_ += used;
    return v;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  std::vector<double> call_args() {
    std::vector<double> args;
    expect('(');
    if (consume(')')) return args;
    do {
      args.push_back(number());
    } while (consume(','));
    expect(')');
    return args;
  }

  std::vector<std::pair<double, double>> pair_list() {
    std::vector<std::pair<double, double>> out;
    expect('[');
    if (consume(']')) return out;
    do {
      expect('(');
      const double a = number();
      expect(',');
      const double b = number();
      expect(')');
      out.emplace_back(a, b);
    } while (consume(','));
    expect(']');
    return out;
  }

  void finish() {
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
  }

  bool at(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("distribution literal '" + s_ + "': " + what + " at offset " +
                                std::to_string(pos_));
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

inline StepDistribution cdf_points_to_distribution(const std::vector<std::pair<double, double>>& pts,
                                                   LiteralParser& p) {
  if (pts.empty()) p.fail("empty point list");
  std::vector<double> support;
  std::vector<double> cdf;
  for (const auto& [b, c] : pts) {
    support.push_back(b);
    cdf.push_back(c);
  }
  try {
    return {std::move(support), std::move(cdf)};
  } catch (const std::invalid_argument& e) {
    p.fail(e.what());
  }
}

}  // namespace detail

/// Parses the distribution literal used by config files:
///   [(threshold, cumulative), ...]   explicit CDF points
///   pointmass(x)
///   uniform(lo, hi)                  101 equal atoms on [lo, hi]
///   uniform_grid(lo, hi, n)          n equal atoms on [lo, hi]
/// Non-monotone or out-of-range entries are rejected.
inline StepDistribution parse_step_distribution(const std::string& text) {
  detail::LiteralParser p(text);
  StepDistribution out;
  if (p.at('[')) {
    out = detail::cdf_points_to_distribution(p.pair_list(), p);
  } else {
    const std::string name = p.identifier();
    const auto args = p.call_args();
    if (name == "pointmass" && args.size() == 1) {
      if (!(args[0] >= 0.0 && args[0] <= 1.0)) p.fail("pointmass location outside [0,1]");
      out = StepDistribution::point_mass(args[0]);
    } else if (name == "uniform" && args.size() == 2) {
      if (!(args[0] >= 0.0 && args[1] <= 1.0 && args[0] <= args[1])) p.fail("uniform bounds");
      out = StepDistribution::uniform_grid(args[0], args[1], 101);
    } else if (name == "uniform_grid" && args.size() == 3) {
      if (!(args[0] >= 0.0 && args[1] <= 1.0 && args[0] <= args[1] && args[2] >= 1.0)) {
        p.fail("uniform_grid parameters");
      }
      out = StepDistribution::uniform_grid(args[0], args[1], static_cast<std::size_t>(args[2]));
    } else {
      p.fail("unknown family '" + name + "' or wrong argument count");
    }
  }
  p.finish();
  if (!out.is_proper()) p.fail("final cumulative probability must be 1");
  return out;
}

/// Same grammar; uniform(lo, hi) is the continuous uniform law.
inline ValueDistribution parse_value_distribution(const std::string& text) {
  detail::LiteralParser p(text);
  if (!p.at('[')) {
    const std::string name = p.identifier();
    if (name == "uniform") {
      const auto args = p.call_args();
      p.finish();
      if (args.size() != 2 || !(args[0] >= 0.0 && args[1] <= 1.0 && args[0] <= args[1])) {
        p.fail("uniform(lo, hi) needs 0 <= lo <= hi <= 1");
      }
      return ValueDistribution::uniform(args[0], args[1]);
    }
  }
  return ValueDistribution::atoms(parse_step_distribution(text));
}

}  // namespace autobid

#endif  // AUTOBID_DIST_HPP
