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

// Allocation-payment geometry of a first-price auction against a step
// distribution F.
//
// Bidding b pays x = b * F(b) in expectation and wins with probability
// y = F(b). Randomizing over bids reaches every point under the upper concave
// hull of these (x, y) pairs; the hull is the reward-optimal frontier. The
// "convexified" distribution F_conv is the law whose own (x, y) curve is that
// hull, so one deterministic bid under F_conv stands in for a two-bid lottery
// under F.

#ifndef AUTOBID_ENVELOPE_HPP
#define AUTOBID_ENVELOPE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "autobid/dist.hpp"

namespace autobid {

/// One (payment, win probability) pair and the bid under F that produces it.
struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  double bid = 0.0;
};

struct AllocationPaymentCurve {
  std::vector<CurvePoint> points;
};

/// Bid b1 with probability p1, b2 with probability p2.
struct RandomizedBid {
  double b1 = 0.0;
  double p1 = 1.0;
  double b2 = 0.0;
  double p2 = 0.0;

  static RandomizedBid deterministic(double b) { return {b, 1.0, b, 0.0}; }
  bool is_deterministic() const { return p2 == 0.0; }

  double sample(Rng& rng) const {
    if (p2 == 0.0) return b1;
    return rng.uniform() < p1 ? b1 : b2;
  }

  friend bool operator==(const RandomizedBid&, const RandomizedBid&) = default;
};

struct LotteryOutcome {
  double win_probability = 0.0;
  double payment = 0.0;
};

/// Expected win probability and first-price payment of a lottery under dist.
inline LotteryOutcome evaluate_lottery(const RandomizedBid& lottery, const StepDistribution& dist) {
  const double f1 = dist.cdf(lottery.b1);
  LotteryOutcome out{lottery.p1 * f1, lottery.p1 * lottery.b1 * f1};
  if (lottery.p2 != 0.0) {
    const double f2 = dist.cdf(lottery.b2);
    out.win_probability += lottery.p2 * f2;
    out.payment += lottery.p2 * lottery.b2 * f2;
  }
  return out;
}

/// One point per support bid with F(b) > 0. Bids with F(b) = 0 all map to the
/// origin, which the envelope treats as its anchor.
inline AllocationPaymentCurve build_curve(const StepDistribution& dist) {
  if (!dist.is_proper()) throw std::invalid_argument("build_curve: final CDF value must be 1");
  AllocationPaymentCurve curve;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double b = dist.support()[i];
    const double y = dist.cdf_values()[i];
    if (y <= 0.0) continue;
    curve.points.push_back({b * y, y, b});
  }
  return curve;
}

/// Upper concave hull of an allocation-payment curve, in the three-part form
/// used by F_conv: 0 below x0 = b0 * F(b0), the hull on [x0, x'], and 1 from
/// the saturation payment x' on.
class ConcaveEnvelope {
 public:
  explicit ConcaveEnvelope(const AllocationPaymentCurve& curve) {
    if (curve.points.empty()) throw std::invalid_argument("ConcaveEnvelope: empty curve");
    // Cross products below this are treated as collinear.
    constexpr double kCollinear = 1e-13;
    for (const CurvePoint& p : curve.points) {
      while (hull_.size() >= 2) {
        const CurvePoint& a = hull_[hull_.size() - 2];
        const CurvePoint& b = hull_.back();
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (cross < -kCollinear) break;
        hull_.pop_back();
      }
      hull_.push_back(p);
      // Points beyond the first full-probability point never lie on the
      // increasing part of the hull.
      if (p.y >= 1.0) break;
    }
    if (hull_.back().y < 1.0) throw std::invalid_argument("ConcaveEnvelope: curve never reaches y = 1");
  }

  /// Hull vertices from (x0, y0) to (x', 1), each carrying its source bid.
  std::span<const CurvePoint> breakpoints() const { return hull_; }

  double b0() const { return hull_.front().bid; }
  double y0() const { return hull_.front().y; }
  double x0() const { return hull_.front().x; }
  double saturation_x() const { return hull_.back().x; }
  std::size_t segment_count() const { return hull_.size() - 1; }

  double slope(std::size_t j) const {
    return (hull_[j + 1].y - hull_[j].y) / (hull_[j + 1].x - hull_[j].x);
  }

  /// G_conv(x). Throws std::domain_error for x outside [0,1].
  double gconv(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("gconv: payment outside [0,1]");
    if (x < x0()) return 0.0;
    if (x >= saturation_x()) return 1.0;
    const std::size_t j = segment_containing(x);
    const CurvePoint& a = hull_[j];
    const CurvePoint& b = hull_[j + 1];
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
  }

  /// The full concave hull including the segment from the origin to (x0, y0).
  /// This is the frontier reachable by mixing a losing bid with b0, which
  /// G_conv leaves out because no single F_conv bid realizes it.
  double concave_hull_value(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("concave_hull_value: payment outside [0,1]");
    if (x < x0()) return y0() * x / x0();
    return gconv(x);
  }

  /// F_conv(b): 0 below b0, 1 from x' on, and in between the y solving
  /// b * y = x on the hull segment y = s * x + c, i.e. y = c / (1 - s * b).
  double fconv(double b) const {
    if (!(b >= 0.0 && b <= 1.0)) throw std::domain_error("fconv: bid outside [0,1]");
    if (b < b0()) return 0.0;
    if (b >= hull_.back().bid) return 1.0;
    // Source bids increase along the hull, so they index the segments.
    auto it = std::upper_bound(hull_.begin(), hull_.end(), b,
                               [](double v, const CurvePoint& p) { return v < p.bid; });
    const std::size_t j = static_cast<std::size_t>(it - hull_.begin()) - 1;
    const CurvePoint& lo = hull_[j];
    const CurvePoint& hi = hull_[j + 1];
    if (b == lo.bid) return lo.y;
    const double s = slope(j);
    const double c = lo.y - s * lo.x;
    const double denom = 1.0 - s * b;
    if (denom <= 0.0) return hi.y;
    return std::clamp(c / denom, lo.y, hi.y);
  }

  /// Index j of the segment [x_j, x_{j+1}) containing x; requires x0 <= x < x'.
  std::size_t segment_containing(double x) const {
    auto it = std::upper_bound(hull_.begin(), hull_.end(), x,
                               [](double v, const CurvePoint& p) { return v < p.x; });
    return static_cast<std::size_t>(it - hull_.begin()) - 1;
  }

 private:
  std::vector<CurvePoint> hull_;
};

inline ConcaveEnvelope concave_envelope(const AllocationPaymentCurve& curve) { return ConcaveEnvelope(curve); }

inline ConcaveEnvelope envelope_of(const StepDistribution& dist) { return ConcaveEnvelope(build_curve(dist)); }

/// Two-bid lottery under the source distribution whose expected payment is x
/// and whose win probability is gconv(x). Below x0 the lottery is a losing
/// bid (payment and win probability both 0); at or past x' it is a
/// deterministic bid that always wins.
inline RandomizedBid decompose_bid(const ConcaveEnvelope& env, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("decompose_bid: payment outside [0,1]");
  if (x < env.x0()) return RandomizedBid::deterministic(0.0);
  const auto pts = env.breakpoints();
  if (x >= env.saturation_x()) {
    return RandomizedBid::deterministic(x == env.saturation_x() ? pts.back().bid : x);
  }
  const std::size_t j = env.segment_containing(x);
  const CurvePoint& lo = pts[j];
  const CurvePoint& hi = pts[j + 1];
  if (x == lo.x) return RandomizedBid::deterministic(lo.bid);
  const double p2 = (x - lo.x) / (hi.x - lo.x);
  return {lo.bid, 1.0 - p2, hi.bid, p2};
}

}  // namespace autobid

#endif  // AUTOBID_ENVELOPE_HPP
