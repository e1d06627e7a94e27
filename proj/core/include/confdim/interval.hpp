#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace confdim {

// Closed interval [lo, hi] with outward-rounded arithmetic. Every operation
// returns an enclosure of the exact real result.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double l, double h) : lo(l), hi(h) {}
  static constexpr Interval point(double x) { return {x, x}; }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
};

inline double round_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double round_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline Interval widen(const Interval& a) { return {round_down(a.lo), round_up(a.hi)}; }

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval operator+(const Interval& a, double b) { return widen({a.lo + b, a.hi + b}); }

inline Interval operator*(const Interval& a, double s) {
  return s >= 0 ? widen({a.lo * s, a.hi * s}) : widen({a.hi * s, a.lo * s});
}

// Product of two nonnegative intervals (derivative magnitudes).
inline Interval mul_nonneg(const Interval& a, const Interval& b) {
  return {round_down(a.lo * b.lo), round_up(a.hi * b.hi)};
}

// 1 / a for an interval strictly inside (0, inf).
inline Interval reciprocal_pos(const Interval& a) {
  return {round_down(1.0 / a.hi), round_up(1.0 / a.lo)};
}

}  // namespace confdim
