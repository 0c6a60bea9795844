#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>

namespace cantorgap {

/// Closed real enclosure [lo, hi]. Arithmetic rounds every endpoint one ulp
/// outward, which is enough to keep enclosures valid for the short
/// expression chains used here.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  static constexpr Interval point(double x) { return {x, x}; }
  static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool is_point() const { return lo == hi; }
  bool valid() const { return lo <= hi && !std::isnan(lo) && !std::isnan(hi); }
};

double round_down(double x);
double round_up(double x);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Throws std::domain_error when b contains zero.
Interval operator/(const Interval& a, const Interval& b);
Interval operator*(double s, const Interval& a);

Interval sqrt(const Interval& a);
Interval square(const Interval& a);
Interval pow(const Interval& a, unsigned n);

// Elementwise min/max: encloses min(x, y) for x in a, y in b.
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);

// Returns the intersection; lo > hi when disjoint (check with valid()).
Interval intersect(const Interval& a, const Interval& b);

bool operator==(const Interval& a, const Interval& b);
std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace cantorgap
