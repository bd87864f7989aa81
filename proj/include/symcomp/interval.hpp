#pragma once

namespace symcomp {

/// Closed real interval.
struct Interval {
  double lo = 0, hi = 0;
  double width() const { return hi - lo; }
  bool contains(double p) const { return p >= lo && p <= hi; }
  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

struct ContinuousDomain {
  double lower = 0, upper = 0;
};

} // namespace symcomp
