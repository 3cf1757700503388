#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <ostream>

#include "cshmm/errors.hpp"

namespace cshmm {

// Closed interval [lo, hi] enclosing a real scalar. Arithmetic is plain
// double arithmetic without directed rounding; code that accumulates long
// sums adds an explicit floating-point slack (see series.hpp). All reported
// tolerances in this library sit far above rounding scale.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;

  Enclosure() = default;
  explicit Enclosure(double v) : lo(v), hi(v) {}
  Enclosure(double l, double h) : lo(l), hi(h) { assert(lo <= hi); }

  static Enclosure exact(double v) { return Enclosure(v); }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Enclosure& e) const { return lo <= e.lo && e.hi <= hi; }

  // Distance from v to the interval (0 if contained).
  double distance(double v) const {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return 0.0;
  }

  Enclosure widened(double eps) const { return Enclosure(lo - eps, hi + eps); }

  Enclosure operator+(const Enclosure& o) const {
    return Enclosure(lo + o.lo, hi + o.hi);
  }
  Enclosure operator-(const Enclosure& o) const {
    return Enclosure(lo - o.hi, hi - o.lo);
  }
  Enclosure operator*(const Enclosure& o) const {
    double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return Enclosure(std::min(std::min(a, b), std::min(c, d)),
                     std::max(std::max(a, b), std::max(c, d)));
  }
  Enclosure operator/(const Enclosure& o) const {
    if (o.lo <= 0.0 && o.hi >= 0.0)
      throw Error("interval division by an interval containing zero");
    return *this * Enclosure(1.0 / o.hi, 1.0 / o.lo);
  }

  Enclosure operator+(double v) const { return Enclosure(lo + v, hi + v); }
  Enclosure operator-(double v) const { return Enclosure(lo - v, hi - v); }
  Enclosure operator*(double v) const {
    return v >= 0 ? Enclosure(lo * v, hi * v) : Enclosure(hi * v, lo * v);
  }

  Enclosure& operator+=(const Enclosure& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
  }
};

inline Enclosure operator*(double v, const Enclosure& e) { return e * v; }

inline Enclosure intersect(const Enclosure& a, const Enclosure& b) {
  double lo = std::max(a.lo, b.lo);
  double hi = std::min(a.hi, b.hi);
  // Disjoint enclosures of one quantity mean an accounting bug somewhere;
  // keep the tight edge and flag via assert in debug builds.
  assert(lo <= hi + 1e-9);
  if (lo > hi) return Enclosure(std::min(lo, hi), std::max(lo, hi));
  return Enclosure(lo, hi);
}

inline Enclosure hull(const Enclosure& a, const Enclosure& b) {
  return Enclosure(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

inline std::ostream& operator<<(std::ostream& os, const Enclosure& e) {
  return os << "[" << e.lo << ", " << e.hi << "]";
}

}  // namespace cshmm
