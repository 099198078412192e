#pragma once

#include <cmath>
#include <limits>

#include "lipcert/errors.hpp"

namespace lipcert {

// Non-degenerate closed interval [a, b]. All intervals in this library are
// non-degenerate; degenerate input is rejected at construction.
struct Interval {
  double a;
  double b;

  Interval(double a_, double b_) : a(a_), b(b_) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
      throw SpecError("Interval requires finite endpoints with a < b");
  }

  double length() const { return b - a; }
  double midpoint() const { return a + 0.5 * (b - a); }
  bool contains(double x) const { return x >= a && x <= b; }
  bool contains(const Interval& other) const {
    return other.a >= a && other.b <= b;
  }

  friend bool operator==(const Interval& l, const Interval& r) {
    return l.a == r.a && l.b == r.b;
  }
};

// Evaluation domain of a catalog function; endpoints may be infinite.
struct Domain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

}  // namespace lipcert
