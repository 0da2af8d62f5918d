#pragma once

#include <cmath>
#include <limits>

namespace gencalc {

/// A real interval whose ends may be open or closed. Infinite ends are open.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  bool hi_open = true;

  static Interval closed(double a, double b) { return {a, b, false, false}; }
  static Interval open(double a, double b) { return {a, b, true, true}; }
  static Interval left_open(double a, double b) { return {a, b, true, false}; }
  static Interval right_open(double a, double b) { return {a, b, false, true}; }
  static Interval real_line() { return {}; }

  bool contains(double t) const {
    const bool above = lo_open ? t > lo : t >= lo;
    const bool below = hi_open ? t < hi : t <= hi;
    return above && below;
  }

  double length() const { return hi - lo; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

}  // namespace gencalc
