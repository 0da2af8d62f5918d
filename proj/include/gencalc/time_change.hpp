#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gencalc/quadrature.hpp"

namespace gencalc {

/// tau(t) = integral_a^t rate(s) ds tabulated on an adaptively refined grid.
/// The grid is refined until the cubic Hermite interpolant (rate values as
/// slopes, linear where the rate is singular) matches the quadrature at every
/// cell midpoint to 1e-10 times the total variation.
class TimeChange {
 public:
  TimeChange(ScalarFn rate, double a, double b, std::vector<double> breakpoints = {},
             int n_grid = 64);

  double a() const { return t_.front(); }
  double b() const { return t_.back(); }
  std::span<const double> t_grid() const { return t_; }
  std::span<const double> tau_grid() const { return tau_; }

  /// max over [a, b] of tau (the right end of the image interval [0, c]).
  double c() const { return c_; }
  double total() const { return tau_.back(); }
  /// The rate keeps one sign at every sampled interior point.
  bool monotone() const { return monotone_; }
  bool increasing() const { return increasing_; }

  double rate(double t) const { return rate_(t); }

  /// Nearest node plus a local quadrature.
  double tau_at(double t) const;
  /// Hermite interpolant of the tabulated values.
  double interpolate(double t) const;
  /// Inverse of a monotone time change, polished against tau_at.
  double t_at(double tau) const;
  /// Inverse of the interpolant only; cheap enough for ODE right-hand sides.
  double t_at_fast(double tau) const;

  std::span<const double> breakpoints() const { return breakpoints_; }

 private:
  struct Cell {
    double slope_left;   // NaN when the rate is unusable as a slope there
    double slope_right;
  };

  double cell_value(std::size_t k, double t) const;
  double cell_slope(std::size_t k, double t) const;
  std::size_t cell_of_t(double t) const;
  std::size_t cell_of_tau(double tau) const;
  double invert_in_cell(std::size_t k, double tau) const;
  void refine(double t0, double t1, double tau0, double delta, double tol, int depth);

  ScalarFn rate_;
  std::vector<double> breakpoints_;
  std::vector<double> t_;
  std::vector<double> tau_;
  std::vector<Cell> cells_;
  double c_ = 0.0;
  bool monotone_ = false;
  bool increasing_ = false;
};

}  // namespace gencalc
