#include "gencalc/time_change.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "gencalc/error.hpp"

namespace gencalc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxDepth = 200;

// A slope is usable when it is finite and consistent with the cell increment.
double usable_slope(double slope, double width, double delta) {
  if (!std::isfinite(slope)) return kNaN;
  if (std::abs(slope) * width > 20.0 * std::abs(delta) + 1e-300) return kNaN;
  return slope;
}

// Interpolant on a cell of width h through (0, 0) and (h, delta); s in [0, h].
double shape(double s, double h, double delta, double d0, double d1) {
  const double x = s / h;
  const bool has0 = !std::isnan(d0);
  const bool has1 = !std::isnan(d1);
  if (has0 && has1) {
    const double h00 = 0.0, h10 = x * (1 - x) * (1 - x), h01 = x * x * (3 - 2 * x),
                 h11 = x * x * (x - 1);
    return h00 + h10 * h * d0 + h01 * delta + h11 * h * d1;
  }
  if (has0) return d0 * s + (delta - d0 * h) * x * x;
  if (has1) {
    const double r = 1 - x;
    return delta - d1 * (h - s) - (delta - d1 * h) * r * r;
  }
  return delta * x;
}

double shape_slope(double s, double h, double delta, double d0, double d1) {
  const double x = s / h;
  const bool has0 = !std::isnan(d0);
  const bool has1 = !std::isnan(d1);
  if (has0 && has1) {
    return d0 * (1 - x) * (1 - 3 * x) + 6 * x * (1 - x) * delta / h + d1 * x * (3 * x - 2);
  }
  if (has0) return d0 + 2 * (delta - d0 * h) * x / h;
  if (has1) return d1 + 2 * (delta - d1 * h) * (1 - x) / h;
  return delta / h;
}

}  // namespace

TimeChange::TimeChange(ScalarFn rate, double a, double b, std::vector<double> breakpoints,
                       int n_grid)
    : rate_(std::move(rate)), breakpoints_(std::move(breakpoints)) {
  if (!(a < b)) throw std::invalid_argument("time change needs a < b");
  if (n_grid < 1) throw std::invalid_argument("time change needs n_grid >= 1");

  std::vector<double> kinks;
  for (double p : breakpoints_) {
    if (p > a && p < b) kinks.push_back(p);
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  breakpoints_ = kinks;

  const auto whole = integrate(rate_, a, b, kinks);
  if (!whole.converged) {
    throw NumericalError("time change integral diverges on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]");
  }
  const double tol = 1e-10 * std::max(1.0, whole.l1);

  std::vector<double> cuts{a, b};
  cuts.insert(cuts.end(), kinks.begin(), kinks.end());
  for (int i = 1; i < n_grid; ++i) cuts.push_back(a + (b - a) * i / n_grid);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  t_.push_back(a);
  tau_.push_back(0.0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto piece = integrate(rate_, cuts[i], cuts[i + 1]);
    if (!piece.converged) throw NumericalError("time change integral diverges");
    refine(cuts[i], cuts[i + 1], tau_.back(), piece.value, tol, 0);
  }

  c_ = *std::max_element(tau_.begin(), tau_.end());

  bool all_pos = true;
  bool all_neg = true;
  for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
    for (double frac : {0.25, 0.5, 0.75}) {
      const double r = rate_(t_[k] + frac * (t_[k + 1] - t_[k]));
      if (!(r > 0.0)) all_pos = false;
      if (!(r < 0.0)) all_neg = false;
    }
  }
  monotone_ = all_pos || all_neg;
  increasing_ = all_pos;
}

void TimeChange::refine(double t0, double t1, double tau0, double delta, double tol,
                        int depth) {
  const double h = t1 - t0;
  const double d0 = usable_slope(rate_(std::nextafter(t0, t1)), h, delta);
  const double d1 = usable_slope(rate_(std::nextafter(t1, t0)), h, delta);
  const double mid = t0 + 0.5 * h;

  bool accept = depth >= kMaxDepth || mid <= t0 || mid >= t1;
  double left = 0.0;
  double right = 0.0;
  if (!accept) {
    const auto l = integrate(rate_, t0, mid);
    const auto r = integrate(rate_, mid, t1);
    if (!l.converged || !r.converged) throw NumericalError("time change integral diverges");
    left = l.value;
    right = r.value;
    const double predicted = shape(0.5 * h, h, delta, d0, d1);
    accept = std::abs(predicted - left) <= tol && std::abs(left + right - delta) <= tol;
  }
  if (accept) {
    cells_.push_back({d0, d1});
    t_.push_back(t1);
    tau_.push_back(tau0 + delta);
    return;
  }
  refine(t0, mid, tau0, left, tol, depth + 1);
  refine(mid, t1, tau_.back(), right, tol, depth + 1);
}

std::size_t TimeChange::cell_of_t(double t) const {
  if (t <= t_.front()) return 0;
  if (t >= t_.back()) return cells_.size() - 1;
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  return static_cast<std::size_t>(it - t_.begin()) - 1;
}

double TimeChange::cell_value(std::size_t k, double t) const {
  const double h = t_[k + 1] - t_[k];
  return tau_[k] + shape(t - t_[k], h, tau_[k + 1] - tau_[k], cells_[k].slope_left,
                         cells_[k].slope_right);
}

double TimeChange::cell_slope(std::size_t k, double t) const {
  const double h = t_[k + 1] - t_[k];
  return shape_slope(t - t_[k], h, tau_[k + 1] - tau_[k], cells_[k].slope_left,
                     cells_[k].slope_right);
}

double TimeChange::interpolate(double t) const {
  if (t < a() || t > b()) throw std::out_of_range("t outside the time-change interval");
  return cell_value(cell_of_t(t), t);
}

double TimeChange::tau_at(double t) const {
  if (t < a() || t > b()) throw std::out_of_range("t outside the time-change interval");
  const std::size_t k = cell_of_t(t);
  if (t == t_[k]) return tau_[k];
  if (t == t_[k + 1]) return tau_[k + 1];
  if (t - t_[k] <= t_[k + 1] - t) return tau_[k] + integrate(rate_, t_[k], t).value;
  return tau_[k + 1] - integrate(rate_, t, t_[k + 1]).value;
}

std::size_t TimeChange::cell_of_tau(double tau) const {
  if (increasing_) {
    if (tau <= tau_.front()) return 0;
    if (tau >= tau_.back()) return cells_.size() - 1;
    const auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
    return static_cast<std::size_t>(it - tau_.begin()) - 1;
  }
  if (tau >= tau_.front()) return 0;
  if (tau <= tau_.back()) return cells_.size() - 1;
  const auto it = std::upper_bound(tau_.begin(), tau_.end(), tau, std::greater<>());
  return static_cast<std::size_t>(it - tau_.begin()) - 1;
}

double TimeChange::invert_in_cell(std::size_t k, double tau) const {
  double lo = t_[k];
  double hi = t_[k + 1];
  const bool up = tau_[k + 1] >= tau_[k];
  const double span = std::abs(tau_[k + 1] - tau_[k]);
  double t = span > 0.0 ? lo + (hi - lo) * std::abs(tau - tau_[k]) / span : 0.5 * (lo + hi);
  t = std::clamp(t, lo, hi);
  // Newton on the interpolant, falling back to bisection when a step leaves
  // the bracket.
  for (int it = 0; it < 100; ++it) {
    const double r = cell_value(k, t) - tau;
    if (r == 0.0) return t;
    if ((r < 0.0) == up) lo = t;
    else hi = t;
    const double slope = cell_slope(k, t);
    double next = t - r / slope;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (next == t || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      return next;
    }
    t = next;
  }
  return t;
}

double TimeChange::t_at_fast(double tau) const {
  if (!monotone_) throw std::invalid_argument("time change is not invertible");
  const std::size_t k = cell_of_tau(tau);
  return invert_in_cell(k, tau);
}

double TimeChange::t_at(double tau) const {
  if (!monotone_) throw std::invalid_argument("time change is not invertible");
  const std::size_t k = cell_of_tau(tau);
  if (tau == tau_[k]) return t_[k];
  if (tau == tau_[k + 1]) return t_[k + 1];
  double t = invert_in_cell(k, tau);
  double resid = tau_at(t) - tau;
  for (int it = 0; it < 4 && resid != 0.0; ++it) {
    const double r = rate_(t);
    if (!std::isfinite(r) || r == 0.0) break;
    const double next = std::clamp(t - resid / r, t_[k], t_[k + 1]);
    const double next_resid = tau_at(next) - tau;
    if (!(std::abs(next_resid) < std::abs(resid))) break;
    t = next;
    resid = next_resid;
  }
  return t;
}

}  // namespace gencalc
