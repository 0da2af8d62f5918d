#include "gencalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace gencalc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

QuadratureResult finish(QuadratureResult r, const QuadratureOptions& opts) {
  r.converged = std::isfinite(r.value) && std::isfinite(r.error) &&
                r.error <= opts.accept_tol * std::max(r.l1, 1e-300);
  if (r.l1 == 0.0 && r.value == 0.0) r.converged = true;
  return r;
}

QuadratureResult piece(const ScalarFn& f, double a, double b,
                       const QuadratureOptions& opts) {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  // Mapping to [0, 1] keeps the error estimate meaningful on very short pieces.
  const double width = b - a;
  auto scaled = [&](double x) {
    double s = x < 0.5 ? a + width * x : b - width * (1.0 - x);
    if (s <= a) s = std::nextafter(a, b);
    if (s >= b) s = std::nextafter(b, a);
    return f(s);
  };
  QuadratureResult r;
  try {
    r.value = width * rule.integrate(scaled, 0.0, 1.0, opts.target_tol, &r.error, &r.l1);
    r.error *= width;
    r.l1 *= width;
  } catch (const std::exception&) {
    r.value = kNaN;
    r.error = kNaN;
    r.l1 = kNaN;
  }
  return r;
}

}  // namespace

QuadratureResult integrate(const ScalarFn& f, double a, double b,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& opts) {
  if (a == b) return finish({}, opts);
  if (a > b) {
    auto r = integrate(f, b, a, breakpoints, opts);
    r.value = -r.value;
    return r;
  }
  if (std::isinf(b)) {
    QuadratureResult head;
    if (std::isinf(a)) {
      auto left = integrate_to_infinity([&f](double s) { return f(-s); }, 0.0, opts);
      auto right = integrate_to_infinity(f, 0.0, opts);
      head.value = left.value + right.value;
      head.error = left.error + right.error;
      head.l1 = left.l1 + right.l1;
      return finish(head, opts);
    }
    return integrate_to_infinity(f, a, opts);
  }

  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto r = piece(f, cuts[i], cuts[i + 1], opts);
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
  }
  return finish(total, opts);
}

QuadratureResult integrate_to_infinity(const ScalarFn& f, double a,
                                       const QuadratureOptions& opts) {
  thread_local boost::math::quadrature::exp_sinh<double> rule;
  QuadratureResult r;
  try {
    r.value = rule.integrate([&](double s) { return f(a + s); }, opts.target_tol,
                             &r.error, &r.l1);
  } catch (const std::exception&) {
    r.value = kNaN;
    r.error = kNaN;
    r.l1 = kNaN;
  }
  return finish(r, opts);
}

}  // namespace gencalc
