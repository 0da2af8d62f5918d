#pragma once

#include <functional>
#include <span>

namespace gencalc {

using ScalarFn = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // level-to-level difference of the last refinement
  double l1 = 0.0;     // integral of |f|
  bool converged = false;
};

struct QuadratureOptions {
  double target_tol = 1e-12;  // refinement target (relative)
  double accept_tol = 1e-6;   // relative error that still counts as convergent
};

/// Integrates f over [a, b], splitting at every breakpoint strictly inside.
/// Endpoint singularities of each piece are handled by the double-exponential
/// rule, which never samples the endpoints themselves. a > b gives the
/// negated integral.
QuadratureResult integrate(const ScalarFn& f, double a, double b,
                           std::span<const double> breakpoints = {},
                           const QuadratureOptions& opts = {});

/// Integrates f over [a, inf).
QuadratureResult integrate_to_infinity(const ScalarFn& f, double a,
                                       const QuadratureOptions& opts = {});

}  // namespace gencalc
