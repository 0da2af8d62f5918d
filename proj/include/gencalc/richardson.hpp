#pragma once

#include <functional>

namespace gencalc {

struct Extrapolation {
  double value = 0.0;
  double error = 0.0;
  bool finite = false;
};

/// Extrapolates lim_{h->0} F(h) from the samples F(h0 * 2^-k), k = 0..depth,
/// assuming F(h) = L + c1 h^p + c2 h^(p+s) + ... (Neville tableau).
/// The error estimate is the larger of the last two diagonal corrections.
Extrapolation richardson(const std::function<double(double)>& F, double h0,
                         int depth, int power, int power_step);

enum class Stencil { central, forward, backward };

/// Classical derivative of f at t by an extrapolated difference quotient.
Extrapolation differentiate(const std::function<double(double)>& f, double t,
                            double h0, Stencil stencil = Stencil::central,
                            int depth = 5);

}  // namespace gencalc
