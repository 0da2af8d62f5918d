#include "gencalc/richardson.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gencalc {

Extrapolation richardson(const std::function<double(double)>& F, double h0,
                         int depth, int power, int power_step) {
  const int n = depth + 1;
  std::vector<std::vector<double>> table(n, std::vector<double>(n, 0.0));
  double h = h0;
  for (int k = 0; k < n; ++k, h *= 0.5) {
    table[k][0] = F(h);
    for (int j = 1; j <= k; ++j) {
      const double factor = std::ldexp(1.0, power + (j - 1) * power_step) - 1.0;
      table[k][j] = table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / factor;
    }
  }

  Extrapolation out;
  out.value = table[depth][depth];
  if (depth == 0) {
    out.error = 0.0;
  } else {
    out.error = std::max(std::abs(table[depth][depth] - table[depth][depth - 1]),
                         std::abs(table[depth][depth] - table[depth - 1][depth - 1]));
  }
  out.finite = std::isfinite(out.value) && std::isfinite(out.error);
  return out;
}

Extrapolation differentiate(const std::function<double(double)>& f, double t,
                            double h0, Stencil stencil, int depth) {
  switch (stencil) {
    case Stencil::central:
      return richardson(
          [&](double h) { return (f(t + h) - f(t - h)) / (2.0 * h); }, h0, depth, 2, 2);
    case Stencil::forward: {
      const double ft = f(t);
      return richardson([&](double h) { return (f(t + h) - ft) / h; }, h0, depth, 1, 1);
    }
    case Stencil::backward: {
      const double ft = f(t);
      return richardson([&](double h) { return (ft - f(t - h)) / h; }, h0, depth, 1, 1);
    }
  }
  return {};
}

}  // namespace gencalc
