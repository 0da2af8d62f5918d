#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gencalc {

/// A real function of one variable with an optional analytic derivative.
struct RealFunction {
  std::function<double(double)> eval;
  std::function<double(double)> derivative;  // empty when not known
  std::optional<double> constant;            // set for known constants
  std::string label;

  double operator()(double t) const { return eval(t); }
  bool has_derivative() const { return static_cast<bool>(derivative); }

  static RealFunction constant_fn(double c);
  static RealFunction from(std::function<double(double)> f,
                           std::function<double(double)> df = {},
                           std::string label = "custom");
};

RealFunction operator+(const RealFunction& f, const RealFunction& g);
RealFunction operator*(const RealFunction& f, const RealFunction& g);
RealFunction operator/(const RealFunction& f, const RealFunction& g);
RealFunction operator*(double c, const RealFunction& f);

/// g o f
RealFunction compose(const RealFunction& g, const RealFunction& f);

/// Catalog used by the CLI and the fixture suite:
///   zero one t t2 t3 sin cos exp abs sgn sgn_neg
/// sgn takes the value 1 at 0, sgn_neg takes -1 there.
RealFunction builtin_function(std::string_view name);
std::vector<std::string> builtin_function_names();

/// left for t < at, right for t >= at.
RealFunction step_function(double at, double left, double right);

}  // namespace gencalc
