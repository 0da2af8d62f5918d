#include "gencalc/function.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gencalc {

RealFunction RealFunction::constant_fn(double c) {
  RealFunction f;
  f.eval = [c](double) { return c; };
  f.derivative = [](double) { return 0.0; };
  f.constant = c;
  f.label = c == 0.0 ? "zero" : (c == 1.0 ? "one" : "const");
  return f;
}

RealFunction RealFunction::from(std::function<double(double)> f,
                                std::function<double(double)> df, std::string label) {
  RealFunction out;
  out.eval = std::move(f);
  out.derivative = std::move(df);
  out.label = std::move(label);
  return out;
}

RealFunction operator+(const RealFunction& f, const RealFunction& g) {
  RealFunction out;
  out.eval = [f, g](double t) { return f(t) + g(t); };
  if (f.has_derivative() && g.has_derivative()) {
    out.derivative = [f, g](double t) { return f.derivative(t) + g.derivative(t); };
  }
  if (f.constant && g.constant) out.constant = *f.constant + *g.constant;
  out.label = "(" + f.label + "+" + g.label + ")";
  return out;
}

RealFunction operator*(const RealFunction& f, const RealFunction& g) {
  RealFunction out;
  out.eval = [f, g](double t) { return f(t) * g(t); };
  if (f.has_derivative() && g.has_derivative()) {
    out.derivative = [f, g](double t) {
      return f.derivative(t) * g(t) + f(t) * g.derivative(t);
    };
  }
  if (f.constant && g.constant) out.constant = *f.constant * *g.constant;
  out.label = "(" + f.label + "*" + g.label + ")";
  return out;
}

RealFunction operator/(const RealFunction& f, const RealFunction& g) {
  RealFunction out;
  out.eval = [f, g](double t) { return f(t) / g(t); };
  if (f.has_derivative() && g.has_derivative()) {
    out.derivative = [f, g](double t) {
      const double gt = g(t);
      return (f.derivative(t) * gt - f(t) * g.derivative(t)) / (gt * gt);
    };
  }
  if (f.constant && g.constant) out.constant = *f.constant / *g.constant;
  out.label = "(" + f.label + "/" + g.label + ")";
  return out;
}

RealFunction operator*(double c, const RealFunction& f) {
  return RealFunction::constant_fn(c) * f;
}

RealFunction compose(const RealFunction& g, const RealFunction& f) {
  RealFunction out;
  out.eval = [f, g](double t) { return g(f(t)); };
  if (f.has_derivative() && g.has_derivative()) {
    out.derivative = [f, g](double t) { return g.derivative(f(t)) * f.derivative(t); };
  }
  if (f.constant) out.constant = g(*f.constant);
  out.label = g.label + "(" + f.label + ")";
  return out;
}

RealFunction builtin_function(std::string_view name) {
  using F = std::function<double(double)>;
  auto make = [&](F f, F df) { return RealFunction::from(std::move(f), std::move(df), std::string(name)); };

  if (name == "zero") return RealFunction::constant_fn(0.0);
  if (name == "one") return RealFunction::constant_fn(1.0);
  if (name == "t") return make([](double t) { return t; }, [](double) { return 1.0; });
  if (name == "t2") return make([](double t) { return t * t; }, [](double t) { return 2.0 * t; });
  if (name == "t3") {
    return make([](double t) { return t * t * t; }, [](double t) { return 3.0 * t * t; });
  }
  if (name == "sin") {
    return make([](double t) { return std::sin(t); }, [](double t) { return std::cos(t); });
  }
  if (name == "cos") {
    return make([](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); });
  }
  if (name == "exp") {
    return make([](double t) { return std::exp(t); }, [](double t) { return std::exp(t); });
  }
  // Non-smooth members carry no analytic derivative.
  if (name == "abs") return make([](double t) { return std::abs(t); }, {});
  if (name == "sgn") return make([](double t) { return t < 0.0 ? -1.0 : 1.0; }, {});
  if (name == "sgn_neg") return make([](double t) { return t > 0.0 ? 1.0 : -1.0; }, {});
  throw std::invalid_argument("unknown function '" + std::string(name) + "'");
}

std::vector<std::string> builtin_function_names() {
  return {"zero", "one", "t", "t2", "t3", "sin", "cos", "exp", "abs", "sgn", "sgn_neg"};
}

RealFunction step_function(double at, double left, double right) {
  RealFunction out;
  out.eval = [=](double t) { return t < at ? left : right; };
  out.label = "step";
  return out;
}

}  // namespace gencalc
