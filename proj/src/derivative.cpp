#include "gencalc/derivative.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gencalc/error.hpp"
#include "gencalc/richardson.hpp"

namespace gencalc {

std::string_view method_name(Method m) { return m == Method::limit ? "limit" : "lift"; }

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::ok:
      return "ok";
    case Outcome::not_p_differentiable:
      return "not_p_differentiable";
    case Outcome::lift_inapplicable:
      return "lift_inapplicable";
  }
  return "unknown";
}

namespace {

double default_h0(double t) { return 1e-3 * std::max(1.0, std::abs(t)); }

// Largest step <= h0 for which p(t, sign*h) stays in the domain, if any.
std::optional<double> usable_step(const PMap& pm, double t, double sign, double h0) {
  double h = h0;
  for (int i = 0; i < 40; ++i, h *= 0.5) {
    if (pm.domain().contains(pm(t, sign * h))) return h;
  }
  return std::nullopt;
}

bool converged(const Extrapolation& e, double tol) {
  return e.finite && e.error <= tol * std::max(1.0, std::abs(e.value));
}

DerivativeResult limit_impl(const PMap& pm, const std::function<double(double)>& f, double t,
                            const LimitOptions& opts) {
  const double h0 = opts.h0.value_or(default_h0(t));
  const double ft = f(t);

  DerivativeResult out;
  out.method = Method::limit;
  std::array<std::optional<Extrapolation>, 2> sides;
  const std::array<double, 2> signs{1.0, -1.0};
  for (int s = 0; s < 2; ++s) {
    const auto h = usable_step(pm, t, signs[s], h0);
    if (!h) continue;
    sides[s] = richardson(
        [&, sign = signs[s]](double step) { return (f(pm(t, sign * step)) - ft) / (sign * step); },
        *h, opts.depth, 1, 1);
  }
  if (!sides[0] && !sides[1]) {
    throw std::invalid_argument("p(t,h) leaves the domain for both signs of h");
  }
  if (sides[0]) out.right = sides[0]->value;
  if (sides[1]) out.left = sides[1]->value;

  for (const auto& side : sides) {
    if (side && !converged(*side, opts.tol)) {
      out.outcome = Outcome::not_p_differentiable;
      out.value = std::numeric_limits<double>::quiet_NaN();
      out.estimated_error = std::numeric_limits<double>::infinity();
      return out;
    }
  }

  if (sides[0] && sides[1]) {
    const double spread = std::abs(sides[0]->value - sides[1]->value);
    const double mean = 0.5 * (sides[0]->value + sides[1]->value);
    if (spread > opts.tol * std::max(1.0, std::abs(mean))) {
      out.outcome = Outcome::not_p_differentiable;
      out.value = std::numeric_limits<double>::quiet_NaN();
      out.estimated_error = spread;
      return out;
    }
    out.value = mean;
    out.estimated_error = spread;
  } else {
    const auto& side = sides[0] ? *sides[0] : *sides[1];
    out.value = side.value;
    out.estimated_error = side.error;
  }
  return out;
}

}  // namespace

DerivativeResult gd_limit(const PMap& pm, const RealFunction& f, double t,
                          const LimitOptions& opts) {
  return limit_impl(pm, f.eval, t, opts);
}

DerivativeResult classical_derivative(const RealFunction& f, double t, const LimitOptions& opts) {
  static const PMap classical = make_builtin(PMapFamily::classical, {}, Interval::real_line());
  return limit_impl(classical, f.eval, t, opts);
}

DerivativeResult gd_lift(const PMap& pm, const RealFunction& f, double t,
                         const LimitOptions& opts) {
  DerivativeResult out;
  out.method = Method::lift;

  double fprime = 0.0;
  double fprime_err = 0.0;
  if (f.has_derivative()) {
    fprime = f.derivative(t);
  } else {
    const auto d = classical_derivative(f, t, opts);
    if (!d.ok()) {
      out.outcome = Outcome::lift_inapplicable;
      out.value = std::numeric_limits<double>::quiet_NaN();
      out.estimated_error = std::numeric_limits<double>::infinity();
      return out;
    }
    fprime = d.value;
    fprime_err = d.estimated_error;
  }
  if (!std::isfinite(fprime)) {
    out.outcome = Outcome::lift_inapplicable;
    out.value = std::numeric_limits<double>::quiet_NaN();
    out.estimated_error = std::numeric_limits<double>::infinity();
    return out;
  }
  const double ph = ph_at_zero(pm, t);
  out.value = ph * fprime;
  out.estimated_error = std::abs(ph) * fprime_err;
  return out;
}

double gd_second(const PMap& pm, const RealFunction& f, double t) {
  auto fprime = [&f](double s) {
    if (f.has_derivative()) return f.derivative(s);
    const auto d = classical_derivative(f, s);
    if (!d.ok()) throw NumericalError("f is not differentiable near t");
    return d.value;
  };
  auto inner = [&](double s) { return ph_at_zero(pm, s) * fprime(s); };

  double h0 = 1e-2 * std::max(1.0, std::abs(t));
  for (double x : pm.singular_points()) {
    const double gap = std::abs(t - x);
    if (gap > 0.0) h0 = std::min(h0, 0.5 * gap);
  }
  const auto& d = pm.domain();
  Stencil stencil = Stencil::central;
  if (std::isfinite(d.lo)) {
    if (t - d.lo > 0.0) h0 = std::min(h0, 0.5 * (t - d.lo));
    else stencil = Stencil::forward;
  }
  if (std::isfinite(d.hi)) {
    if (d.hi - t > 0.0) h0 = std::min(h0, 0.5 * (d.hi - t));
    else stencil = Stencil::backward;
  }

  const auto outer = differentiate(inner, t, h0, stencil, 4);
  if (!outer.finite || outer.error > 1e-4 * std::max(1.0, std::abs(outer.value))) {
    throw NumericalError("p_h(.,0) f' is not differentiable at t=" + std::to_string(t));
  }
  return ph_at_zero(pm, t) * outer.value;
}

RuleResiduals rule_residuals(const PMap& pm, const RealFunction& f, const RealFunction& g,
                             double t, const HypothesisReport* hypotheses) {
  RuleResiduals out;

  HypothesisReport local;
  if (!hypotheses) {
    const std::array<double, 1> ts{t};
    const std::array<double, 7> eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    local = check_hypotheses(pm, ts, eps);
    hypotheses = &local;
  }
  const bool h1 = hypotheses->h1_plus.holds && hypotheses->h1_minus.holds &&
                  hypotheses->continuity_at_zero;
  const std::string h1_violation = "p fails H1+-/continuity at h=0";

  const auto df = gd_limit(pm, f, t);
  const auto dg = gd_limit(pm, g, t);
  if (!df.ok() || !dg.ok()) {
    const std::string v = !df.ok() ? "f is not p-differentiable at t" : "g is not p-differentiable at t";
    out.sum.violation = out.product.violation = out.quotient.violation = out.chain.violation = v;
    return out;
  }
  const double ft = f(t);
  const double gt = g(t);

  auto lhs = [&](const RealFunction& h, RuleCheck& check) -> std::optional<double> {
    const auto d = gd_limit(pm, h, t);
    if (!d.ok()) {
      check.violation = "combined function is not p-differentiable at t";
      return std::nullopt;
    }
    return d.value;
  };

  if (auto v = lhs(f + g, out.sum)) out.sum.residual = std::abs(*v - df.value - dg.value);

  if (!h1) {
    out.product.violation = out.quotient.violation = out.chain.violation = h1_violation;
    return out;
  }

  if (auto v = lhs(f * g, out.product)) {
    out.product.residual = std::abs(*v - (ft * dg.value + gt * df.value));
  }

  if (gt == 0.0) {
    out.quotient.violation = "g(t) = 0";
  } else if (auto v = lhs(f / g, out.quotient)) {
    out.quotient.residual = std::abs(*v - (gt * df.value - ft * dg.value) / (gt * gt));
  }

  const double probe = 1e-3 * std::max(1.0, std::abs(t));
  const bool non_constant = f(t + probe) != ft || f(t - probe) != ft;
  std::optional<double> gprime;
  if (g.has_derivative()) {
    gprime = g.derivative(ft);
  } else if (const auto d = classical_derivative(g, ft); d.ok()) {
    gprime = d.value;
  }
  if (!non_constant) {
    out.chain.violation = "f is constant near t";
  } else if (!gprime || !std::isfinite(*gprime)) {
    out.chain.violation = "g is not differentiable at f(t)";
  } else if (auto v = lhs(compose(g, f), out.chain)) {
    out.chain.residual = std::abs(*v - *gprime * df.value);
  }
  return out;
}

double wrong_chain_residual(const PMap& pm, const RealFunction& f, const RealFunction& g,
                            double t) {
  const auto lhs = gd_limit(pm, compose(g, f), t);
  const auto dg_at_f = gd_limit(pm, g, f(t));
  const auto df = gd_limit(pm, f, t);
  if (!lhs.ok() || !dg_at_f.ok() || !df.ok()) {
    throw NumericalError("wrong-chain comparison needs all three p-derivatives");
  }
  return std::abs(lhs.value - dg_at_f.value * df.value);
}

}  // namespace gencalc
