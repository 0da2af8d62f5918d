#pragma once

#include <optional>
#include <string>

#include "gencalc/function.hpp"
#include "gencalc/pmap.hpp"

namespace gencalc {

enum class Method { limit, lift };

enum class Outcome {
  ok,
  not_p_differentiable,  // one-sided limits diverge or disagree
  lift_inapplicable,     // f'(t) does not exist
};

std::string_view method_name(Method m);
std::string_view outcome_name(Outcome o);

struct DerivativeResult {
  Outcome outcome = Outcome::ok;
  double value = 0.0;
  Method method = Method::limit;
  double estimated_error = 0.0;
  std::optional<double> right;  // one-sided extrapolations (h > 0 / h < 0)
  std::optional<double> left;

  bool ok() const { return outcome == Outcome::ok; }
};

struct LimitOptions {
  int depth = 4;              // Richardson levels
  std::optional<double> h0;   // default 1e-3 * max(1, |t|)
  double tol = 1e-6;          // convergence and two-sided agreement, relative to max(1, |D|)
};

/// D_p f(t) straight from the difference quotient [f(p(t,h)) - f(t)] / h,
/// extrapolated separately for h > 0 and h < 0. At a closed end of the
/// p-map domain only the side that stays inside is used.
DerivativeResult gd_limit(const PMap& pm, const RealFunction& f, double t,
                          const LimitOptions& opts = {});

/// D_p f(t) = p_h(t, 0) f'(t). f' is the analytic derivative when supplied,
/// otherwise a two-sided extrapolated quotient; lift_inapplicable if that fails.
DerivativeResult gd_lift(const PMap& pm, const RealFunction& f, double t,
                         const LimitOptions& opts = {});

/// f'(t) by two one-sided extrapolations that must agree.
DerivativeResult classical_derivative(const RealFunction& f, double t,
                                      const LimitOptions& opts = {});

/// p_h(t,0) * (p_h(.,0) f')'(t). The outer derivative is an extrapolated
/// difference of the inner product. Throws NumericalError when the inner
/// product is not differentiable at t.
double gd_second(const PMap& pm, const RealFunction& f, double t);

struct RuleCheck {
  std::optional<double> residual;
  std::string violation;  // set when a precondition fails

  bool below(double tol) const { return residual && *residual < tol; }
};

struct RuleResiduals {
  RuleCheck sum;
  RuleCheck product;
  RuleCheck quotient;
  RuleCheck chain;
};

/// Sum/product/quotient/chain rules, both sides evaluated with gd_limit.
/// Hypotheses H1+- and continuity are probed at t unless a report is passed.
RuleResiduals rule_residuals(const PMap& pm, const RealFunction& f, const RealFunction& g,
                             double t, const HypothesisReport* hypotheses = nullptr);

/// |D(g o f)(t) - (Dg)(f(t)) Df(t)|: the tempting but wrong fractional chain rule.
double wrong_chain_residual(const PMap& pm, const RealFunction& f, const RealFunction& g,
                            double t);

}  // namespace gencalc
