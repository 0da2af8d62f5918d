#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gencalc/derivative.hpp"
#include "gencalc/function.hpp"
#include "gencalc/pmap.hpp"

using namespace gencalc;

namespace {

PMap khalil(double a, double lo = 0.01, double hi = 1.0) {
  return make_builtin(PMapFamily::khalil, a, Interval::closed(lo, hi));
}

}  // namespace

TEST_CASE("khalil derivative of t at 1/4") {
  const auto r = gd_limit(khalil(0.5), builtin_function("t"), 0.25);
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-8));
  const auto lift = gd_lift(khalil(0.5), builtin_function("t"), 0.25);
  CHECK(lift.method == Method::lift);
  CHECK(lift.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("classical derivative of sin at 0") {
  const auto pm = make_builtin(PMapFamily::classical, {}, Interval::real_line());
  const auto r = gd_limit(pm, builtin_function("sin"), 0.0);
  REQUIRE(r.ok());
  CHECK(std::abs(r.value - 1.0) < 1e-8);
}

TEST_CASE("quadratic map sends every derivative to zero") {
  const auto pm = make_builtin(PMapFamily::quadratic, {}, Interval::real_line());
  for (const char* name : {"sin", "exp", "t3"}) {
    for (double t : {-1.0, 0.0, 0.7}) {
      const auto r = gd_limit(pm, builtin_function(name), t);
      REQUIRE(r.ok());
      CHECK(std::abs(r.value) < 1e-6);
    }
  }
  // continuity is not implied: the step is p-differentiable with derivative 0
  const auto r = gd_limit(pm, builtin_function("sgn"), 0.0);
  CHECK(r.ok());
  CHECK(std::abs(r.value) < 1e-6);
}

TEST_CASE("sign map derivative flips sign with t") {
  const auto pm = make_builtin(PMapFamily::sign_map, {}, Interval::real_line());
  const auto right = gd_limit(pm, builtin_function("t2"), 0.5);
  REQUIRE(right.ok());
  CHECK(right.value == doctest::Approx(1.0).epsilon(1e-8));
  // sgn(-0.5) * 2(-0.5) = 1
  const auto left = gd_limit(pm, builtin_function("t2"), -0.5);
  CHECK(left.value == doctest::Approx(1.0).epsilon(1e-8));
  const auto step = gd_limit(pm, builtin_function("sgn_neg"), 0.3);
  CHECK(step.ok());
  CHECK(step.value == 0.0);
}

TEST_CASE("cubic map on |t| at 0") {
  const auto pm = make_builtin(PMapFamily::cubic, {}, Interval::real_line());
  const auto r = gd_limit(pm, builtin_function("abs"), 0.0);
  REQUIRE(r.ok());
  CHECK(std::abs(r.value) < 1e-6);
  const auto lift = gd_lift(pm, builtin_function("abs"), 0.0);
  CHECK(lift.outcome == Outcome::lift_inapplicable);
}

TEST_CASE("lift equals the limit wherever f is differentiable") {
  const double a = 0.7;
  const auto pm = khalil(a, 0.05, 2.0);
  for (const char* name : {"sin", "cos", "exp", "t3"}) {
    const auto f = builtin_function(name);
    for (double t : {0.1, 0.4, 1.0, 1.9}) {
      const auto lim = gd_limit(pm, f, t);
      const auto lift = gd_lift(pm, f, t);
      REQUIRE(lim.ok());
      REQUIRE(lift.ok());
      CHECK(std::abs(lim.value - lift.value) <= 1e-6 * std::max(1.0, std::abs(lift.value)));
      // independent oracle t^(1-a) f'(t)
      CHECK(lift.value == doctest::Approx(std::pow(t, 1 - a) * f.derivative(t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("linearity with random coefficients") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> where(0.1, 0.9);
  const auto pm = khalil(0.4);
  const auto f = builtin_function("sin");
  const auto g = builtin_function("exp");
  for (int trial = 0; trial < 20; ++trial) {
    const double c = coef(rng);
    const double t = where(rng);
    const auto combo = c * f + g;
    const double lhs = gd_limit(pm, combo, t).value;
    const double rhs = c * gd_limit(pm, f, t).value + gd_limit(pm, g, t).value;
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("product, quotient and chain rules hold for khalil") {
  const auto pm = khalil(0.5);
  const auto res = rule_residuals(pm, builtin_function("sin"), builtin_function("exp"), 0.3);
  CHECK(res.sum.below(1e-6));
  CHECK(res.product.below(1e-6));
  CHECK(res.quotient.below(1e-6));
  CHECK(res.chain.below(1e-6));
}

TEST_CASE("quotient rule reports a vanishing denominator") {
  const auto pm = khalil(0.5);
  const auto res = rule_residuals(pm, builtin_function("cos"), builtin_function("t"), 0.3);
  CHECK(res.quotient.below(1e-6));
  const auto cl = make_builtin(PMapFamily::classical, {}, Interval::real_line());
  const auto zero = rule_residuals(cl, builtin_function("cos"), builtin_function("sin"), 0.0);
  CHECK_FALSE(zero.quotient.residual);
  CHECK_FALSE(zero.quotient.violation.empty());
}

TEST_CASE("applying p_h twice breaks the chain rule unless p_h is 1") {
  const auto f = builtin_function("sin");
  const auto g = builtin_function("exp");
  const double t = 0.5;
  const double wrong = wrong_chain_residual(khalil(0.5), f, g, t);
  // D(f o g) - D_p f(g) * D_p g with D_p f(g) = g^(1-a) cos(g)
  // D(g o f) = t^(1/2) cos t e^(sin t), while D g(f) D f carries an extra (sin t)^(1/2)
  const double exact = std::sqrt(t) * std::cos(t) * std::exp(std::sin(t)) * (1 - std::sqrt(std::sin(t)));
  CHECK(wrong == doctest::Approx(exact).epsilon(1e-6));
  CHECK(wrong > 1e-3);
  const auto cl = make_builtin(PMapFamily::classical, {}, Interval::real_line());
  CHECK(wrong_chain_residual(cl, f, g, t) < 1e-8);
}

TEST_CASE("second generalized derivative") {
  const auto cl = make_builtin(PMapFamily::classical, {}, Interval::real_line());
  CHECK(gd_second(cl, builtin_function("t3"), 2.0) == doctest::Approx(12.0).epsilon(1e-8));
  const double a = 0.5;
  const auto pm = khalil(a);
  // D(D t^2) with D t^2 = 2 t^(2-a): p_h (2(2-a) t^(1-a)) = 2(2-a) t^(2-2a)
  for (double t : {0.1, 0.5, 0.9}) {
    CHECK(gd_second(pm, builtin_function("t2"), t) ==
          doctest::Approx(2 * (2 - a) * std::pow(t, 2 - 2 * a)).epsilon(1e-7));
  }
}

TEST_CASE("second derivative agrees with composing the limit twice") {
  const auto pm = khalil(0.6, 0.05, 1.0);
  const auto f = builtin_function("sin");
  const auto once = RealFunction::from([&](double s) { return gd_limit(pm, f, s).value; });
  LimitOptions outer;
  outer.h0 = 1e-2;
  outer.tol = 1e-4;
  for (double t : {0.2, 0.5, 0.8}) {
    const auto twice = gd_limit(pm, once, t, outer);
    CHECK(std::abs(twice.value - gd_second(pm, f, t)) < 1e-5);
  }
}

TEST_CASE("derivative of a constant and of the identity") {
  const auto pm = make_builtin(PMapFamily::katugampola, 0.3, Interval::closed(0.1, 2.0));
  CHECK(std::abs(gd_limit(pm, builtin_function("one"), 1.0).value) < 1e-10);
  // D_p t = p_h(t, 0) for every map
  for (double t : {0.2, 1.0, 1.8}) {
    CHECK(gd_limit(pm, builtin_function("t"), t).value == doctest::Approx(std::pow(t, 0.7)).epsilon(1e-7));
  }
}

TEST_CASE("out of domain evaluation is rejected") {
  CHECK_THROWS_AS(gd_limit(khalil(0.5), builtin_function("t"), 2.0), std::invalid_argument);
}
