#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "gencalc/derivative.hpp"
#include "gencalc/error.hpp"
#include "gencalc/sturm_liouville.hpp"

using namespace gencalc;
using std::numbers::pi;

namespace {

SLProblem problem(PMap pm, double a = 0.0, double b = 1.0) {
  SLProblem p{std::move(pm)};
  p.a = a;
  p.b = b;
  return p;
}

SLProblem khalil_problem(double alpha, double b = 1.0) {
  return problem(make_builtin(PMapFamily::khalil, alpha, Interval::left_open(0.0, b)), 0.0, b);
}

SLProblem indefinite_problem() {
  auto p = problem(make_builtin(PMapFamily::classical, {}, Interval::real_line()));
  p.w = step_function(0.5, -1.0, 1.0);
  p.breakpoints = {0.5};
  return p;
}

}  // namespace

TEST_CASE("khalil time change") {
  const auto tc = time_change(khalil_problem(0.5));
  CHECK(tc.c() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(tc.tau_at(0.25) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form solution solves D^2 y + lambda y = 0") {
  const double alpha = 0.5;
  const auto prob = khalil_problem(alpha);
  const double lambda = alpha * alpha * pi * pi;
  const auto sol = closed_form_solution(prob, lambda, 1.0, 0.0);
  CHECK(std::abs(sol.y(1.0)) < 1e-10);
  CHECK(std::abs(sol.y(0.0)) < 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 10; ++i) {
    const double t = u(rng);
    // y = sin(sqrt(lambda) t^a / a) written out independently
    CHECK(sol.y(t) == doctest::Approx(std::sin(pi * std::sqrt(t))).epsilon(1e-10));
    CHECK(std::abs(gd_second(prob.pm, sol.y, t) + lambda * sol.y(t)) < 1e-6);
    CHECK(sol.Dy(t) == doctest::Approx(gd_lift(prob.pm, sol.y, t).value).epsilon(1e-9));
  }
  CHECK_THROWS_AS(closed_form_solution(prob, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("negative lambda uses hyperbolic functions") {
  const auto prob = problem(make_builtin(PMapFamily::classical, {}, Interval::real_line()));
  const auto sol = closed_form_solution(prob, -4.0, 1.0, 2.0);
  for (double t : {0.0, 0.3, 1.0}) {
    CHECK(sol.y(t) == doctest::Approx(std::sinh(2 * t) + 2 * std::cosh(2 * t)).epsilon(1e-12));
  }
}

TEST_CASE("linear solution at lambda = 0") {
  const auto prob = khalil_problem(0.5);
  const auto sol = linear_solution(prob, 3.0, 1.0);
  CHECK(sol.y(0.25) == doctest::Approx(3.0 * 1.0 + 1.0).epsilon(1e-10));
  CHECK(std::abs(gd_second(prob.pm, sol.y, 0.6)) < 1e-6);
}

TEST_CASE("classical reformulation") {
  auto prob = khalil_problem(0.5);
  prob.q = RealFunction::constant_fn(2.0);
  const auto cl = to_classical(prob);
  CHECK(cl.p(0.25) == doctest::Approx(0.5));
  CHECK(cl.Q(0.25) == doctest::Approx(4.0));
  CHECK(cl.W(0.25) == doctest::Approx(2.0));
  CHECK(cl.left_bc.find("sin(mu)") != std::string::npos);

  const auto plain = to_classical(problem(make_builtin(PMapFamily::classical, {}, Interval::real_line())));
  CHECK(plain.p(0.3) == 1.0);
  CHECK(plain.W(0.3) == 1.0);
}

TEST_CASE("classical Dirichlet spectrum") {
  const auto s = shoot_eigenvalues(problem(make_builtin(PMapFamily::classical, {}, Interval::real_line())), 8);
  REQUIRE(s.lambda_plus.size() == 8);
  CHECK(s.lambda_minus.empty());
  for (int n = 1; n <= 8; ++n) {
    CHECK(std::abs(s.lambda_plus[n - 1] / (n * n * pi * pi) - 1) < 1e-8);
    CHECK(s.oscillation_plus[n - 1] == n - 1);
  }
}

TEST_CASE("khalil Dirichlet spectrum is (n pi alpha)^2 on (0, 1]") {
  for (double alpha : {0.3, 0.5, 0.8}) {
    const auto s = shoot_eigenvalues(khalil_problem(alpha), 6);
    for (int n = 1; n <= 6; ++n) {
      CAPTURE(alpha);
      CHECK(std::abs(s.lambda_plus[n - 1] / std::pow(n * pi * alpha, 2) - 1) < 1e-6);
    }
  }
}

TEST_CASE("spectra of other monotone time changes follow lambda_n = (n pi / c)^2") {
  // symmetric_abs on [-1, 1]: c = 2 / alpha
  auto sym = problem(make_builtin(PMapFamily::symmetric_abs, 0.5, Interval::closed(-1, 1)), -1.0, 1.0);
  const auto s1 = shoot_eigenvalues(sym, 4);
  for (int n = 1; n <= 4; ++n) CHECK(std::abs(s1.lambda_plus[n - 1] / std::pow(n * pi / 4.0, 2) - 1) < 1e-6);

  // katugampola on [0.1, 2] behaves like khalil: tau = (t^a - a^a) / a
  const double a = 0.3;
  auto kat = problem(make_builtin(PMapFamily::katugampola, a, Interval::closed(0.1, 2.0)), 0.1, 2.0);
  const double c = (std::pow(2.0, a) - std::pow(0.1, a)) / a;
  const auto s2 = shoot_eigenvalues(kat, 4);
  for (int n = 1; n <= 4; ++n) CHECK(std::abs(s2.lambda_plus[n - 1] / std::pow(n * pi / c, 2) - 1) < 1e-6);
}

TEST_CASE("Neumann conditions act on p_h y'") {
  auto prob = khalil_problem(0.5);
  prob.mu = pi / 2;
  prob.nu = pi / 2;
  const auto s = shoot_eigenvalues(prob, 4);
  // y = cos(k tau), sin(2k) = 0, so lambda_n = ((n-1) pi / 2)^2
  CHECK(std::abs(s.lambda_plus[0]) < 1e-8);
  for (int n = 2; n <= 4; ++n) CHECK(std::abs(s.lambda_plus[n - 1] / std::pow((n - 1) * pi / 2, 2) - 1) < 1e-6);

  // mixed: Neumann at 0, Dirichlet at 1 gives cos(2k) = 0
  prob.nu = 0.0;
  const auto m = shoot_eigenvalues(prob, 3);
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(m.lambda_plus[n - 1] / std::pow((n - 0.5) * pi / 2, 2) - 1) < 1e-6);
  const auto y = eigenfunction(prob, m.lambda_plus[1], 2001);
  // p_h y' = t^(1/2) y' tends to 0 at the singular endpoint even though y' itself does not
  CHECK(std::abs(y.front().Dy) < 1e-8);
  CHECK(std::abs(y[1].Dy) < 1e-2);
  CHECK(std::abs(y.back().y) < 1e-8);
}

TEST_CASE("eigenfunctions satisfy the equation") {
  const auto prob = khalil_problem(0.5);
  const auto s = shoot_eigenvalues(prob, 5);
  for (double lambda : s.lambda_plus) {
    const auto samples = eigenfunction(prob, lambda, 4001);
    CHECK(eigenfunction_residual(prob, lambda, samples) < 1e-6);
    double peak = 0.0;
    for (const auto& e : samples) peak = std::max(peak, std::abs(e.y));
    CHECK(peak == doctest::Approx(1.0));
  }
}

TEST_CASE("indefinite weight has two unbounded sequences") {
  const auto prob = indefinite_problem();
  const auto s = shoot_eigenvalues(prob, 10);
  REQUIRE(s.lambda_plus.size() == 10);
  REQUIRE(s.lambda_minus.size() == 10);
  for (int n = 1; n <= 10; ++n) {
    CHECK(s.lambda_plus[n - 1] > 0);
    CHECK(s.lambda_minus[n - 1] < 0);
    CHECK(s.oscillation_plus[n - 1] == n - 1);
    CHECK(s.oscillation_minus[n - 1] == n - 1);
    if (n > 1) {
      CHECK(s.lambda_plus[n - 1] > s.lambda_plus[n - 2]);
      CHECK(s.lambda_minus[n - 1] < s.lambda_minus[n - 2]);
    }
  }
  // the weight is odd about 1/2, so reflecting t -> 1 - t maps lambda to -lambda
  for (int n = 0; n < 10; ++n) CHECK(s.lambda_plus[n] == doctest::Approx(-s.lambda_minus[n]).epsilon(1e-8));
  // Exact oracle: y = sinh(k s) on [0, 1/2], y = A sin(k (1 - s)) on [1/2, 1],
  // so matching y'/y at 1/2 gives tan(k/2) + tanh(k/2) = 0 with lambda = k^2.
  for (int n = 1; n <= 10; ++n) {
    double lo = (n - 0.5) * pi + 1e-9, hi = n * pi;  // bracket for k/2
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (std::tan(mid) + std::tanh(mid) < 0 ? lo : hi) = mid;
    }
    const double k = lo + hi;
    CHECK(s.lambda_plus[n - 1] == doctest::Approx(k * k).epsilon(1e-8));
  }
  // and so the ratio to 4 n^2 pi^2 approaches 1 only like (1 - 1/(4n))^2
  CHECK(s.lambda_plus[9] / (4 * pi * pi * 100) == doctest::Approx(std::pow(1 - 0.025, 2)).epsilon(1e-6));
  for (double lambda : {s.lambda_plus[9], s.lambda_minus[9]}) {
    const auto samples = eigenfunction(prob, lambda, 4001);
    CHECK(eigenfunction_residual(prob, lambda, samples) < 1e-6);
  }
}

TEST_CASE("asymptotic estimates") {
  const auto classical = problem(make_builtin(PMapFamily::classical, {}, Interval::real_line()));
  CHECK(asymptotic_estimate(classical, 3, Side::plus) == doctest::Approx(9 * pi * pi).epsilon(1e-10));
  CHECK_THROWS_AS(asymptotic_estimate(classical, 3, Side::minus), std::domain_error);
  CHECK_FALSE(asymptotic_denominator(classical, Side::minus));

  // the stated integral of sqrt(w / p_h) for khalil a = 1/2 is 4/3
  const auto khalil = khalil_problem(0.5);
  CHECK(*asymptotic_denominator(khalil, Side::plus) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK(*weyl_denominator(khalil, Side::plus) == doctest::Approx(2.0).epsilon(1e-10));

  CHECK(asymptotic_estimate(indefinite_problem(), 5, Side::minus) == doctest::Approx(-100 * pi * pi).epsilon(1e-10));
}

TEST_CASE("relative error of the asymptotic estimate decreases") {
  auto prob = problem(make_builtin(PMapFamily::classical, {}, Interval::real_line()));
  prob.w = RealFunction::from([](double t) { return 1.0 + t; }, [](double) { return 1.0; }, "1+t");
  const auto s = shoot_eigenvalues(prob, 12);
  double previous = std::numeric_limits<double>::infinity();
  for (int n = 5; n <= 12; ++n) {
    const double err = std::abs(s.lambda_plus[n - 1] / asymptotic_estimate(prob, n, Side::plus) - 1);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("degenerate sign map problem") {
  const std::array<double, 5> lambdas{1.0, 17.3, pi * pi, 100.0, -3.0};
  const auto rep = degenerate_check(lambdas);
  CHECK(rep.all_pass);
  for (const auto& s : rep.samples) {
    CHECK(s.boundary_ok);
    CHECK(s.continuity_ok);
    CHECK(s.residual < 1e-6);
  }
}

TEST_CASE("invalid problems are rejected") {
  auto bad_angle = khalil_problem(0.5);
  bad_angle.mu = pi;
  CHECK_THROWS_AS(validate(bad_angle), std::invalid_argument);

  auto outside = khalil_problem(0.5);
  outside.a = -1.0;
  CHECK_THROWS_AS(validate(outside), std::invalid_argument);

  // 1 / p_h is infinite everywhere for p = t + h^2
  const auto flat = problem(make_builtin(PMapFamily::quadratic, {}, Interval::real_line()));
  CHECK_THROWS(validate(flat));

  const auto sign = problem(make_builtin(PMapFamily::sign_map, {}, Interval::open(-1, 1)), -1.0, 1.0);
  CHECK_THROWS_AS(shoot_eigenvalues(sign, 3), std::invalid_argument);

  CHECK_THROWS_AS(shoot_eigenvalues(khalil_problem(0.5), 0), std::invalid_argument);
}

TEST_CASE("a small search window reports a numerical failure") {
  ShootingOptions opts;
  opts.lambda_max = 10.0;
  CHECK_THROWS_AS(shoot_eigenvalues(khalil_problem(0.5), 5, opts), NumericalError);
}
