#include "gencalc/verify.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "gencalc/derivative.hpp"
#include "gencalc/function.hpp"
#include "gencalc/mechanics.hpp"
#include "gencalc/pmap.hpp"
#include "gencalc/sturm_liouville.hpp"
#include "gencalc/units.hpp"

namespace gencalc {
namespace {

using std::numbers::pi;

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << what << "; ";
    }
  }
};

PMap builtin(PMapFamily f, std::optional<double> alpha, Interval d) { return make_builtin(f, alpha, d); }

const std::array<double, 6> kEps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};

void quadratic_kills_derivatives(Check& c) {
  const auto pm = builtin(PMapFamily::quadratic, {}, Interval::real_line());
  for (const char* name : {"sin", "exp", "t2", "t3"}) {
    for (double t : {-0.7, 0.3, 1.5}) {
      const auto d = gd_limit(pm, builtin_function(name), t);
      c.expect(d.ok() && std::abs(d.value) < 1e-6, std::string("D f != 0 for f=") + name);
    }
  }
}

void discontinuous_yet_differentiable(Check& c) {
  const auto pm = builtin(PMapFamily::quadratic, {}, Interval::real_line());
  const auto f = builtin_function("sgn");
  const auto d = gd_limit(pm, f, 0.0);
  c.expect(d.ok() && d.value == 0.0, "sgn is not p-differentiable at 0 with derivative 0");
  c.expect(std::abs(f(-1e-12) - f(0.0)) == 2.0, "sgn is continuous at 0");
}

void constant_map_fails_h1(Check& c) {
  const PMap pm("constant_in_h", [](double t, double) { return t; }, Interval::real_line());
  const std::array<double, 2> ts{-0.5, 0.5};
  const auto rep = check_hypotheses(pm, ts, kEps);
  c.expect(!rep.h1_plus.holds && !rep.h1_minus.holds, "H1 should fail for p(t,h) = t");
  c.expect(rep.h1_plus.failure && !rep.h1_plus.failure->h, "expected a missing solution h");
  const auto d = gd_limit(pm, builtin_function("sgn"), 0.0);
  c.expect(d.ok() && d.value == 0.0, "D sgn(0) should be 0 under p(t,h) = t");
}

void exponential_map_fails_limit(Check& c) {
  const PMap pm("t_plus_exp_h", [](double t, double h) { return t + std::exp(h); }, Interval::real_line());
  const std::array<double, 1> ts{0.5};
  const auto rep = check_hypotheses(pm, ts, kEps);
  bool all_solved = !rep.h1_plus.samples.empty();
  for (const auto& s : rep.h1_plus.samples) all_solved = all_solved && s.h.has_value();
  c.expect(all_solved, "p(t,h) = t+eps should be solvable for every eps");
  c.expect(!rep.h1_plus.holds, "h = log eps must violate the limit condition");
}

void cubic_abs(Check& c) {
  const auto pm = builtin(PMapFamily::cubic, {}, Interval::real_line());
  const auto f = builtin_function("abs");
  const auto d = gd_limit(pm, f, 0.0);
  c.expect(d.ok() && std::abs(d.value) < 1e-9, "D|t|(0) should be 0 under p = t+h^3");
  const auto lift = gd_lift(pm, f, 0.0);
  c.expect(lift.outcome == Outcome::lift_inapplicable, "the lift should be inapplicable at a kink");
}

void quadratic_hypotheses(Check& c) {
  const auto pm = builtin(PMapFamily::quadratic, {}, Interval::real_line());
  const std::array<double, 2> ts{-0.3, 0.4};
  const auto rep = check_hypotheses(pm, ts, kEps);
  c.expect(rep.h1_plus.holds, "H1+ should hold with h = sqrt(eps)");
  c.expect(!rep.h1_minus.holds, "H1- should fail for p = t+h^2");
}

void rules(Check& c) {
  const auto k = builtin(PMapFamily::khalil, 0.5, Interval::closed(0.01, 1.0));
  const auto r = rule_residuals(k, builtin_function("sin"), builtin_function("cos"), 0.5);
  for (const auto* rc : {&r.sum, &r.product, &r.quotient, &r.chain}) {
    c.expect(rc->below(1e-6), "khalil rule residual >= 1e-6 " + rc->violation);
  }
  const auto cl = builtin(PMapFamily::classical, {}, Interval::real_line());
  const auto r2 = rule_residuals(cl, builtin_function("t2"), builtin_function("t3"), 1.0);
  for (const auto* rc : {&r2.sum, &r2.product, &r2.quotient, &r2.chain}) {
    c.expect(rc->below(1e-9), "classical rule residual >= 1e-9 " + rc->violation);
  }
  const double wrong = wrong_chain_residual(k, builtin_function("t"), builtin_function("t"), 0.5);
  c.expect(wrong >= 0.01, "the naive fractional chain rule should fail");
}

void degenerate(Check& c) {
  const std::array<double, 3> lambdas{1.0, 17.3, pi * pi};
  const auto rep = degenerate_check(lambdas);
  c.expect(rep.all_pass, "degenerate sign-map eigenfunctions");
}

void spectra(Check& c) {
  SLProblem classical{builtin(PMapFamily::classical, {}, Interval::real_line())};
  const auto s1 = shoot_eigenvalues(classical, 5);
  for (int n = 1; n <= 5; ++n) {
    const double exact = n * n * pi * pi;
    c.expect(std::abs(s1.lambda_plus[n - 1] / exact - 1) < 1e-8, "classical lambda_" + std::to_string(n));
  }
  SLProblem khalil{builtin(PMapFamily::khalil, 0.5, Interval::left_open(0.0, 1.0))};
  const auto s2 = shoot_eigenvalues(khalil, 5);
  for (int n = 1; n <= 5; ++n) {
    const double exact = n * n * pi * pi / 4;
    c.expect(std::abs(s2.lambda_plus[n - 1] / exact - 1) < 1e-6, "khalil lambda_" + std::to_string(n));
  }
}

void asymptotics(Check& c) {
  SLProblem classical{builtin(PMapFamily::classical, {}, Interval::real_line())};
  c.expect(std::abs(asymptotic_estimate(classical, 3, Side::plus) / (9 * pi * pi) - 1) < 1e-10,
           "classical estimate");
  SLProblem khalil{builtin(PMapFamily::khalil, 0.5, Interval::left_open(0.0, 1.0))};
  c.expect(std::abs(asymptotic_estimate(khalil, 2, Side::plus) / (4 * pi * pi * 0.5625) - 1) < 1e-8,
           "khalil estimate");
  SLProblem indefinite = classical;
  indefinite.w = step_function(0.5, -1.0, 1.0);
  indefinite.breakpoints = {0.5};
  c.expect(std::abs(asymptotic_estimate(indefinite, 5, Side::minus) / (-100 * pi * pi) - 1) < 1e-10,
           "indefinite minus estimate");
}

void closed_form(Check& c) {
  const double alpha = 0.5;
  SLProblem khalil{builtin(PMapFamily::khalil, alpha, Interval::left_open(0.0, 1.0))};
  const double lambda = alpha * alpha * pi * pi;
  const auto sol = closed_form_solution(khalil, lambda, 1.0, 0.0);
  c.expect(std::abs(sol.y(1.0)) < 1e-10, "y(1) should vanish at lambda = alpha^2 pi^2");
  for (double t : {0.1, 0.37, 0.8}) {
    c.expect(std::abs(gd_second(khalil.pm, sol.y, t) + lambda * sol.y(t)) < 1e-6, "closed-form residual");
  }
}

void lift(Check& c) {
  const std::array<PMap, 3> maps{builtin(PMapFamily::classical, {}, Interval::real_line()),
                                 builtin(PMapFamily::khalil, 0.5, Interval::closed(0.01, 1.0)),
                                 builtin(PMapFamily::katugampola, 0.3, Interval::closed(0.1, 2.0))};
  for (const auto& pm : maps) {
    for (const char* name : {"t2", "sin", "exp"}) {
      for (double t : {0.2, 0.5, 0.9}) {
        const auto f = builtin_function(name);
        const auto a = gd_limit(pm, f, t);
        const auto b = gd_lift(pm, f, t);
        c.expect(a.ok() && b.ok() && std::abs(a.value - b.value) < 1e-6, "lift mismatch " + pm.label());
      }
    }
  }
}

void units(Check& c) {
  const double v = convert_velocity(3.0, 0.99).magnitude;
  const double a = convert_acceleration(9.8, 0.99).magnitude;
  c.expect(std::round(v * 100) / 100 == 2.38, "3 m/s should read 2.38 m/sec^0.99");
  c.expect(std::round(a * 100) / 100 == 6.19, "9.8 m/s^2 should read 6.19 m/sec^1.98");
}

void central_force(Check& c) {
  CentralForceConfig cfg{builtin(PMapFamily::khalil, 0.5, Interval::left_open(0.0, 1.0))};
  std::vector<double> ts;
  for (int i = 1; i <= 100; ++i) ts.push_back(i / 100.0);
  const auto traj = central_force_solve(cfg, ts);
  c.expect(ellipse_invariant(traj, ellipse_constants(cfg)) < 1e-10, "circle invariant");
}

}  // namespace

std::vector<FixtureResult> run_fixtures() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> fixtures{
      {"quadratic_map_derivative_vanishes", quadratic_kills_derivatives},
      {"p_differentiable_but_discontinuous", discontinuous_yet_differentiable},
      {"constant_map_has_no_h", constant_map_fails_h1},
      {"exponential_map_violates_limit", exponential_map_fails_limit},
      {"cubic_map_abs_at_zero", cubic_abs},
      {"quadratic_map_one_sided_h1", quadratic_hypotheses},
      {"calculus_rules", rules},
      {"degenerate_sign_map_spectrum", degenerate},
      {"spectrum_oracles", spectra},
      {"asymptotic_estimates", asymptotics},
      {"closed_form_solution", closed_form},
      {"lift_equivalence", lift},
      {"alpha_second_units", units},
      {"central_force_circle", central_force},
  };
  std::vector<FixtureResult> out;
  for (const auto& [name, body] : fixtures) {
    Check c;
    try {
      body(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail << "exception: " << e.what();
    }
    out.push_back({name, c.pass, c.detail.str()});
  }
  return out;
}

}  // namespace gencalc
