#include "gencalc/sturm_liouville.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include "gencalc/derivative.hpp"
#include "gencalc/error.hpp"
#include "gencalc/quadrature.hpp"

namespace gencalc {
namespace {

namespace odeint = boost::numeric::odeint;
using std::numbers::pi;

double ph(const PMap& pm, double t) { return ph_at_zero(pm, t); }

void require_integrable(const ScalarFn& f, const SLProblem& prob, const char* what) {
  const auto breaks = all_breakpoints(prob);
  const auto r = integrate(f, prob.a, prob.b, breaks);
  if (!r.converged) throw std::invalid_argument(std::string(what) + " is not integrable on [a, b]");
}

bool is_constant(const RealFunction& f, double c) { return f.constant && *f.constant == c; }

// Sign of w P over the interval: +1, -1, or 0 for indefinite.
int weight_sign(const SLProblem& prob) {
  bool pos = false;
  bool neg = false;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const double t = prob.a + (prob.b - prob.a) * (i + 0.5) / n;
    const double v = prob.w(t) * prob.P(t);
    if (v > 0) pos = true;
    if (v < 0) neg = true;
  }
  if (pos && neg) return 0;
  return neg ? -1 : 1;
}

std::optional<double> positive_or_none(double v) {
  if (v > 1e-14) return v;
  return std::nullopt;
}

}  // namespace

std::vector<double> all_breakpoints(const SLProblem& prob) {
  std::vector<double> out;
  for (double x : prob.pm.singular_points()) {
    if (x > prob.a && x < prob.b) out.push_back(x);
  }
  for (double x : prob.breakpoints) {
    if (x > prob.a && x < prob.b) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate(const SLProblem& prob) {
  if (!std::isfinite(prob.a) || !std::isfinite(prob.b) || !(prob.a < prob.b)) {
    throw std::invalid_argument("interval must satisfy a < b, both finite");
  }
  const auto& d = prob.pm.domain();
  if (prob.a < d.lo || prob.b > d.hi) {
    throw std::invalid_argument("[a, b] leaves the closure of the p-map domain");
  }
  for (double angle : {prob.mu, prob.nu}) {
    if (!(angle >= 0.0 && angle < pi)) throw std::invalid_argument("boundary angles must lie in [0, pi)");
  }
  const auto& pm = prob.pm;
  require_integrable([&](double s) { return 1.0 / (prob.P(s) * ph(pm, s)); }, prob, "1/(P p_h)");
  if (!is_constant(prob.q, 0.0)) {
    require_integrable([&](double s) { return prob.q(s) / ph(pm, s); }, prob, "q/p_h");
  }
  require_integrable([&](double s) { return prob.w(s) / ph(pm, s); }, prob, "w/p_h");

  const int n = 2000;
  bool previous_zero = false;
  for (int i = 0; i < n; ++i) {
    const double t = prob.a + (prob.b - prob.a) * (i + 0.5) / n;
    const bool zero = 1.0 / ph(pm, t) == 0.0;
    if (zero && previous_zero) throw std::invalid_argument("1/p_h vanishes on an interval");
    previous_zero = zero;
  }
}

TimeChange time_change(const SLProblem& prob, int n_grid) {
  validate(prob);
  const PMap pm = prob.pm;
  const RealFunction P = prob.P;
  return TimeChange([pm, P](double s) { return 1.0 / (P(s) * ph(pm, s)); }, prob.a, prob.b,
                    all_breakpoints(prob), n_grid);
}

namespace {

// tau(t), continued past [a, b] by direct quadrature so that difference
// stencils may straddle the ends.
std::function<double(double)> tau_function(std::shared_ptr<const TimeChange> tc) {
  return [tc](double t) {
    const double clamped = std::clamp(t, tc->a(), tc->b());
    const double base = tc->tau_at(clamped);
    if (clamped == t) return base;
    return base + integrate([tc](double s) { return tc->rate(s); }, clamped, t).value;
  };
}

}  // namespace

SLSolution closed_form_solution(const SLProblem& prob, double lambda, double A, double B) {
  if (!is_constant(prob.P, 1.0) || !is_constant(prob.q, 0.0) || !is_constant(prob.w, 1.0)) {
    throw std::invalid_argument("closed form needs P = 1, q = 0, w = 1");
  }
  if (lambda == 0.0) throw std::invalid_argument("lambda = 0: use the linear solution");
  auto tc = std::make_shared<const TimeChange>(time_change(prob));
  const auto tau = tau_function(tc);
  const PMap pm = prob.pm;
  const double k = std::sqrt(std::abs(lambda));

  SLSolution out;
  if (lambda > 0) {
    out.y = RealFunction::from(
        [=](double t) { const double x = k * tau(t); return A * std::sin(x) + B * std::cos(x); },
        [=](double t) {
          const double x = k * tau(t);
          return k * (A * std::cos(x) - B * std::sin(x)) / ph(pm, t);
        },
        "closed_form");
    out.Dy = RealFunction::from(
        [=](double t) { const double x = k * tau(t); return k * (A * std::cos(x) - B * std::sin(x)); },
        [=](double t) {
          const double x = k * tau(t);
          return -k * k * (A * std::sin(x) + B * std::cos(x)) / ph(pm, t);
        },
        "closed_form_D");
  } else {
    out.y = RealFunction::from(
        [=](double t) { const double x = k * tau(t); return A * std::sinh(x) + B * std::cosh(x); },
        [=](double t) {
          const double x = k * tau(t);
          return k * (A * std::cosh(x) + B * std::sinh(x)) / ph(pm, t);
        },
        "closed_form");
    out.Dy = RealFunction::from(
        [=](double t) { const double x = k * tau(t); return k * (A * std::cosh(x) + B * std::sinh(x)); },
        [=](double t) {
          const double x = k * tau(t);
          return k * k * (A * std::sinh(x) + B * std::cosh(x)) / ph(pm, t);
        },
        "closed_form_D");
  }
  return out;
}

SLSolution linear_solution(const SLProblem& prob, double A, double B) {
  if (!is_constant(prob.q, 0.0)) throw std::invalid_argument("linear solution needs q = 0");
  auto tc = std::make_shared<const TimeChange>(time_change(prob));
  const auto tau = tau_function(tc);
  const PMap pm = prob.pm;
  const RealFunction P = prob.P;
  SLSolution out;
  out.y = RealFunction::from([=](double t) { return A * tau(t) + B; },
                             [=](double t) { return A / (P(t) * ph(pm, t)); }, "linear");
  out.Dy = RealFunction::from([=](double t) { return A / P(t); }, {}, "linear_D");
  return out;
}

ClassicalSL to_classical(const SLProblem& prob) {
  const PMap pm = prob.pm;
  RealFunction weight = RealFunction::from([pm](double t) { return ph(pm, t); }, {}, "p_h");
  if (pm.family() == PMapFamily::classical) weight = RealFunction::constant_fn(1.0);
  ClassicalSL out;
  out.p = prob.P * weight;
  out.Q = prob.q / weight;
  out.W = prob.w / weight;
  out.a = prob.a;
  out.b = prob.b;
  out.mu = prob.mu;
  out.nu = prob.nu;
  out.left_bc = "y(a) cos(mu) - (P p_h y')(a) sin(mu) = 0";
  out.right_bc = "y(b) cos(nu) + (P p_h y')(b) sin(nu) = 0";
  return out;
}

std::optional<double> asymptotic_denominator(const SLProblem& prob, Side side) {
  const double s = side == Side::plus ? 1.0 : -1.0;
  const auto& pm = prob.pm;
  const auto r = integrate(
      [&](double x) { return std::sqrt(std::max(0.0, s * prob.w(x) / ph(pm, x))); }, prob.a,
      prob.b, all_breakpoints(prob));
  if (!r.converged) throw NumericalError("asymptotic denominator does not converge");
  return positive_or_none(r.value);
}

std::optional<double> weyl_denominator(const SLProblem& prob, Side side) {
  const double s = side == Side::plus ? 1.0 : -1.0;
  const auto& pm = prob.pm;
  const auto r = integrate(
      [&](double x) {
        const double Px = prob.P(x);
        return std::sqrt(std::max(0.0, s * prob.w(x) * Px)) / std::abs(Px * ph(pm, x));
      },
      prob.a, prob.b, all_breakpoints(prob));
  if (!r.converged) throw NumericalError("Weyl denominator does not converge");
  return positive_or_none(r.value);
}

double asymptotic_estimate(const SLProblem& prob, int n, Side side) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const auto denom = asymptotic_denominator(prob, side);
  if (!denom) throw std::domain_error("no asymptotic sequence on this side: the integral vanishes");
  const double est = n * n * pi * pi / (*denom * *denom);
  return side == Side::plus ? est : -est;
}

PrueferShooter::PrueferShooter(const SLProblem& prob, const ShootingOptions& opts)
    : prob_(prob), rtol_(opts.rtol) {
  auto tc = std::make_shared<const TimeChange>(time_change(prob_, opts.n_grid));
  if (!tc->increasing()) {
    throw std::invalid_argument("shooting needs P p_h > 0 a.e. (the time change is not increasing)");
  }
  tau_ = tc;
  t_breaks_.push_back(prob_.a);
  for (double x : prob_.breakpoints) {
    if (x > prob_.a && x < prob_.b) t_breaks_.push_back(x);
  }
  t_breaks_.push_back(prob_.b);
  std::sort(t_breaks_.begin(), t_breaks_.end());
  t_breaks_.erase(std::unique(t_breaks_.begin(), t_breaks_.end()), t_breaks_.end());
  for (double x : t_breaks_) tau_breaks_.push_back(tau_->tau_at(x));
  constant_coefficients_ = prob_.P.constant && prob_.q.constant && prob_.w.constant;
}

double PrueferShooter::coefficient(double lambda, double tau) const {
  if (constant_coefficients_) {
    return *prob_.P.constant * (lambda * *prob_.w.constant - *prob_.q.constant);
  }
  // Keep t strictly inside the piece that contains tau so that a coefficient
  // jump is seen from the correct side.
  const auto it = std::upper_bound(tau_breaks_.begin(), tau_breaks_.end(), tau);
  std::size_t piece = it == tau_breaks_.begin() ? 0 : static_cast<std::size_t>(it - tau_breaks_.begin()) - 1;
  piece = std::min(piece, tau_breaks_.size() - 2);
  return coefficient_in_piece(lambda, tau, piece);
}

double PrueferShooter::coefficient_in_piece(double lambda, double tau, std::size_t piece) const {
  if (constant_coefficients_) {
    return *prob_.P.constant * (lambda * *prob_.w.constant - *prob_.q.constant);
  }
  const double lo = t_breaks_[piece];
  const double hi = t_breaks_[piece + 1];
  double t = tau_->t_at_fast(std::clamp(tau, tau_breaks_[piece], tau_breaks_[piece + 1]));
  t = std::clamp(t, std::nextafter(lo, hi), std::nextafter(hi, lo));
  return prob_.P(t) * (lambda * prob_.w(t) - prob_.q(t));
}

double PrueferShooter::angle_count(double lambda) const {
  using State = std::array<double, 1>;
  State theta{prob_.mu};
  auto stepper = odeint::make_controlled(rtol_, rtol_, odeint::runge_kutta_dopri5<State>());
  for (std::size_t i = 0; i + 1 < tau_breaks_.size(); ++i) {
    const double t0 = tau_breaks_[i];
    const double t1 = tau_breaks_[i + 1];
    auto rhs = [&](const State& x, State& dx, double tau) {
      const double s = std::sin(x[0]);
      const double c = std::cos(x[0]);
      dx[0] = c * c + coefficient_in_piece(lambda, tau, i) * s * s;
    };
    odeint::integrate_adaptive(stepper, rhs, theta, t0, t1, (t1 - t0) / 64);
  }
  if (!std::isfinite(theta[0])) throw NumericalError("Pruefer integration failed");
  return (theta[0] + prob_.nu) / pi;
}

namespace {

class CountedRoots {
 public:
  CountedRoots(std::function<double(double)> count) : count_(std::move(count)) {}

  double operator()(double x) {
    auto it = cache_.find(x);
    if (it != cache_.end()) return it->second;
    const double v = count_(x);
    cache_.emplace(x, v);
    return v;
  }

  // Root of count(x) = m with count(lo) < m < count(hi).
  double solve(double m, double lo, double hi) {
    double flo = (*this)(lo) - m;
    double fhi = (*this)(hi) - m;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    boost::uintmax_t iters = 200;
    auto f = [&](double x) { return (*this)(x) - m; };
    const auto r = boost::math::tools::toms748_solve(
        f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
  }

  // Tightest cached bracket of count = m in [lo, hi] for a monotone count.
  std::pair<double, double> bracket(double m, double lo, double hi) const {
    for (const auto& [x, v] : cache_) {
      if (x < lo || x > hi) continue;
      if (v < m) lo = std::max(lo, x);
      if (v > m) {
        hi = std::min(hi, x);
        break;
      }
    }
    return {lo, hi};
  }

 private:
  std::function<double(double)> count_;
  std::map<double, double> cache_;
};

std::string window(double lo, double hi) {
  return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

// Definite weight: count(lambda) increases monotonically from below 1.
void definite_sequence(const PrueferShooter& shooter, double sign, int n, double lambda_max,
                       std::vector<double>& values, std::vector<int>& counts) {
  CountedRoots g([&](double x) { return shooter.angle_count(sign * x); });
  double lo = -1.0;
  while (g(lo) >= 1.0) {
    lo *= 2.0;
    if (-lo > lambda_max) throw NumericalError("no lower bracket in " + window(-lambda_max, 0));
  }
  double hi = 1.0;
  while (g(hi) <= n) {
    hi *= 2.0;
    if (hi > lambda_max) {
      throw NumericalError("only " + std::to_string(static_cast<int>(g(hi / 2))) +
                           " eigenvalues below the scan limit " + window(lo, lambda_max));
    }
  }
  double previous = lo;
  for (int k = 1; k <= n; ++k) {
    const auto [blo, bhi] = g.bracket(k, previous, hi);
    const double root = g.solve(k, blo, bhi);
    values.push_back(sign * root);
    counts.push_back(k - 1);
    previous = root;
  }
}

// Indefinite weight: scan |lambda| geometrically, refining wherever the count
// moves by more than a quarter, and solve at every integer crossing.
void indefinite_sequence(const PrueferShooter& shooter, double sign, int n, double lambda_min,
                         double lambda_max, std::vector<double>& values, std::vector<int>& counts) {
  CountedRoots g([&](double x) { return shooter.angle_count(sign * x); });
  std::vector<std::pair<double, int>> found;

  std::function<void(double, double, int)> cell = [&](double x0, double x1, int depth) {
    if (static_cast<int>(found.size()) >= n) return;
    const double g0 = g(x0);
    const double g1 = g(x1);
    if (std::abs(g1 - g0) > 0.25 && depth < 60) {
      const double mid = x0 > 0 ? std::sqrt(x0 * x1) : 0.5 * (x0 + x1);
      if (mid > x0 && mid < x1) {
        cell(x0, mid, depth + 1);
        cell(mid, x1, depth + 1);
        return;
      }
    }
    const double lo = std::min(g0, g1);
    const double hi = std::max(g0, g1);
    for (double m = std::floor(lo) + 1.0; m <= hi; m += 1.0) {
      if (m < 1.0) continue;
      const double root = g.solve(m, g0 < g1 ? x0 : x1, g0 < g1 ? x1 : x0);
      found.emplace_back(root, static_cast<int>(m) - 1);
      if (static_cast<int>(found.size()) >= n) return;
    }
  };

  double x = lambda_min;
  while (static_cast<int>(found.size()) < n && x < lambda_max) {
    const double next = std::min(2.0 * x, lambda_max);
    cell(x, next, 0);
    x = next;
  }
  if (static_cast<int>(found.size()) < n) {
    throw NumericalError("found " + std::to_string(found.size()) + " of " + std::to_string(n) +
                         " eigenvalues in |lambda| window " + window(lambda_min, lambda_max));
  }
  std::sort(found.begin(), found.end());
  for (int k = 0; k < n; ++k) {
    values.push_back(sign * found[k].first);
    counts.push_back(found[k].second);
  }
}

}  // namespace

Spectrum shoot_eigenvalues(const SLProblem& prob, int n_per_side, const ShootingOptions& opts) {
  if (n_per_side < 1) throw std::invalid_argument("n_per_side must be positive");
  const PrueferShooter shooter(prob, opts);

  Spectrum out;
  out.asymptotic_plus = asymptotic_denominator(prob, Side::plus);
  out.asymptotic_minus = asymptotic_denominator(prob, Side::minus);
  out.weyl_plus = weyl_denominator(prob, Side::plus);
  out.weyl_minus = weyl_denominator(prob, Side::minus);

  const int sign = weight_sign(prob);
  if (sign > 0) {
    definite_sequence(shooter, 1.0, n_per_side, opts.lambda_max, out.lambda_plus,
                      out.oscillation_plus);
  } else if (sign < 0) {
    definite_sequence(shooter, -1.0, n_per_side, opts.lambda_max, out.lambda_minus,
                      out.oscillation_minus);
  } else {
    if (out.weyl_plus) {
      indefinite_sequence(shooter, 1.0, n_per_side, opts.lambda_min, opts.lambda_max,
                          out.lambda_plus, out.oscillation_plus);
    }
    if (out.weyl_minus) {
      indefinite_sequence(shooter, -1.0, n_per_side, opts.lambda_min, opts.lambda_max,
                          out.lambda_minus, out.oscillation_minus);
    }
  }
  return out;
}

std::vector<EigenfunctionSample> eigenfunction(const SLProblem& prob, double lambda,
                                               int n_samples, const ShootingOptions& opts) {
  if (n_samples < 5) throw std::invalid_argument("need at least 5 samples");
  const PrueferShooter shooter(prob, opts);
  const auto& tc = shooter.tau();
  const auto breaks = shooter.tau_breaks();
  const double c = tc.total();

  using State = std::array<double, 2>;  // theta, log rho
  State x{prob.mu, 0.0};
  auto stepper = odeint::make_controlled(opts.rtol, opts.rtol, odeint::runge_kutta_dopri5<State>());

  std::vector<EigenfunctionSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  auto record = [&](double tau) {
    const double rho = std::exp(x[1]);
    EigenfunctionSample s;
    s.tau = tau;
    s.t = tau <= 0.0 ? prob.a : (tau >= c ? prob.b : tc.t_at_fast(tau));
    s.y = rho * std::sin(x[0]);
    s.dtau = rho * std::cos(x[0]);
    s.Dy = s.dtau / prob.P(std::clamp(s.t, std::nextafter(prob.a, prob.b), std::nextafter(prob.b, prob.a)));
    out.push_back(s);
  };

  record(0.0);
  std::size_t piece = 0;
  double tau = 0.0;
  for (int j = 1; j < n_samples; ++j) {
    const double target = j + 1 == n_samples ? c : c * j / (n_samples - 1);
    while (tau < target) {
      while (piece + 2 < breaks.size() && breaks[piece + 1] <= tau) ++piece;
      const double stop = std::min(target, breaks[piece + 1]);
      auto rhs = [&](const State& s, State& ds, double at) {
        const double K = shooter.coefficient_in_piece(lambda, at, piece);
        const double sn = std::sin(s[0]);
        const double cs = std::cos(s[0]);
        ds[0] = cs * cs + K * sn * sn;
        ds[1] = (1.0 - K) * sn * cs;
      };
      odeint::integrate_adaptive(stepper, rhs, x, tau, stop, (stop - tau) / 4);
      tau = stop;
    }
    record(target);
  }

  double scale = 0.0;
  for (const auto& s : out) scale = std::max(scale, std::abs(s.y));
  if (!(scale > 0.0) || !std::isfinite(scale)) throw NumericalError("eigenfunction reconstruction failed");
  for (auto& s : out) {
    s.y /= scale;
    s.Dy /= scale;
    s.dtau /= scale;
  }
  return out;
}

double eigenfunction_residual(const SLProblem& prob, double lambda,
                              std::span<const EigenfunctionSample> samples) {
  const std::size_t n = samples.size();
  if (n < 5) throw std::invalid_argument("need at least 5 samples");
  const PrueferShooter shooter(prob);
  const auto breaks = shooter.tau_breaks();
  const double h = samples[1].tau - samples[0].tau;

  double zmax = 0.0;
  double kymax = 0.0;
  for (const auto& s : samples) {
    zmax = std::max(zmax, std::abs(s.dtau));
    kymax = std::max(kymax, std::abs(shooter.coefficient(lambda, s.tau) * s.y));
  }

  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < n; ++j) {
    const double lo = samples[j - 2].tau;
    const double hi = samples[j + 2].tau;
    const bool straddles = std::any_of(breaks.begin() + 1, breaks.end() - 1,
                                       [&](double b) { return b >= lo && b <= hi; });
    if (straddles) continue;
    auto d = [&](auto field) {
      return (field(samples[j - 2]) - 8 * field(samples[j - 1]) + 8 * field(samples[j + 1]) -
              field(samples[j + 2])) / (12 * h);
    };
    const double dy = d([](const EigenfunctionSample& s) { return s.y; });
    const double dz = d([](const EigenfunctionSample& s) { return s.dtau; });
    const double K = shooter.coefficient(lambda, samples[j].tau);
    worst = std::max(worst, std::abs(dy - samples[j].dtau) / std::max(1.0, zmax));
    worst = std::max(worst, std::abs(dz + K * samples[j].y) / std::max(1.0, kymax));
  }
  return worst;
}

DegenerateReport degenerate_check(std::span<const double> lambdas) {
  const PMap pm = make_builtin(PMapFamily::sign_map, std::nullopt, Interval::open(-1.0, 1.0));
  DegenerateReport report;
  report.all_pass = true;
  for (double lambda : lambdas) {
    const double k = std::sqrt(std::abs(lambda));
    std::function<double(double)> y;
    std::function<double(double)> dy;
    if (lambda > 0) {
      y = [k](double t) { return std::sin(k * (std::abs(t) - 1.0)); };
      dy = [k](double t) { return (t < 0 ? -k : k) * std::cos(k * (std::abs(t) - 1.0)); };
    } else if (lambda < 0) {
      y = [k](double t) { return std::sinh(k * (std::abs(t) - 1.0)); };
      dy = [k](double t) { return (t < 0 ? -k : k) * std::cosh(k * (std::abs(t) - 1.0)); };
    } else {
      y = [](double t) { return std::abs(t) - 1.0; };
      dy = [](double t) { return t < 0 ? -1.0 : 1.0; };
    }
    const auto f = RealFunction::from(y, dy, "degenerate");

    DegenerateSample s;
    s.lambda = lambda;
    s.boundary_ok = y(-1.0) == 0.0 && y(1.0) == 0.0;

    const double eta = 1e-9;
    const auto right = gd_lift(pm, f, eta);
    const auto left = gd_lift(pm, f, -eta);
    s.continuity_ok = right.ok() && left.ok() &&
                      std::abs(right.value - left.value) <= 1e-6 * std::max(1.0, std::abs(right.value));

    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (double sgn : {-1.0, 1.0}) {
        const double at = sgn * t;
        s.residual = std::max(s.residual, std::abs(gd_second(pm, f, at) + lambda * y(at)));
      }
    }
    s.pass = s.boundary_ok && s.continuity_ok && s.residual < 1e-6;
    report.all_pass = report.all_pass && s.pass;
    report.samples.push_back(s);
  }
  return report;
}

}  // namespace gencalc
