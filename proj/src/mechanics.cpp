#include "gencalc/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gencalc/error.hpp"
#include "gencalc/quadrature.hpp"

namespace gencalc {

void Trajectory::check() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].state.size() != labels.size()) {
      throw std::invalid_argument("trajectory state has the wrong dimension");
    }
    if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
      throw std::invalid_argument("trajectory times must be strictly increasing");
    }
  }
}

namespace {

void require_increasing(std::span<const double> ts, double t0) {
  if (ts.empty()) throw std::invalid_argument("no sample times");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < t0) throw std::invalid_argument("sample times must not precede t0");
    if (i > 0 && !(ts[i] > ts[i - 1])) throw std::invalid_argument("sample times must be strictly increasing");
  }
}

std::vector<double> singular_points(const PMap& pm) {
  return {pm.singular_points().begin(), pm.singular_points().end()};
}

std::shared_ptr<const TimeChange> make_tau(const PMap& pm, double t0, double t1) {
  if (!(t1 > t0)) t1 = t0 + 1.0;
  return std::make_shared<const TimeChange>([pm](double s) { return 1.0 / ph_at_zero(pm, s); },
                                            t0, t1, singular_points(pm), 64);
}

// tau(t) by the requested route; quadrature tau is continued past the
// tabulated range by direct integration.
struct TauRoute {
  std::function<double(double)> tau;
  std::shared_ptr<const TimeChange> table;
};

TauRoute tau_route(const PMap& pm, double t0, double t_max, TauMethod method) {
  const bool has_closed = closed_form_tau(pm, t0, t0).has_value();
  if (method == TauMethod::closed_form && !has_closed) {
    throw std::invalid_argument("no closed-form time change for p-map " + pm.label());
  }
  if (method == TauMethod::closed_form || (method == TauMethod::automatic && has_closed)) {
    return {[pm, t0](double t) { return *closed_form_tau(pm, t0, t); }, nullptr};
  }
  auto table = make_tau(pm, t0, t_max);
  auto tau = [table, pm](double t) {
    const double clamped = std::clamp(t, table->a(), table->b());
    const double base = table->tau_at(clamped);
    if (clamped == t) return base;
    return base + integrate([&pm](double s) { return 1.0 / ph_at_zero(pm, s); }, clamped, t).value;
  };
  return {tau, table};
}

}  // namespace

std::optional<double> closed_form_tau(const PMap& pm, double t0, double t) {
  const auto family = pm.family();
  if (!family) return std::nullopt;
  switch (*family) {
    case PMapFamily::classical:
      return t - t0;
    case PMapFamily::khalil:
    case PMapFamily::katugampola: {
      const double a = *pm.alpha();
      return (std::pow(t, a) - std::pow(t0, a)) / a;
    }
    case PMapFamily::symmetric_abs: {
      const double a = *pm.alpha();
      auto F = [a](double s) { return std::copysign(std::pow(std::abs(s), a), s) / a; };
      return F(t) - F(t0);
    }
    default:
      return std::nullopt;
  }
}

EllipseConstants ellipse_constants(const CentralForceConfig& cfg) {
  if (!(cfg.k > 0.0)) throw std::invalid_argument("central force needs k > 0");
  return {cfg.Dx0 / cfg.k, cfg.x0, cfg.Dy0 / cfg.k, cfg.y0};
}

CentralForceSolution central_force_functions(const CentralForceConfig& cfg, TauMethod method) {
  const auto c = ellipse_constants(cfg);
  const auto route = tau_route(cfg.pm, cfg.t0, cfg.pm.domain().bounded() ? cfg.pm.domain().hi : cfg.t0 + 1.0, method);
  const auto tau = route.tau;
  const double k = cfg.k;
  const PMap pm = cfg.pm;
  auto make = [&](double s1, double s2, const char* label) {
    return RealFunction::from(
        [=](double t) { const double x = k * tau(t); return s1 * std::sin(x) + s2 * std::cos(x); },
        [=](double t) {
          const double x = k * tau(t);
          return k * (s1 * std::cos(x) - s2 * std::sin(x)) / ph_at_zero(pm, t);
        },
        label);
  };
  return {make(c.c1, c.c2, "x"), make(c.d1, c.d2, "y")};
}

Trajectory central_force_solve(const CentralForceConfig& cfg, std::span<const double> ts,
                               TauMethod method) {
  const auto c = ellipse_constants(cfg);
  require_increasing(ts, cfg.t0);
  const auto route = tau_route(cfg.pm, cfg.t0, ts.back(), method);

  Trajectory traj;
  traj.labels = {"x", "y", "Dx", "Dy"};
  traj.time_change = route.table;
  traj.samples.reserve(ts.size());
  for (double t : ts) {
    const double tau = route.tau(t);
    const double s = std::sin(cfg.k * tau);
    const double co = std::cos(cfg.k * tau);
    traj.samples.push_back({t, tau,
                            {c.c1 * s + c.c2 * co, c.d1 * s + c.d2 * co,
                             cfg.k * (c.c1 * co - c.c2 * s), cfg.k * (c.d1 * co - c.d2 * s)}});
  }
  return traj;
}

double ellipse_invariant(const Trajectory& traj, const EllipseConstants& c) {
  const double rhs = (c.d1 * c.c2 - c.c1 * c.d2) * (c.d1 * c.c2 - c.c1 * c.d2);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const double x = s.state.at(0);
    const double y = s.state.at(1);
    const double u = c.d1 * x - c.c1 * y;
    const double v = c.d2 * x - c.c2 * y;
    worst = std::max(worst, std::abs(u * u + v * v - rhs));
  }
  return worst;
}

Trajectory gravity_solve(const GravityConfig& cfg, std::span<const double> ts, TauMethod method) {
  require_increasing(ts, cfg.t0);
  const auto route = tau_route(cfg.pm, cfg.t0, ts.back(), method);
  const bool quadrature = static_cast<bool>(route.table);
  const PMap pm = cfg.pm;
  const auto breaks = singular_points(pm);

  Trajectory traj;
  traj.labels = {"x", "y", "Dx", "Dy"};
  traj.time_change = route.table;
  for (double t : ts) {
    const double tau = route.tau(t);
    double phi = 0.5 * tau * tau;
    if (quadrature) {
      const auto r = integrate([&](double s) { return route.tau(s) / ph_at_zero(pm, s); }, cfg.t0, t, breaks);
      if (!r.converged) throw NumericalError("inner time integral diverges");
      phi = r.value;
    }
    traj.samples.push_back({t, tau,
                            {cfg.x0 + cfg.u0 * tau, cfg.y0 + cfg.v0 * tau - cfg.g * phi, cfg.u0,
                             cfg.v0 - cfg.g * tau}});
  }
  return traj;
}

std::array<double, 2> classical_fall(const GravityConfig& cfg, double t) {
  const double s = t - cfg.t0;
  return {cfg.x0 + cfg.u0 * s, cfg.y0 + cfg.v0 * s - 0.5 * cfg.g * s * s};
}

void validate(const DragConfig& cfg) {
  for (double v : {cfg.m, cfg.g, cfg.C, cfg.rho, cfg.A, cfg.sigma}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("drag parameters must be positive");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("drag needs alpha in (0, 1)");
}

double terminal_velocity(const DragConfig& cfg) {
  return std::sqrt(2.0 * cfg.m * cfg.g / (cfg.C * cfg.rho * cfg.A));
}

double drag_constant(const DragConfig& cfg) {
  return std::sqrt(2.0) * std::pow(cfg.sigma, 1.0 - cfg.alpha) / (2.0 * cfg.alpha * cfg.m) *
         std::sqrt(cfg.g * cfg.C * cfg.rho * cfg.A * cfg.m);
}

namespace {
double drag_argument(const DragConfig& cfg, double t) {
  return drag_constant(cfg) * (cfg.alpha + std::pow(t, cfg.alpha));
}
}  // namespace

double drag_velocity(const DragConfig& cfg, double t) {
  return terminal_velocity(cfg) * std::tanh(drag_argument(cfg, t));
}

double drag_velocity_derivative(const DragConfig& cfg, double t) {
  const double sech = 1.0 / std::cosh(drag_argument(cfg, t));
  return terminal_velocity(cfg) * sech * sech * drag_constant(cfg) * cfg.alpha *
         std::pow(t, cfg.alpha - 1.0);
}

double drag_ph(const DragConfig& cfg, double t) {
  const double ch = std::cosh(drag_argument(cfg, t));
  return std::pow(t, 1.0 - cfg.alpha) * std::pow(cfg.sigma, cfg.alpha - 1.0) * ch * ch;
}

double drag_velocity_quadrature(const DragConfig& cfg, double t) {
  auto inv_ph = [&cfg](double s) {
    const double sech = 1.0 / std::cosh(drag_argument(cfg, s));
    return std::pow(s, cfg.alpha - 1.0) * std::pow(cfg.sigma, 1.0 - cfg.alpha) * sech * sech;
  };
  const auto tail = integrate_to_infinity(inv_ph, t);
  if (!tail.converged) throw NumericalError("drag tail integral diverges");
  return terminal_velocity(cfg) - cfg.g * tail.value;
}

double drag_residual(const DragConfig& cfg, double t) {
  const double ph = drag_ph(cfg, t);
  if (std::isfinite(ph)) return std::abs(ph * drag_velocity_derivative(cfg, t) - cfg.g);
  // cosh^2 overflowed: form the product from logarithms so the two cosh factors meet first
  const double x = drag_argument(cfg, t);
  const double log_cosh = std::abs(x) + std::log1p(std::exp(-2.0 * std::abs(x))) - std::log(2.0);
  const double log_ph = (1.0 - cfg.alpha) * std::log(t) + (cfg.alpha - 1.0) * std::log(cfg.sigma) + 2.0 * log_cosh;
  const double log_dv = std::log(terminal_velocity(cfg) * drag_constant(cfg) * cfg.alpha) - 2.0 * log_cosh +
                        (cfg.alpha - 1.0) * std::log(t);
  return std::abs(std::exp(log_ph + log_dv) - cfg.g);
}

double drag_saturation_time(const DragConfig& cfg, double arg) {
  const double need = arg / drag_constant(cfg) - cfg.alpha;
  return need <= 0.0 ? 0.0 : std::pow(need, 1.0 / cfg.alpha);
}

Trajectory drag_solve(const DragConfig& cfg, std::span<const double> ts) {
  validate(cfg);
  require_increasing(ts, 0.0);
  Trajectory traj;
  traj.labels = {"v", "p_h", "residual"};
  const double v_start = drag_velocity(cfg, 0.0);
  for (double t : ts) {
    const double v = drag_velocity(cfg, t);
    traj.samples.push_back({t, (v - v_start) / cfg.g, {v, drag_ph(cfg, t), drag_residual(cfg, t)}});
  }
  return traj;
}

void validate(const NBodySystem& sys) {
  const std::size_t n = sys.masses.size();
  if (n == 0 || sys.positions.size() != n || sys.velocities.size() != n) {
    throw std::invalid_argument("n-body arrays must be non-empty and of equal length");
  }
  for (double m : sys.masses) {
    if (!(m > 0.0)) throw std::invalid_argument("masses must be positive");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sys.positions[i] == sys.positions[j]) throw std::invalid_argument("bodies start in collision");
    }
  }
}

namespace {

double distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

void accelerations(const NBodySystem& sys, std::vector<Vec3>& acc, double min_distance) {
  const std::size_t n = sys.masses.size();
  std::fill(acc.begin(), acc.end(), Vec3{0, 0, 0});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec3 d;
      for (int c = 0; c < 3; ++c) d[c] = sys.positions[j][c] - sys.positions[i][c];
      const double r = std::hypot(d[0], d[1], d[2]);
      if (!(r > min_distance)) throw NumericalError("close encounter between bodies");
      const double f = sys.G / (r * r * r);
      for (int c = 0; c < 3; ++c) {
        acc[i][c] += f * sys.masses[j] * d[c];
        acc[j][c] -= f * sys.masses[i] * d[c];
      }
    }
  }
}

std::vector<double> flatten(const NBodySystem& sys) {
  std::vector<double> out;
  for (const auto& p : sys.positions) out.insert(out.end(), p.begin(), p.end());
  for (const auto& v : sys.velocities) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<std::string> nbody_labels(std::size_t n, const char* velocity_prefix) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (const char* c : {"x", "y", "z"}) out.push_back(std::string(c) + std::to_string(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const char* c : {"x", "y", "z"}) {
      out.push_back(std::string(velocity_prefix) + c + std::to_string(i));
    }
  }
  return out;
}

double point_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab;
  Vec3 ap;
  double len2 = 0.0;
  double dot = 0.0;
  for (int c = 0; c < 3; ++c) {
    ab[c] = b[c] - a[c];
    ap[c] = p[c] - a[c];
    len2 += ab[c] * ab[c];
    dot += ab[c] * ap[c];
  }
  const double s = len2 > 0.0 ? std::clamp(dot / len2, 0.0, 1.0) : 0.0;
  Vec3 q;
  for (int c = 0; c < 3; ++c) q[c] = a[c] + s * ab[c];
  return distance(p, q);
}

double directed(std::span<const Vec3> from, std::span<const Vec3> to) {
  double worst = 0.0;
  for (const auto& p : from) {
    double best = std::numeric_limits<double>::infinity();
    if (to.size() == 1) best = distance(p, to[0]);
    for (std::size_t j = 0; j + 1 < to.size() && best > worst; ++j) {
      best = std::min(best, point_segment(p, to[j], to[j + 1]));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double nbody_energy(const NBodySystem& sys) {
  double e = 0.0;
  const std::size_t n = sys.masses.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = sys.velocities[i];
    e += 0.5 * sys.masses[i] * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (std::size_t j = i + 1; j < n; ++j) {
      e -= sys.G * sys.masses[i] * sys.masses[j] / distance(sys.positions[i], sys.positions[j]);
    }
  }
  return e;
}

Vec3 nbody_angular_momentum(const NBodySystem& sys) {
  Vec3 L{0, 0, 0};
  for (std::size_t i = 0; i < sys.masses.size(); ++i) {
    const auto& r = sys.positions[i];
    const auto& v = sys.velocities[i];
    const double m = sys.masses[i];
    L[0] += m * (r[1] * v[2] - r[2] * v[1]);
    L[1] += m * (r[2] * v[0] - r[0] * v[2]);
    L[2] += m * (r[0] * v[1] - r[1] * v[0]);
  }
  return L;
}

NBodyResult nbody_integrate(const NBodySystem& initial, const PMap& pm, double t0, double t_end,
                            double dt_tau) {
  validate(initial);
  if (!(t_end > t0)) throw std::invalid_argument("n-body needs t_end > t0");
  if (!(dt_tau > 0.0)) throw std::invalid_argument("n-body needs a positive step");
  auto tc = make_tau(pm, t0, t_end);
  if (!tc->increasing()) throw std::invalid_argument("tau is not invertible: p_h must be positive");

  const double tau_end = tc->total();
  const int steps = static_cast<int>(std::ceil(tau_end / dt_tau - 1e-12));
  const double h = tau_end / steps;
  const std::size_t n = initial.masses.size();

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) scale = std::max(scale, distance(initial.positions[i], initial.positions[j]));
  }
  const double min_distance = 1e-9 * std::max(scale, 1e-300);

  NBodySystem sys = initial;
  const double e0 = nbody_energy(sys);
  const Vec3 L0 = nbody_angular_momentum(sys);
  const double L0norm = std::hypot(L0[0], L0[1], L0[2]);

  NBodyResult out;
  out.steps = steps;
  out.in_tau.labels = nbody_labels(n, "v");
  out.in_tau.time_change = tc;
  std::vector<double> taus;
  taus.reserve(static_cast<std::size_t>(steps) + 1);

  auto record = [&](int j) {
    const double tau = j == steps ? tau_end : j * h;
    const double t = j == 0 ? t0 : (j == steps ? t_end : tc->t_at(tau));
    out.in_tau.samples.push_back({t, tau, flatten(sys)});
    taus.push_back(tau);
    const double e = nbody_energy(sys);
    out.energy_drift = std::max(out.energy_drift, std::abs(e - e0) / std::max(std::abs(e0), 1e-300));
    const Vec3 L = nbody_angular_momentum(sys);
    const double dL = std::hypot(L[0] - L0[0], L[1] - L0[1], L[2] - L0[2]);
    out.angular_momentum_drift = std::max(out.angular_momentum_drift, L0norm > 0 ? dL / L0norm : dL);
  };

  std::vector<Vec3> acc(n);
  accelerations(sys, acc, min_distance);
  record(0);
  for (int j = 1; j <= steps; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) sys.velocities[i][c] += 0.5 * h * acc[i][c];
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) sys.positions[i][c] += h * sys.velocities[i][c];
    }
    accelerations(sys, acc, min_distance);
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) sys.velocities[i][c] += 0.5 * h * acc[i][c];
    }
    record(j);
  }

  // Resample in t: tau(t_j) from quadrature, positions by cubic Hermite
  // interpolation between leapfrog steps.
  out.in_t.labels = nbody_labels(n, "Dv");
  out.in_t.time_change = tc;
  const std::size_t dim = 3 * n;
  for (const auto& s : out.in_tau.samples) {
    const double tau = tc->tau_at(s.t);
    const auto it = std::upper_bound(taus.begin(), taus.end(), tau);
    std::size_t k = it == taus.begin() ? 0 : static_cast<std::size_t>(it - taus.begin()) - 1;
    k = std::min(k, taus.size() - 2);
    const double w = taus[k + 1] - taus[k];
    const double x = std::clamp((tau - taus[k]) / w, 0.0, 1.0);
    const auto& A = out.in_tau.samples[k].state;
    const auto& B = out.in_tau.samples[k + 1].state;
    std::vector<double> state(2 * dim);
    const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x),
                 h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
    for (std::size_t c = 0; c < dim; ++c) {
      state[c] = h00 * A[c] + h10 * w * A[dim + c] + h01 * B[c] + h11 * w * B[dim + c];
      state[dim + c] = (1 - x) * A[dim + c] + x * B[dim + c];
    }
    out.in_t.samples.push_back({s.t, tau, std::move(state)});
  }
  return out;
}

double hausdorff_distance(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty path");
  return std::max(directed(a, b), directed(b, a));
}

std::vector<Vec3> body_path(const Trajectory& traj, std::size_t body) {
  std::vector<Vec3> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    out.push_back({s.state.at(3 * body), s.state.at(3 * body + 1), s.state.at(3 * body + 2)});
  }
  return out;
}

}  // namespace gencalc
