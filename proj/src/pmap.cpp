#include "gencalc/pmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "gencalc/error.hpp"
#include "gencalc/quadrature.hpp"

namespace gencalc {
namespace {

double sgn(double t) { return static_cast<double>((0.0 < t) - (t < 0.0)); }

struct FamilyEntry {
  PMapFamily family;
  std::string_view name;
};

constexpr FamilyEntry kFamilies[] = {
    {PMapFamily::classical, "classical"},
    {PMapFamily::khalil, "khalil"},
    {PMapFamily::katugampola, "katugampola"},
    {PMapFamily::symmetric_abs, "symmetric_abs"},
    {PMapFamily::sign_map, "sign_map"},
    {PMapFamily::quadratic, "quadratic"},
    {PMapFamily::cubic, "cubic"},
};

}  // namespace

std::optional<PMapFamily> parse_family(std::string_view name) {
  for (const auto& e : kFamilies) {
    if (e.name == name) return e.family;
  }
  return std::nullopt;
}

std::string_view family_name(PMapFamily family) {
  for (const auto& e : kFamilies) {
    if (e.family == family) return e.name;
  }
  return "unknown";
}

bool family_needs_alpha(PMapFamily family) {
  return family == PMapFamily::khalil || family == PMapFamily::katugampola ||
         family == PMapFamily::symmetric_abs;
}

PMap::PMap(std::string label, Eval eval, Interval domain, Weight ph_zero,
           std::optional<double> alpha, std::vector<double> singular_points,
           std::optional<PMapFamily> family)
    : label_(std::move(label)),
      eval_(std::move(eval)),
      domain_(domain),
      ph_zero_(std::move(ph_zero)),
      alpha_(alpha),
      singular_points_(std::move(singular_points)),
      family_(family) {
  std::sort(singular_points_.begin(), singular_points_.end());
}

PMap make_builtin(PMapFamily family, std::optional<double> alpha, Interval domain) {
  if (!(domain.lo < domain.hi)) throw std::invalid_argument("p-map domain is empty");

  const std::string name(family_name(family));
  if (!family_needs_alpha(family)) {
    switch (family) {
      case PMapFamily::classical:
        return PMap(name, [](double t, double h) { return t + h; }, domain,
                    [](double) { return 1.0; }, {}, {}, family);
      case PMapFamily::sign_map:
        return PMap(name, [](double t, double h) { return t + sgn(t) * h; }, domain,
                    [](double t) { return sgn(t); }, {}, {0.0}, family);
      case PMapFamily::quadratic:
        return PMap(name, [](double t, double h) { return t + h * h; }, domain,
                    [](double) { return 0.0; }, {}, {}, family);
      case PMapFamily::cubic:
        return PMap(name, [](double t, double h) { return t + h * h * h; }, domain,
                    [](double) { return 0.0; }, {}, {}, family);
      default:
        break;
    }
  }

  if (!alpha) throw std::invalid_argument(name + " requires a fractional order alpha");
  const double a = *alpha;
  if (!(a > 0.0 && a <= 1.0)) {
    throw std::invalid_argument(name + ": alpha must lie in (0, 1]");
  }

  if (family == PMapFamily::khalil || family == PMapFamily::katugampola) {
    if (domain.lo < 0.0 || domain.contains(0.0)) {
      throw std::invalid_argument(name + ": domain must exclude t <= 0");
    }
  }

  switch (family) {
    case PMapFamily::khalil:
      return PMap(
          name, [a](double t, double h) { return t + h * std::pow(t, 1.0 - a); }, domain,
          [a](double t) { return std::pow(t, 1.0 - a); }, a, {0.0}, family);
    case PMapFamily::katugampola:
      return PMap(
          name, [a](double t, double h) { return t * std::exp(h * std::pow(t, -a)); },
          domain, [a](double t) { return std::pow(t, 1.0 - a); }, a, {0.0}, family);
    case PMapFamily::symmetric_abs: {
      std::vector<double> singular;
      if (a < 1.0) singular.push_back(0.0);
      return PMap(
          name, [a](double t, double h) { return t + std::pow(std::abs(t), 1.0 - a) * h; },
          domain, [a](double t) { return std::pow(std::abs(t), 1.0 - a); }, a,
          std::move(singular), family);
    }
    default:
      break;
  }
  throw std::invalid_argument("unsupported p-map family");
}

double ph_at_zero_numeric(const PMap& pm, double t) {
  // Neville tableau on central differences, grown one level at a time.
  constexpr int kMaxLevels = 30;
  constexpr double kRelTol = 1e-9;
  const double floor = 1e-15 * std::max(1.0, std::abs(t));

  std::vector<std::vector<double>> table;
  double h = 1e-2;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < kMaxLevels; ++k, h *= 0.5) {
    std::vector<double> row(k + 1);
    row[0] = (pm(t, h) - pm(t, -h)) / (2.0 * h);
    for (int j = 1; j <= k; ++j) {
      const double factor = std::ldexp(1.0, 2 * j) - 1.0;
      row[j] = row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / factor;
    }
    const double current = row[k];
    table.push_back(std::move(row));
    if (!std::isfinite(current)) break;
    if (k > 0 && std::abs(current - previous) <= kRelTol * std::abs(current) + floor) {
      return current;
    }
    previous = current;
  }
  throw NumericalError("p_h(t,0) difference quotient did not converge at t=" +
                       std::to_string(t) + " for p-map " + pm.label());
}

double ph_at_zero(const PMap& pm, double t) {
  if (pm.has_analytic_ph()) return pm.analytic_ph(t);
  return ph_at_zero_numeric(pm, t);
}

double default_delta(const PMap& pm, double t) {
  const auto& d = pm.domain();
  double delta = 1.0;
  if (std::isfinite(d.lo)) delta = std::min(delta, t - d.lo);
  if (std::isfinite(d.hi)) delta = std::min(delta, d.hi - t);
  return 0.5 * delta;
}

namespace {

// Smallest-|h| root of p(t, h) = target over a symmetric geometric grid.
std::optional<double> solve_for_h(const PMap& pm, double t, double target, double radius,
                                  int levels) {
  std::vector<double> grid;
  grid.reserve(2 * levels + 3);
  for (int k = 0; k <= levels; ++k) grid.push_back(-std::ldexp(radius, -k));
  grid.push_back(0.0);
  for (int k = levels; k >= 0; --k) grid.push_back(std::ldexp(radius, -k));

  auto g = [&](double h) { return pm(t, h) - target; };

  std::optional<std::pair<double, double>> best;
  double best_size = std::numeric_limits<double>::infinity();
  double g_prev = g(grid[0]);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double g_next = g(grid[i + 1]);
    if (std::isfinite(g_prev) && std::isfinite(g_next)) {
      if (g_prev == 0.0 && std::abs(grid[i]) < best_size) {
        best = {grid[i], grid[i]};
        best_size = std::abs(grid[i]);
      } else if ((g_prev < 0.0) != (g_next < 0.0) || g_next == 0.0) {
        const double size = std::max(std::abs(grid[i]), std::abs(grid[i + 1]));
        if (size < best_size) {
          best = {grid[i], grid[i + 1]};
          best_size = size;
        }
      }
    }
    g_prev = g_next;
  }
  if (!best) return std::nullopt;

  auto [lo, hi] = *best;
  if (lo == hi) return lo;
  double g_lo = g(lo);
  for (int it = 0; it < 200 && lo != hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(lo) < std::abs(hi) ? lo : hi;
}

H1Evidence probe_h1(const PMap& pm, std::span<const double> ts, std::span<const double> eps,
                    double sign, const HypothesisOptions& opts) {
  H1Evidence ev;
  ev.holds = !ts.empty() && !eps.empty();
  for (double t : ts) {
    const double delta = opts.delta.value_or(default_delta(pm, t));
    if (!(delta > 0.0)) throw std::invalid_argument("sample t lies on the domain boundary");
    const double radius = opts.search_radius_factor * delta;
    const int levels = opts.levels + static_cast<int>(std::ceil(std::log2(opts.search_radius_factor)));

    std::vector<H1Sample> row;
    for (double e : eps) {
      H1Sample s{t, e, solve_for_h(pm, t, t + sign * e, radius, levels)};
      row.push_back(s);
      ev.samples.push_back(s);
      if (!s.h && ev.holds) {
        ev.holds = false;
        ev.failure = s;
        ev.reason = "no solution h of p(t,h) = t" + std::string(sign > 0 ? "+" : "-") + "eps";
      }
    }
    if (!ev.holds) continue;

    // h(t, eps) -> 0: non-increasing along the grid, halved overall, inside U_delta.
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (row[i].abs_h() > row[i - 1].abs_h() * (1.0 + 1e-9) + 1e-300) {
        ev.holds = false;
        ev.failure = row[i];
        ev.reason = "h(t,eps) grows as eps decreases";
        break;
      }
    }
    if (!ev.holds) continue;
    const double first = row.front().abs_h();
    const double last = row.back().abs_h();
    if (row.size() > 1 && last > 0.5 * first) {
      ev.holds = false;
      ev.failure = row.back();
      ev.reason = "h(t,eps) does not tend to 0";
    } else if (last >= delta) {
      ev.holds = false;
      ev.failure = row.back();
      ev.reason = "h(t,eps) leaves the neighbourhood |h| < delta";
    }
  }
  return ev;
}

}  // namespace

HypothesisReport check_hypotheses(const PMap& pm, std::span<const double> sample_ts,
                                  std::span<const double> eps_grid,
                                  const HypothesisOptions& opts) {
  for (double t : sample_ts) {
    if (!pm.domain().contains(t)) throw std::invalid_argument("sample t outside the p-map domain");
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))) {
      throw std::invalid_argument("eps grid must be positive and strictly decreasing");
    }
  }

  HypothesisReport report;
  report.h1_plus = probe_h1(pm, sample_ts, eps_grid, +1.0, opts);
  report.h1_minus = probe_h1(pm, sample_ts, eps_grid, -1.0, opts);

  report.continuity_at_zero = !sample_ts.empty();
  for (double t : sample_ts) {
    const double delta = opts.delta.value_or(default_delta(pm, t));
    const double at_zero = pm(t, 0.0);
    const double tol = 1e-9 * std::max(1.0, std::abs(at_zero));
    for (double s : {-1.0, 1.0}) {
      const double jump = std::abs(pm(t, s * std::ldexp(delta, -opts.levels)) - at_zero);
      if (!(jump <= tol)) report.continuity_at_zero = false;
    }
  }

  const auto& d = pm.domain();
  if (d.bounded()) {
    const auto r = integrate(
        [&pm](double s) { return std::abs(1.0 / ph_at_zero(pm, s)); }, d.lo, d.hi,
        pm.singular_points());
    report.h2.holds = r.converged;
    report.h2.integral = r.value;
    report.h2.error = r.error;
  }
  return report;
}

}  // namespace gencalc
