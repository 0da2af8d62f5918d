#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gencalc/interval.hpp"

namespace gencalc {

enum class PMapFamily {
  classical,      // t + h
  khalil,         // t + h t^(1-a)
  katugampola,    // t exp(h t^-a)
  symmetric_abs,  // t + |t|^(1-a) h
  sign_map,       // t + sgn(t) h
  quadratic,      // t + h^2
  cubic,          // t + h^3
};

std::optional<PMapFamily> parse_family(std::string_view name);
std::string_view family_name(PMapFamily family);
bool family_needs_alpha(PMapFamily family);

/// The map p(t, h) that defines a generalized derivative through
/// [f(p(t,h)) - f(t)] / h. Immutable once built.
class PMap {
 public:
  using Eval = std::function<double(double, double)>;
  using Weight = std::function<double(double)>;

  PMap(std::string label, Eval eval, Interval domain, Weight ph_zero = {},
       std::optional<double> alpha = {}, std::vector<double> singular_points = {},
       std::optional<PMapFamily> family = {});

  double operator()(double t, double h) const { return eval_(t, h); }

  const std::string& label() const { return label_; }
  const Interval& domain() const { return domain_; }
  std::optional<double> alpha() const { return alpha_; }
  std::optional<PMapFamily> family() const { return family_; }

  bool has_analytic_ph() const { return static_cast<bool>(ph_zero_); }
  double analytic_ph(double t) const { return ph_zero_(t); }

  /// Points where p_h(., 0) vanishes, blows up or jumps; quadratures split there.
  std::span<const double> singular_points() const { return singular_points_; }

 private:
  std::string label_;
  Eval eval_;
  Interval domain_;
  Weight ph_zero_;
  std::optional<double> alpha_;
  std::vector<double> singular_points_;
  std::optional<PMapFamily> family_;
};

/// Builds a catalog map. Throws std::invalid_argument for an alpha outside
/// (0, 1] on the fractional families, or a khalil/katugampola domain that
/// reaches t <= 0.
PMap make_builtin(PMapFamily family, std::optional<double> alpha, Interval domain);

/// p_h(t, 0): the analytic form when the map carries one, otherwise an
/// extrapolated central difference in h refined until two successive
/// estimates agree to 1e-9 relative. Throws NumericalError if they never do.
double ph_at_zero(const PMap& pm, double t);

/// Numeric p_h(t, 0) regardless of whether an analytic form exists.
double ph_at_zero_numeric(const PMap& pm, double t);

/// Default half-width of the h-neighbourhood: 0.5 * min(t - a, b - t, 1).
double default_delta(const PMap& pm, double t);

struct H1Sample {
  double t = 0.0;
  double eps = 0.0;
  std::optional<double> h;  // absent when no bracket was found

  double abs_h() const { return h ? std::abs(*h) : std::numeric_limits<double>::infinity(); }
};

struct H1Evidence {
  bool holds = false;
  std::vector<H1Sample> samples;
  std::optional<H1Sample> failure;  // first offending (t, eps)
  std::string reason;
};

struct H2Evidence {
  bool holds = false;
  double integral = 0.0;  // integral over I of |1 / p_h(s, 0)|
  double error = 0.0;
};

struct HypothesisReport {
  H1Evidence h1_plus;
  H1Evidence h1_minus;
  H2Evidence h2;
  bool continuity_at_zero = false;
  // lim eps / h(t, eps) is not decided numerically.
  std::string eps_over_h_limit = "assumed";
};

struct HypothesisOptions {
  std::optional<double> delta;       // overrides default_delta
  double search_radius_factor = 64;  // brackets are searched for |h| < factor * delta
  int levels = 40;                   // geometric grid +-delta 2^-k, k = 0..levels
};

/// Numerically probes H1+, H1-, H2 and continuity of p at h = 0.
/// eps_grid must be strictly decreasing and positive.
HypothesisReport check_hypotheses(const PMap& pm, std::span<const double> sample_ts,
                                  std::span<const double> eps_grid,
                                  const HypothesisOptions& opts = {});

}  // namespace gencalc
