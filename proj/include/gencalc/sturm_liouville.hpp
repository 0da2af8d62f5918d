#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gencalc/function.hpp"
#include "gencalc/pmap.hpp"
#include "gencalc/time_change.hpp"

namespace gencalc {

/// -D(P Dy) + q y = lambda w y on [a, b] with
///   y(a) cos mu - (P Dy)(a) sin mu = 0,  y(b) cos nu + (P Dy)(b) sin nu = 0.
struct SLProblem {
  PMap pm;
  double a = 0.0;
  double b = 1.0;
  RealFunction P = RealFunction::constant_fn(1.0);
  RealFunction q = RealFunction::constant_fn(0.0);
  RealFunction w = RealFunction::constant_fn(1.0);
  double mu = 0.0;
  double nu = 0.0;
  std::vector<double> breakpoints;  // jumps of P, q or w inside (a, b)
};

/// Throws std::invalid_argument unless a < b lies within the closure of the
/// p-map domain, mu, nu are in [0, pi), 1/(P p_h), q/p_h and w/p_h are
/// integrable and 1/p_h does not vanish on an interval.
void validate(const SLProblem& prob);

/// Sorted, deduplicated breakpoints of the problem and its p-map inside (a, b).
std::vector<double> all_breakpoints(const SLProblem& prob);

/// tau(t) = integral_a^t ds / (P(s) p_h(s, 0)).
TimeChange time_change(const SLProblem& prob, int n_grid = 64);

/// y with its generalized derivative Dy = p_h y'.
struct SLSolution {
  RealFunction y;
  RealFunction Dy;
};

/// A sin(sqrt(lambda) tau) + B cos(sqrt(lambda) tau) for q = 0, w = 1, P = 1;
/// sinh/cosh for lambda < 0. lambda = 0 is rejected; use linear_solution.
SLSolution closed_form_solution(const SLProblem& prob, double lambda, double A, double B);

/// The lambda = 0 solution A tau(t) + B.
SLSolution linear_solution(const SLProblem& prob, double A, double B);

/// Classical weighted form -(p y')' + Q y = lambda W y with
/// p = P p_h, Q = q / p_h, W = w / p_h.
struct ClassicalSL {
  RealFunction p;
  RealFunction Q;
  RealFunction W;
  double a = 0.0;
  double b = 1.0;
  double mu = 0.0;
  double nu = 0.0;
  std::string left_bc;   // y(a) cos mu - (p y')(a) sin mu = 0
  std::string right_bc;  // y(b) cos nu + (p y')(b) sin nu = 0
};

ClassicalSL to_classical(const SLProblem& prob);

enum class Side { plus, minus };

struct Spectrum {
  std::vector<double> lambda_plus;   // increasing
  std::vector<double> lambda_minus;  // decreasing (towards -infinity)
  std::vector<int> oscillation_plus;
  std::vector<int> oscillation_minus;
  // integral_a^b sqrt((w / p_h)_+-) ds; absent when zero
  std::optional<double> asymptotic_plus;
  std::optional<double> asymptotic_minus;
  // integral_a^b sqrt((w / P)_+-) / p_h ds, the denominators of the
  // transformed problem; equal to the above when p_h = 1
  std::optional<double> weyl_plus;
  std::optional<double> weyl_minus;
};

struct ShootingOptions {
  double lambda_max = 1e8;  // scan window is |lambda| <= lambda_max
  double lambda_min = 1e-6;
  int n_grid = 64;          // base grid of the time change
  double rtol = 1e-12;
};

/// (theta(c) + nu) / pi for the Pruefer angle started at mu. Eigenvalues sit
/// where this is a positive integer m; the eigenfunction then has m - 1
/// interior zeros.
class PrueferShooter {
 public:
  explicit PrueferShooter(const SLProblem& prob, const ShootingOptions& opts = {});

  double angle_count(double lambda) const;
  const TimeChange& tau() const { return *tau_; }
  /// P (lambda w - q) at time tau.
  double coefficient(double lambda, double tau) const;
  /// Same, with t kept strictly inside the given piece between tau breaks.
  double coefficient_in_piece(double lambda, double tau, std::size_t piece) const;
  std::span<const double> tau_breaks() const { return tau_breaks_; }
  const SLProblem& problem() const { return prob_; }
  double rtol() const { return rtol_; }

 private:
  SLProblem prob_;
  std::shared_ptr<const TimeChange> tau_;
  std::vector<double> tau_breaks_;  // 0, images of breakpoints, c
  std::vector<double> t_breaks_;    // a, breakpoints, b
  bool constant_coefficients_ = false;
  double rtol_;
};

/// First n_per_side eigenvalues on each side that has an asymptotic sequence.
/// Requires P p_h > 0 a.e. Throws NumericalError when an expected eigenvalue
/// is not bracketed inside the scan window.
Spectrum shoot_eigenvalues(const SLProblem& prob, int n_per_side,
                           const ShootingOptions& opts = {});

/// +-n^2 pi^2 / (integral_a^b sqrt((w / p_h)_+-) ds)^2.
/// Throws std::domain_error when the integral vanishes.
double asymptotic_estimate(const SLProblem& prob, int n, Side side);

/// integral_a^b sqrt((w / p_h)_+-) ds, or nullopt when it is zero.
std::optional<double> asymptotic_denominator(const SLProblem& prob, Side side);

/// integral_a^b sqrt((w / P)_+-) / p_h ds, or nullopt when it is zero.
std::optional<double> weyl_denominator(const SLProblem& prob, Side side);

struct EigenfunctionSample {
  double tau = 0.0;
  double t = 0.0;
  double y = 0.0;
  double Dy = 0.0;   // p_h y'
  double dtau = 0.0; // dy/dtau = P Dy
};

/// Pruefer reconstruction on a uniform tau grid, scaled to max |y| = 1.
std::vector<EigenfunctionSample> eigenfunction(const SLProblem& prob, double lambda,
                                               int n_samples = 4001,
                                               const ShootingOptions& opts = {});

/// Sup over the grid of the fourth-order difference residuals of
/// y_tau = z and z_tau = -P (lambda w - q) y, each relative to max(1, sup of
/// the corresponding right-hand side). Stencils touching a coefficient
/// jump are skipped.
double eigenfunction_residual(const SLProblem& prob, double lambda,
                              std::span<const EigenfunctionSample> samples);

struct DegenerateSample {
  double lambda = 0.0;
  bool boundary_ok = false;    // y(-1) = y(1) = 0 exactly
  bool continuity_ok = false;  // p_h y' continuous across 0
  double residual = 0.0;       // max |D^2 y + lambda y| at the probe points
  bool pass = false;
};

struct DegenerateReport {
  std::vector<DegenerateSample> samples;
  bool all_pass = false;
};

/// The sign map on (-1, 1), P = 1, q = 0, Dirichlet: y = sin(sqrt(lambda)(|t| - 1))
/// is an eigenfunction for every real lambda.
DegenerateReport degenerate_check(std::span<const double> lambdas);

}  // namespace gencalc
