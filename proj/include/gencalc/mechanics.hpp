#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gencalc/function.hpp"
#include "gencalc/pmap.hpp"
#include "gencalc/time_change.hpp"

namespace gencalc {

struct TrajectorySample {
  double t = 0.0;
  double tau = 0.0;
  std::vector<double> state;
};

struct Trajectory {
  std::vector<std::string> labels;
  std::vector<TrajectorySample> samples;
  std::shared_ptr<const TimeChange> time_change;  // null when tau is closed form

  std::size_t dimension() const { return labels.size(); }
  /// Throws std::invalid_argument unless t is strictly increasing and every
  /// state has labels.size() entries.
  void check() const;
};

/// How tau(t) = integral_t0^t ds / p_h(s, 0) is obtained.
enum class TauMethod {
  automatic,    // closed form when the family has one, quadrature otherwise
  closed_form,  // classical, khalil, katugampola, symmetric_abs only
  quadrature,
};

/// Closed-form tau for the families whose p_h is t^(1-a), |t|^(1-a) or 1.
std::optional<double> closed_form_tau(const PMap& pm, double t0, double t);

// m D^2 x = -m k^2 x, m D^2 y = -m k^2 y

struct CentralForceConfig {
  PMap pm;
  double k = 1.0;
  double x0 = 1.0;
  double y0 = 0.0;
  double Dx0 = 0.0;  // (p_h x')(t0)
  double Dy0 = 1.0;
  double t0 = 0.0;
  double m = 1.0;
};

struct EllipseConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// c1 = Dx(t0)/k, c2 = x(t0), d1 = Dy(t0)/k, d2 = y(t0).
EllipseConstants ellipse_constants(const CentralForceConfig& cfg);

struct CentralForceSolution {
  RealFunction x;
  RealFunction y;
};

/// x and y as functions of t (with analytic t-derivatives) for residual checks.
CentralForceSolution central_force_functions(const CentralForceConfig& cfg,
                                             TauMethod method = TauMethod::automatic);

/// Samples (x, y, Dx, Dy) at strictly increasing ts >= t0.
Trajectory central_force_solve(const CentralForceConfig& cfg, std::span<const double> ts,
                               TauMethod method = TauMethod::automatic);

/// max over samples of |(d1 x - c1 y)^2 + (d2 x - c2 y)^2 - (d1 c2 - c1 d2)^2|.
double ellipse_invariant(const Trajectory& traj, const EllipseConstants& c);

// Free fall: D^2 x = 0, D^2 y = -g.

struct GravityConfig {
  PMap pm;
  double x0 = 0.0;
  double u0 = 0.0;  // Dx(t0)
  double y0 = 0.0;
  double v0 = 0.0;  // Dy(t0)
  double g = 9.8;
  double t0 = 0.0;
};

/// x = x0 + u0 tau, y = y0 + v0 tau - g Phi with Phi(t) = integral_t0^t tau(s) / p_h(s) ds.
/// The closed form uses Phi = tau^2 / 2 with closed-form tau; the quadrature
/// route evaluates both integrals numerically. State is (x, y, Dx, Dy).
Trajectory gravity_solve(const GravityConfig& cfg, std::span<const double> ts,
                         TauMethod method = TauMethod::automatic);

/// Classical free fall x0 + u0 t, y0 + v0 t - g t^2 / 2.
std::array<double, 2> classical_fall(const GravityConfig& cfg, double t);

// Drag: m p_h v' = m g with p_h = t^(1-a) sigma^(a-1) cosh^2(c (a + t^a)).

inline constexpr double kCesiumSigma = 9192631770.0;

struct DragConfig {
  double m = 1.0;
  double g = 9.8;
  double C = 0.5;
  double rho = 1.2;
  double A = 0.5;
  double alpha = 0.9;
  double sigma = kCesiumSigma;
};

void validate(const DragConfig& cfg);

double terminal_velocity(const DragConfig& cfg);
/// c = sqrt(2) sigma^(1-a) / (2 a m) sqrt(g C rho A m)
double drag_constant(const DragConfig& cfg);
/// v(t) = v_term tanh(c (a + t^a))
double drag_velocity(const DragConfig& cfg, double t);
/// dv/dt
double drag_velocity_derivative(const DragConfig& cfg, double t);
/// p_h(t, 0) of the drag family
double drag_ph(const DragConfig& cfg, double t);
/// v_term - g integral_t^inf ds / p_h(s, 0), by quadrature.
double drag_velocity_quadrature(const DragConfig& cfg, double t);
/// |p_h v' - g|; NaN where cosh^2 overflows.
double drag_residual(const DragConfig& cfg, double t);
/// Smallest t with c (a + t^a) >= arg.
double drag_saturation_time(const DragConfig& cfg, double arg = 20.0);

/// State is (v, p_h, residual); tau = (v(t) - v(0)) / g.
Trajectory drag_solve(const DragConfig& cfg, std::span<const double> ts);

// Gravitational n-body system, integrated in tau and mapped back to t.

using Vec3 = std::array<double, 3>;

struct NBodySystem {
  std::vector<double> masses;
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;  // dq/dtau = p_h r'
  double G = 1.0;
};

void validate(const NBodySystem& sys);

double nbody_energy(const NBodySystem& sys);
Vec3 nbody_angular_momentum(const NBodySystem& sys);

struct NBodyResult {
  Trajectory in_t;    // positions at t_j = t(tau_j), Hermite-interpolated at tau(t_j)
  Trajectory in_tau;  // kick-drift-kick samples
  double energy_drift = 0.0;            // max relative deviation from the initial energy
  double angular_momentum_drift = 0.0;  // max relative deviation of |L - L0|
  int steps = 0;
};

/// Leapfrog in tau over [tau(t0), tau(t_end)] with the step adjusted down so
/// that it divides the interval. Throws NumericalError on a close encounter
/// and std::invalid_argument when tau is not increasing.
NBodyResult nbody_integrate(const NBodySystem& sys, const PMap& pm, double t0, double t_end,
                            double dt_tau);

/// Symmetric Hausdorff distance between two polylines through the listed points.
double hausdorff_distance(std::span<const Vec3> a, std::span<const Vec3> b);

/// Positions of body i along a trajectory produced by nbody_integrate.
std::vector<Vec3> body_path(const Trajectory& traj, std::size_t body);

}  // namespace gencalc
