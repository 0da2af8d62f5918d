#pragma once

#include <string>
#include <utility>

namespace gencalc {

/// magnitude * m^length_power * (sec^alpha)^time_power.
/// Classical quantities carry alpha = 1.
struct AlphaQuantity {
  double magnitude = 0.0;
  int length_power = 0;
  double time_power = 0.0;
  double alpha = 1.0;

  bool is_length() const { return length_power == 1 && time_power == 0.0; }
};

inline constexpr double kDefaultSigma = 9192631770.0;

/// Reads GENCALC_SIGMA when set to a positive number, else kDefaultSigma.
double sigma_from_environment();

/// Uses 1 sec = sigma^(1-alpha) sec^alpha on an SI value in m^L sec^T.
AlphaQuantity from_si(double value, int length_power, double time_power, double alpha,
                      double sigma = kDefaultSigma);
double to_si(const AlphaQuantity& q, double sigma = kDefaultSigma);

/// v m/sec -> v sigma^(alpha-1) m/sec^alpha
AlphaQuantity convert_velocity(double v, double alpha, double sigma = kDefaultSigma);
/// a m/sec^2 -> a sigma^(2(alpha-1)) m/sec^(2 alpha)
AlphaQuantity convert_acceleration(double a, double alpha, double sigma = kDefaultSigma);

/// t^(power alpha) as a quantity in (sec^alpha)^power, t in seconds.
AlphaQuantity alpha_time(double t, double power, double alpha);

/// Exponents add; both factors must share alpha.
AlphaQuantity operator*(const AlphaQuantity& a, const AlphaQuantity& b);
AlphaQuantity operator*(double c, const AlphaQuantity& q);

/// "m/sec^0.99", "m/sec^1.98", "m/sec", "m".
std::string unit_string(const AlphaQuantity& q);

/// Parses "m/s", "m/s2", "m/s^2", "m/sec", "m/sec^2", "m" into (L, T).
std::pair<int, double> parse_si_unit(const std::string& unit);

}  // namespace gencalc
