#include "gencalc/units.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace gencalc {
namespace {

void check(double alpha, double sigma) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
}

std::string format_exponent(double e) {
  std::ostringstream out;
  out.precision(6);
  out << e;
  return out.str();
}

}  // namespace

double sigma_from_environment() {
  if (const char* env = std::getenv("GENCALC_SIGMA")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) return v;
    throw std::invalid_argument("GENCALC_SIGMA must be a positive number");
  }
  return kDefaultSigma;
}

AlphaQuantity from_si(double value, int length_power, double time_power, double alpha,
                      double sigma) {
  check(alpha, sigma);
  return {value * std::pow(sigma, -time_power * (alpha - 1.0)), length_power, time_power, alpha};
}

double to_si(const AlphaQuantity& q, double sigma) {
  check(q.alpha, sigma);
  return q.magnitude * std::pow(sigma, q.time_power * (q.alpha - 1.0));
}

AlphaQuantity convert_velocity(double v, double alpha, double sigma) {
  return from_si(v, 1, -1.0, alpha, sigma);
}

AlphaQuantity convert_acceleration(double a, double alpha, double sigma) {
  return from_si(a, 1, -2.0, alpha, sigma);
}

AlphaQuantity alpha_time(double t, double power, double alpha) {
  check(alpha, 1.0);
  return {std::pow(t, power * alpha), 0, power, alpha};
}

AlphaQuantity operator*(const AlphaQuantity& a, const AlphaQuantity& b) {
  if (a.alpha != b.alpha) throw std::invalid_argument("cannot combine different alpha units");
  return {a.magnitude * b.magnitude, a.length_power + b.length_power, a.time_power + b.time_power,
          a.alpha};
}

AlphaQuantity operator*(double c, const AlphaQuantity& q) {
  return {c * q.magnitude, q.length_power, q.time_power, q.alpha};
}

std::string unit_string(const AlphaQuantity& q) {
  std::string out;
  if (q.length_power == 1) out = "m";
  else if (q.length_power != 0) out = "m^" + std::to_string(q.length_power);
  if (q.time_power == 0.0) return out.empty() ? "1" : out;

  const double e = std::abs(q.time_power) * q.alpha;
  std::string sec = "sec";
  if (e != 1.0) sec += "^" + format_exponent(e);
  if (q.time_power < 0) return (out.empty() ? "1" : out) + "/" + sec;
  return out.empty() ? sec : out + "*" + sec;
}

std::pair<int, double> parse_si_unit(const std::string& unit) {
  if (unit == "m") return {1, 0.0};
  if (unit == "m/s" || unit == "m/sec") return {1, -1.0};
  if (unit == "m/s2" || unit == "m/s^2" || unit == "m/sec2" || unit == "m/sec^2") return {1, -2.0};
  throw std::invalid_argument("unknown unit '" + unit + "' (expected m, m/s or m/s2)");
}

}  // namespace gencalc
