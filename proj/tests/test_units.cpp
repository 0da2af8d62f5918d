#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "gencalc/units.hpp"

using namespace gencalc;

TEST_CASE("velocity and acceleration in alpha-seconds") {
  const auto v = convert_velocity(3.0, 0.99);
  CHECK(v.magnitude == doctest::Approx(3.0 * std::pow(9192631770.0, -0.01)).epsilon(1e-14));
  CHECK(std::round(v.magnitude * 100) / 100 == 2.38);
  CHECK(unit_string(v) == "m/sec^0.99");

  const auto a = convert_acceleration(9.8, 0.99);
  CHECK(a.magnitude == doctest::Approx(9.8 * std::pow(9192631770.0, -0.02)).epsilon(1e-14));
  CHECK(std::round(a.magnitude * 100) / 100 == 6.19);
  CHECK(unit_string(a) == "m/sec^1.98");
}

TEST_CASE("round trip through alpha units") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  std::uniform_real_distribution<double> alpha(0.05, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x = value(rng);
    const double a = alpha(rng);
    for (double T : {-1.0, -2.0}) {
      const auto q = from_si(x, 1, T, a);
      CHECK(to_si(q) == doctest::Approx(x).epsilon(1e-12));
    }
  }
}

TEST_CASE("alpha = 1 leaves magnitudes unchanged") {
  CHECK(convert_velocity(3.0, 1.0).magnitude == 3.0);
  CHECK(convert_acceleration(9.8, 1.0).magnitude == 9.8);
  CHECK(unit_string(convert_acceleration(9.8, 1.0)) == "m/sec^2");
}

TEST_CASE("conversion is continuous in alpha") {
  const double v = 3.0;
  double previous = std::abs(convert_velocity(v, 0.999).magnitude - v);
  for (double gap : {1e-4, 1e-5, 1e-6, 1e-8}) {
    const double d = std::abs(convert_velocity(v, 1.0 - gap).magnitude - v);
    CHECK(d < previous);
    previous = d;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("distance = velocity * time is dimensionally consistent") {
  const double alpha = 0.9;
  const auto v = convert_velocity(2.0, alpha);
  const auto t = alpha_time(3.0, 1.0, alpha);
  const auto d = v * t;
  CHECK(d.is_length());
  CHECK(unit_string(d) == "m");
  CHECK(d.magnitude == doctest::Approx(v.magnitude * std::pow(3.0, alpha)));

  const auto g = convert_acceleration(9.8, alpha);
  const auto t2 = alpha_time(3.0, 2.0, alpha);
  CHECK((0.5 * (g * t2)).is_length());
  CHECK_FALSE((g * t).is_length());
  CHECK_THROWS_AS(v * alpha_time(1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("unit parsing") {
  CHECK(parse_si_unit("m") == std::pair<int, double>{1, 0.0});
  CHECK(parse_si_unit("m/s") == std::pair<int, double>{1, -1.0});
  CHECK(parse_si_unit("m/sec") == std::pair<int, double>{1, -1.0});
  CHECK(parse_si_unit("m/s2") == std::pair<int, double>{1, -2.0});
  CHECK(parse_si_unit("m/s^2") == std::pair<int, double>{1, -2.0});
  CHECK_THROWS_AS(parse_si_unit("kg"), std::invalid_argument);
}

TEST_CASE("sigma from the environment") {
  ::unsetenv("GENCALC_SIGMA");
  CHECK(sigma_from_environment() == kDefaultSigma);
  ::setenv("GENCALC_SIGMA", "100", 1);
  CHECK(sigma_from_environment() == 100.0);
  CHECK(convert_velocity(3.0, 0.5, sigma_from_environment()).magnitude == doctest::Approx(0.3));
  ::setenv("GENCALC_SIGMA", "abc", 1);
  CHECK_THROWS_AS(sigma_from_environment(), std::invalid_argument);
  ::setenv("GENCALC_SIGMA", "-4", 1);
  CHECK_THROWS_AS(sigma_from_environment(), std::invalid_argument);
  ::unsetenv("GENCALC_SIGMA");
}

TEST_CASE("invalid alpha and sigma") {
  CHECK_THROWS_AS(convert_velocity(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(convert_velocity(1.0, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(convert_velocity(1.0, 0.5, -1.0), std::invalid_argument);
}
