#include <cmath>

#include "doctest.h"
#include "rswz/errors.hpp"
#include "rswz/specfun.hpp"

using namespace rswz;

namespace {

// Independent bisection solve of w e^w = x on a caller-supplied bracket.
double w_by_bisection(double x, double lo, double hi) {
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < x)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("lambert w at landmark points") {
  CHECK(lambert_w0(0.0).value == 0.0);
  CHECK(lambert_w0(M_E).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lambert_w0(-1.0 / M_E).value == doctest::Approx(-1.0).epsilon(1e-12));
  const double w1 = w_by_bisection(1.0, 0.5, 0.6);
  CHECK(lambert_w0(1.0).value == doctest::Approx(w1).epsilon(1e-12));
}

TEST_CASE("lambert w inverts x e^x") {
  for (double x : {-0.9, -0.5, -0.1, 0.1, 1.0, 3.0, 10.0}) {
    const double y = x * std::exp(x);
    CHECK(lambert_w0(y).value == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("lambert w residuals stay at solver tolerance across magnitudes") {
  for (int k = 0; k <= 150; ++k) {
    const double x = std::pow(10.0, -3.0 + 15.0 * k / 150.0);
    const WResult r = lambert_w0(x);
    CHECK(r.residual <= 1e-12 * std::max(1.0, x));
    CHECK(r.iterations <= 50);
  }
}

TEST_CASE("lambert w near the branch point") {
  for (double d : {1e-9, 1e-6, 1e-3}) {
    const double x = -1.0 / M_E + d;
    const WResult r = lambert_w0(x);
    CHECK(r.value > -1.0 + 0.0);
    CHECK(r.value < 0.0);
    CHECK(r.residual <= 1e-12);
  }
  CHECK_THROWS_AS(lambert_w0(-1.0 / M_E - 1e-9), DomainError);
}

TEST_CASE("lambert w asymptotic band for large arguments") {
  for (double x : {1e3, 1e6, 1e9, 1e12}) {
    const double w = lambert_w0(x).value;
    CHECK(std::abs(w - (std::log(x) - std::log(std::log(x)))) <= 1.0);
  }
}

TEST_CASE("f_gamma_q hand values and domain") {
  // gamma = 0, q = 1: f(x) = x^x
  CHECK(f_gamma_q(0.0, 1.0, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(f_gamma_q(0.0, 2.0, 4.0) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(f_gamma_q(0.7, 3.0, std::exp(0.7)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(f_gamma_q(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(f_gamma_q(0.0, 0.0, 2.0), DomainError);
  CHECK(f_gamma_q_log(0.0, 1.0, 1000.0) == doctest::Approx(1000.0 * std::log(1000.0)));
}

TEST_CASE("f_inverse round trips against the forward map") {
  for (double gamma : {0.0, 0.3, 1.0})
    for (double q : {1.0, 2.0})
      for (int k = 0; k <= 20; ++k) {
        const double x = std::exp(gamma) + 0.5 * k;
        const double y = f_gamma_q(gamma, q, x);
        CHECK(f_inverse(gamma, q, y) == doctest::Approx(x).epsilon(1e-10));
      }
}

TEST_CASE("f_inverse agrees with direct bisection") {
  const double gamma = 0.3, q = 2.0, y = 50.0;
  double lo = std::exp(gamma), hi = 20.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid * (std::log(mid) - gamma) / q < std::log(y))
      lo = mid;
    else
      hi = mid;
  }
  CHECK(f_inverse(gamma, q, y) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
}

TEST_CASE("f_inverse boundary and log-space variants") {
  CHECK(f_inverse(0.4, 2.0, 1.0) == doctest::Approx(std::exp(0.4)).epsilon(1e-13));
  CHECK_THROWS_AS(f_inverse(0.0, 1.0, 0.5), DomainError);
  const double x = f_inverse_from_log(1.0, 2.0, 1e6);
  CHECK(f_gamma_q_log(1.0, 2.0, x) == doctest::Approx(1e6).epsilon(1e-8));
  CHECK_THROWS_AS(f_inverse_from_log(0.0, 1.0, -1.0), DomainError);
}
