#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bessel_oracle.hpp"
#include "optocool/specfun.hpp"

using namespace optocool::specfun;

TEST_CASE("bessel values at the origin") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  for (int k = 2; k <= kMaxOrder; ++k) CHECK(bessel_j(k, 0.0) == 0.0);
}

TEST_CASE("J1(1) against the frozen quad-precision series") {
  CHECK(std::abs(bessel_j(1, 1.0) - oracle::kJ1At1) <= 1e-12 * oracle::kJ1At1);
  CHECK(std::abs(oracle::bessel_j(1, 1.0) - oracle::kJ1At1) <= 1e-16);
}

TEST_CASE("relative error against the oracle over the supported range") {
  double worst = 0.0;
  for (int k = 0; k <= kMaxOrder; ++k) {
    for (int i = 1; i <= 3000; ++i) {
      const double x = 30.0 * i / 3000.0;
      const double ref = oracle::bessel_j(k, x);
      if (std::abs(ref) < 1e-3) continue;  // relative error is meaningless near zeros
      worst = std::max(worst, std::abs(bessel_j(k, x) - ref) / std::abs(ref));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("absolute error near zeros stays at rounding level") {
  for (int k = 0; k <= 3; ++k) {
    for (int i = 1; i <= 600; ++i) {
      const double x = 0.05 * i;
      CHECK(std::abs(bessel_j(k, x) - oracle::bessel_j(k, x)) <= 1e-14);
    }
  }
}

TEST_CASE("parity") {
  for (int k = 0; k <= kMaxOrder; ++k) {
    for (double x : {0.3, 1.7, 4.2, 11.0, 29.5}) {
      const double sign = (k % 2) ? -1.0 : 1.0;
      CHECK(bessel_j(k, -x) == doctest::Approx(sign * bessel_j(k, x)).epsilon(1e-15));
    }
  }
}

TEST_CASE("domain limits") {
  CHECK_THROWS_AS(bessel_j(0, 30.0001), std::domain_error);
  CHECK_THROWS_AS(bessel_j(2, -31.0), std::domain_error);
  CHECK_NOTHROW(bessel_j(6, 30.0));
  CHECK_THROWS_AS(BesselOrder(7), std::domain_error);
  CHECK_THROWS_AS(BesselOrder(-1), std::domain_error);
  CHECK_THROWS_AS(bessel_j(0, std::nan("")), std::domain_error);
}

TEST_CASE("scaled form") {
  CHECK(bessel_j_scaled(1, 0.0) == 0.5);
  CHECK(bessel_j_scaled(3, 0.0) == doctest::Approx(1.0 / 48.0));
  for (double x : {1e-6, 0.3, 2.0, 9.0}) {
    CHECK(bessel_j_scaled(2, x) == doctest::Approx(bessel_j(2, x) / (x * x)).epsilon(1e-12));
  }
}

TEST_CASE("recurrence residuals") {
  for (double x : {1.0, 2.0, 10.0}) {
    const auto r = bessel_identity_residuals(x);
    CHECK(r.res_a <= 1e-10);
    CHECK(r.res_b <= 1e-10);
  }
  for (int i = 0; i <= 200; ++i) {
    const double x = 1e-3 * std::pow(3e4, i / 200.0);
    const auto r = bessel_identity_residuals(x);
    CHECK(r.res_a <= 1e-10);
    CHECK(r.res_b <= 1e-10);
  }
  CHECK_THROWS_AS(bessel_identity_residuals(0.0), std::domain_error);
}

TEST_CASE("classical series identity") {
  CHECK(rwa_series_check(0.06, 0.0, 1) == 0.0);
  CHECK(rwa_series_check(0.06, 100.0, 20) <= 1e-12);
  CHECK(rwa_series_check(0.2, 25.0, 10) < rwa_series_check(0.2, 25.0, 2));

  double prev = rwa_series_check(0.2, 25.0, 1);
  for (int K = 2; K <= 12; ++K) {
    const double cur = rwa_series_check(0.2, 25.0, K);
    CHECK((cur < prev || cur <= 1e-16));
    prev = cur;
  }
  CHECK_THROWS_AS(rwa_series_check(0.0, 1.0, 3), std::domain_error);
  CHECK_THROWS_AS(rwa_series_check(0.06, -1.0, 3), std::domain_error);
  CHECK_THROWS_AS(rwa_series_check(0.06, 1.0, 0), std::domain_error);
  CHECK_THROWS_AS(rwa_series_check(1.0, 300.0, 5), std::domain_error);
}

TEST_CASE("first maximum of J1") {
  const double x = first_j1_maximum();
  CHECK(x == doctest::Approx(oracle::j1_first_maximum()).epsilon(1e-13));
  CHECK(x == doctest::Approx(1.8412).epsilon(1e-4));
}
