#pragma once

// Quad-precision ascending series for J_k, used only as a test oracle.

#include <quadmath.h>

namespace oracle {

inline __float128 bessel_j_q(int k, __float128 x) {
  const __float128 half = x / 2;
  __float128 term = 1;
  for (int i = 1; i <= k; ++i) term *= half / i;
  __float128 sum = term;
  const __float128 h2 = half * half;
  for (int m = 1; m < 200; ++m) {
    term *= -h2 / (static_cast<__float128>(m) * (m + k));
    sum += term;
    if (fabsq(term) < static_cast<__float128>(1e-40) * fabsq(sum) && m > 5) break;
  }
  return sum;
}

inline double bessel_j(int k, double x) { return static_cast<double>(bessel_j_q(k, x)); }

// First positive root of J0 - J2 by bisection in quad precision.
inline double j1_first_maximum() {
  __float128 lo = 1, hi = 2.5;
  for (int i = 0; i < 200; ++i) {
    const __float128 mid = (lo + hi) / 2;
    const __float128 f = bessel_j_q(0, mid) - bessel_j_q(2, mid);
    if (f > 0) lo = mid; else hi = mid;
  }
  return static_cast<double>((lo + hi) / 2);
}

// Frozen from bessel_j_q(1, 1).
inline constexpr double kJ1At1 = 0.44005058574493351596;

}  // namespace oracle
