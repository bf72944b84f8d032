#include "optocool/specfun.hpp"

#include <cmath>
#include <string>

#include "optocool/errors.hpp"

namespace optocool::specfun {

namespace {

// Unevaluated sum hi + lo; enough headroom that the alternating series keeps
// full double accuracy at the top of the supported range, where individual
// terms reach ~1e11.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble add(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  DoubleDouble t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble mul(DoubleDouble a, DoubleDouble b) {
  const double p = a.hi * b.hi;
  double e = std::fma(a.hi, b.hi, -p);
  e += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p, e);
}

inline DoubleDouble div(DoubleDouble a, double b) {
  const double q1 = a.hi / b;
  // remainder a - q1 * b, exact in the leading part
  const double p = q1 * b;
  const double pe = std::fma(q1, b, -p);
  DoubleDouble r = two_sum(a.hi, -p);
  r.lo -= pe;
  r.lo += a.lo;
  const double q2 = (r.hi + r.lo) / b;
  return quick_two_sum(q1, q2);
}

constexpr int kMaxTerms = 60;

// Series for J_k(x) / x^k:
//   sum_m (-1)^m (x/2)^(2m) / (m! (m+k)! 2^k)
double scaled_series(int k, double x) {
  const double half = 0.5 * x;
  const double q_hi = half * half;
  const DoubleDouble minus_q{-q_hi, -std::fma(half, half, -q_hi)};

  double lead = 1.0;
  for (int i = 1; i <= k; ++i) lead *= 2.0 * i;  // 2^k k!, exact for k <= 6
  DoubleDouble term = div(DoubleDouble{1.0, 0.0}, lead);
  DoubleDouble sum = term;

  for (int m = 1; m < kMaxTerms; ++m) {
    term = div(mul(term, minus_q), static_cast<double>(m) * static_cast<double>(m + k));
    sum = add(sum, term);
    if (std::abs(term.hi) < 1e-17 * std::abs(sum.hi)) break;
  }
  return sum.hi + sum.lo;
}

void check_argument(double x) {
  if (!(std::abs(x) <= kMaxArgument)) {
    throw DomainError("bessel argument " + std::to_string(x) + " outside |x| <= 30");
  }
}

}  // namespace

void BesselOrder::throw_range(int k) {
  throw DomainError("bessel order " + std::to_string(k) + " outside [0, 6]");
}

double bessel_j_scaled(BesselOrder k, double x) {
  check_argument(x);
  return scaled_series(k.value(), x);
}

double bessel_j(BesselOrder k, double x) {
  check_argument(x);
  const int n = k.value();
  // x^n is exact enough here: at most 6 roundings against a 1e-12 budget.
  double xn = 1.0;
  for (int i = 0; i < n; ++i) xn *= x;
  return xn * scaled_series(n, x);
}

IdentityResiduals bessel_identity_residuals(double x) {
  if (x == 0.0) throw DomainError("identity residuals undefined at x = 0");
  check_argument(x);
  const double j0 = bessel_j(0, x);
  const double j1 = bessel_j(1, x);
  const double j2 = bessel_j(2, x);
  const double j3 = bessel_j(3, x);
  return {std::abs(j0 + j2 - 2.0 * j1 / x), std::abs(j1 + j3 - 4.0 * j2 / x)};
}

double rwa_series_check(double phi0, double nbar, int K) {
  if (!(phi0 > 0.0) || !(nbar >= 0.0) || K < 1) {
    throw DomainError("rwa_series_check requires phi0 > 0, nbar >= 0, K >= 1");
  }
  const double root = std::sqrt(nbar);
  const double x = 2.0 * phi0 * root;
  check_argument(x);

  // partial sum over k = 0..K, accumulated with Neumaier compensation
  double sum = 0.0;
  double comp = 0.0;
  double term = phi0;  // k = 0
  for (int k = 0; k <= K; ++k) {
    if (k > 0) term *= -phi0 * phi0 * nbar / (static_cast<double>(k) * (k + 1));
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  sum += comp;

  // J1(2 phi0 sqrt n) / sqrt n = 2 phi0 * J1(x) / x
  const double closed = 2.0 * phi0 * bessel_j_scaled(1, x);
  return std::abs(sum - closed);
}

double first_j1_maximum() {
  // J0 - J2 = 2 J1'; sign change bracketed by [1, 2.5]
  double lo = 1.0;
  double hi = 2.5;
  auto f = [](double x) { return bessel_j(0, x) - bessel_j(2, x); };
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace optocool::specfun
