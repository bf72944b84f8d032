#pragma once

// Bessel functions of the first kind, integer order 0..6, real argument
// |x| <= 30, evaluated from the ascending power series.

namespace optocool::specfun {

inline constexpr int kMaxOrder = 6;
inline constexpr double kMaxArgument = 30.0;

// Integer order in [0, kMaxOrder]; construction validates.
class BesselOrder {
 public:
  constexpr BesselOrder(int k) : k_(k) {  // NOLINT: implicit by intent
    if (k < 0 || k > kMaxOrder) throw_range(k);
  }
  constexpr int value() const noexcept { return k_; }

 private:
  [[noreturn]] static void throw_range(int k);
  int k_;
};

double bessel_j(BesselOrder k, double x);

// J_k(x) / x^k. Finite at x = 0, where it equals 1 / (2^k k!).
double bessel_j_scaled(BesselOrder k, double x);

struct IdentityResiduals {
  double res_a;  // |J0 + J2 - 2 J1 / x|
  double res_b;  // |J1 + J3 - 4 J2 / x|
};

IdentityResiduals bessel_identity_residuals(double x);

// Absolute deviation between the K-term partial sum of
//   sum_k (-1)^k phi0^(2k+1) nbar^k / (k! (k+1)!)
// and its closed form J1(2 phi0 sqrt(nbar)) / sqrt(nbar)  (-> phi0 as nbar -> 0).
double rwa_series_check(double phi0, double nbar, int K);

// First positive root of J0(x) - J2(x), i.e. the first maximum of J1.
double first_j1_maximum();

}  // namespace optocool::specfun
