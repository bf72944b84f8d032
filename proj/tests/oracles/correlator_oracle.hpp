#pragma once

// Brute-force time-domain oracle: RK4 on the 2x2 fluctuation system and
// composite Simpson for the Fourier integral. Independent of the closed
// propagator and of the library transform.

#include <array>
#include <complex>

#include "optocool/semiclassical.hpp"

namespace oracle {

using C = std::complex<double>;

struct Pair {
  C a, b;
};

inline Pair rhs(const optocool::UniversalParams& up, Pair s) {
  const C r(up.r1, up.r2);
  const C d11(-0.5 * up.gamma, up.dtilde);
  const C d22(-0.5 * up.gamma, -up.dtilde);
  return {d11 * s.a + r * s.b, std::conj(r) * s.a + d22 * s.b};
}

inline Pair rk4_step(const optocool::UniversalParams& up, Pair s, double h) {
  auto add = [](Pair x, Pair k, double f) { return Pair{x.a + f * k.a, x.b + f * k.b}; };
  const Pair k1 = rhs(up, s);
  const Pair k2 = rhs(up, add(s, k1, h / 2));
  const Pair k3 = rhs(up, add(s, k2, h / 2));
  const Pair k4 = rhs(up, add(s, k3, h));
  return {s.a + h / 6 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a),
          s.b + h / 6 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b)};
}

inline optocool::CorrelatorSet rk4_correlators(const optocool::UniversalParams& up, double t,
                                               int steps) {
  const auto s0 = optocool::correlator_initial_conditions_linear(up);
  Pair p{s0.s1, s0.s2}, q{s0.s3, s0.s4};
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    p = rk4_step(up, p, h);
    q = rk4_step(up, q, h);
  }
  return {p.a, p.b, q.a, q.b};
}

// S_nn(omega) * gamma = 2 Re int_0^T e^{i omega t} n sum S_i(t) dt, Simpson on
// an even number of intervals; the RK4 trajectory is generated on the fly.
inline double simpson_spectrum(const optocool::UniversalParams& up, double omega, double T,
                               int intervals) {
  const auto s0 = optocool::correlator_initial_conditions_linear(up);
  Pair p{s0.s1, s0.s2}, q{s0.s3, s0.s4};
  const double h = T / intervals;
  C acc = 0;
  for (int i = 0; i <= intervals; ++i) {
    const double t = i * h;
    const C f = up.n * (p.a + p.b + q.a + q.b) * std::exp(C(0.0, omega * t));
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * f;
    p = rk4_step(up, p, h);
    q = rk4_step(up, q, h);
  }
  return 2.0 * (acc * (h / 3.0)).real() * up.gamma;
}

}  // namespace oracle
