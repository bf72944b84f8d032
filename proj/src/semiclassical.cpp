#include "optocool/semiclassical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "optocool/errors.hpp"

namespace optocool {

void UniversalParams::validate() const {
  if (!(gamma > 0.0)) throw DomainError("universal params: gamma must be positive");
  if (!(n >= 0.0)) throw DomainError("universal params: n must be non-negative");
  if (!std::isfinite(dtilde) || !std::isfinite(r1) || !std::isfinite(r2) || !std::isfinite(n)) {
    throw DomainError("universal params must be finite");
  }
}

void MechanicalMode::validate() const {
  if (!(omega_m > 0.0) || !std::isfinite(omega_m)) throw DomainError("omega_m must be > 0");
  if (!(gamma_m > 0.0)) throw DomainError("gamma_m must be > 0");
  if (!(nbar_T >= 0.0)) throw DomainError("nbar_T must be >= 0");
  if (!(g0 > 0.0)) throw DomainError("g0 must be > 0");
}

UniversalParams universal_params(const ModelDescriptor& model, double a0, double theta0,
                                 double gamma) {
  const WirtingerDerivs d = hamiltonian_derivatives(model, std::polar(a0, -theta0));
  const Complex r = Complex(0.0, -1.0) * std::polar(1.0, 2.0 * theta0) * d.d_anti;
  UniversalParams up;
  up.dtilde = -d.d_mixed;
  up.r1 = r.real();
  up.r2 = r.imag();
  up.gamma = gamma;
  up.n = a0 * a0;
  up.theta0 = theta0;
  return up;
}

UniversalParams universal_params(const ModelDescriptor& model, const FixedPoint& fp,
                                 double gamma) {
  UniversalParams up = universal_params(model, fp.a0, fp.theta0, gamma);
  up.n = fp.n;
  return up;
}

namespace {

// (dtilde^2 - omega^2 + gamma^2/4 - |r|^2)^2 + gamma^2 omega^2
double spectral_denominator(const UniversalParams& up, double omega) {
  const double a = up.dtilde * up.dtilde - omega * omega + 0.25 * up.gamma * up.gamma - up.r_abs2();
  return a * a + up.gamma * up.gamma * omega * omega;
}

}  // namespace

double photon_number_spectrum(const UniversalParams& up, double omega) {
  const double p = -up.dtilde + omega + up.r2;
  const double q = 0.5 * up.gamma + up.r1;
  return up.n * up.gamma * up.gamma * (p * p + q * q) / spectral_denominator(up, omega);
}

double optomechanical_damping(const UniversalParams& up, double g0, double omega) {
  return 4.0 * up.n * g0 * g0 * up.gamma * omega * (up.r2 - up.dtilde) /
         spectral_denominator(up, omega);
}

double damping_via_asymmetry(const UniversalParams& up, double g0, double omega) {
  const double s_plus = photon_number_spectrum(up, omega) / up.gamma;
  const double s_minus = photon_number_spectrum(up, -omega) / up.gamma;
  return g0 * g0 * (s_plus - s_minus);
}

double residual_phonons(const UniversalParams& up, double omega_m) {
  const double shift = up.r2 - up.dtilde;
  if (!(shift > 0.0)) throw NotCoolingError("not cooling: r2 - dtilde <= 0");
  if (!(omega_m > 0.0)) throw DomainError("residual_phonons requires omega_m > 0");
  const double a = omega_m - shift;
  const double b = 0.5 * up.gamma + up.r1;
  return (a * a + b * b) / (4.0 * shift * omega_m);
}

double min_phonons(double gamma_opt, double gamma_m, double nbar_r, double nbar_T) {
  const double total = gamma_opt + gamma_m;
  if (total == 0.0) throw DomainError("min_phonons: both damping rates vanish");
  return (gamma_opt * nbar_r + gamma_m * nbar_T) / total;
}

Eigenvalues fluctuation_eigenvalues(const UniversalParams& up) {
  const Complex root = std::sqrt(Complex(up.r_abs2() - up.dtilde * up.dtilde, 0.0));
  const Complex centre(-0.5 * up.gamma, 0.0);
  return {centre + root, centre - root};
}

double max_real_eigenvalue(const UniversalParams& up) {
  const Eigenvalues ev = fluctuation_eigenvalues(up);
  return std::max(ev.plus.real(), ev.minus.real());
}

bool is_stable(const UniversalParams& up) { return max_real_eigenvalue(up) < 0.0; }

double exceptional_point_gap(const UniversalParams& up) {
  return up.r_abs2() - up.dtilde * up.dtilde;
}

ZeroHeatingDiagnostics zero_heating_diagnostics(const UniversalParams& up) {
  ZeroHeatingDiagnostics z;
  z.r1_offset = up.r1 + 0.5 * up.gamma;
  z.omega_opt = up.r2 - up.dtilde;
  if (z.omega_opt > 0.0) z.nbar_r_at_opt = residual_phonons(up, z.omega_opt);
  return z;
}

namespace {

void require_stable(const UniversalParams& up) {
  const double margin = up.dtilde * up.dtilde - up.r_abs2() + 0.25 * up.gamma * up.gamma;
  if (!(margin > 0.0) || !is_stable(up)) {
    throw UnstableFixedPointError("unstable fixed point: correlators undefined");
  }
}

}  // namespace

CorrelatorSet correlator_initial_conditions(const UniversalParams& up) {
  up.validate();
  require_stable(up);
  const double r2abs = up.r_abs2();
  const double s2 =
      0.5 * r2abs / (up.dtilde * up.dtilde - r2abs + 0.25 * up.gamma * up.gamma);
  const Complex s1 = up.r() * (1.0 + 2.0 * s2) / Complex(up.gamma, -2.0 * up.dtilde);
  return {s1, Complex(s2, 0.0), Complex(1.0 + s2, 0.0), std::conj(s1)};
}

CorrelatorSet correlator_initial_conditions_linear(const UniversalParams& up) {
  up.validate();
  require_stable(up);
  const Complex r = up.r();
  const Complex i(0.0, 1.0);
  // M s = -(r, 0, r*) for s = (S1, S2, S4)
  std::array<std::array<Complex, 4>, 3> a{{
      {2.0 * i * up.dtilde - up.gamma, 2.0 * r, 0.0, -r},
      {std::conj(r), -up.gamma, r, 0.0},
      {0.0, 2.0 * std::conj(r), -2.0 * i * up.dtilde - up.gamma, -std::conj(r)},
  }};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    std::swap(a[col], a[pivot]);
    for (int row = col + 1; row < 3; ++row) {
      const Complex f = a[row][col] / a[col][col];
      for (int k = col; k < 4; ++k) a[row][k] -= f * a[col][k];
    }
  }
  std::array<Complex, 3> s;
  for (int row = 2; row >= 0; --row) {
    Complex acc = a[row][3];
    for (int k = row + 1; k < 3; ++k) acc -= a[row][k] * s[k];
    s[row] = acc / a[row][row];
  }
  return {s[0], s[1], 1.0 + s[1], s[2]};
}

namespace {

// exp(M t) = exp(-gamma t/2) [cosh(k t) I + sinh(k t)/k N],
// N = [[i dtilde, r], [conj r, -i dtilde]], N^2 = k^2 I, k^2 = |r|^2 - dtilde^2.
// At the exceptional point k = 0 this is the secular form I + t N.
struct Propagator {
  Complex p11, p12, p21, p22;
};

Propagator propagator(const UniversalParams& up, double t) {
  const double k2 = up.r_abs2() - up.dtilde * up.dtilde;
  double c = 1.0;
  double s = t;  // sinh(k t)/k
  if (k2 > 0.0) {
    const double k = std::sqrt(k2);
    c = std::cosh(k * t);
    s = k * t < 1e-4 ? t * (1.0 + k2 * t * t / 6.0) : std::sinh(k * t) / k;
  } else if (k2 < 0.0) {
    const double w = std::sqrt(-k2);
    c = std::cos(w * t);
    s = w * t < 1e-4 ? t * (1.0 + k2 * t * t / 6.0) : std::sin(w * t) / w;
  }
  const double decay = std::exp(-0.5 * up.gamma * t);
  const Complex i(0.0, 1.0);
  return {decay * (c + s * i * up.dtilde), decay * s * up.r(), decay * s * std::conj(up.r()),
          decay * (c - s * i * up.dtilde)};
}

CorrelatorSet propagate(const Propagator& p, const CorrelatorSet& s0) {
  return {p.p11 * s0.s1 + p.p12 * s0.s2, p.p21 * s0.s1 + p.p22 * s0.s2,
          p.p11 * s0.s3 + p.p12 * s0.s4, p.p21 * s0.s3 + p.p22 * s0.s4};
}

}  // namespace

CorrelatorSet correlators_time(const UniversalParams& up, double t) {
  if (!(t >= 0.0)) throw DomainError("correlators_time requires t >= 0");
  const CorrelatorSet s0 = correlator_initial_conditions(up);
  return propagate(propagator(up, t), s0);
}

std::vector<double> spectrum_via_transform(const UniversalParams& up,
                                           std::span<const double> omega_grid, Execution exec) {
  const CorrelatorSet s0 = correlator_initial_conditions(up);
  for (std::size_t i = 1; i < omega_grid.size(); ++i) {
    if (std::abs(omega_grid[i] - omega_grid[i - 1]) > up.gamma / 20.0 * (1.0 + 1e-12)) {
      throw DomainError("grid too coarse: spacing must be <= gamma/20");
    }
  }

  const Eigenvalues ev = fluctuation_eigenvalues(up);
  const double decay = -max_real_eigenvalue(up);
  const double max_imag = std::max(std::abs(ev.plus.imag()), std::abs(ev.minus.imag()));
  // run until exp(-decay T) is negligible, capped for near-unstable points
  const double horizon = std::min(std::max(40.0 / up.gamma, 30.0 / decay), 4000.0 / up.gamma);
  const double dt_max = std::min(0.01 / up.gamma, 0.1 / std::max(max_imag, up.gamma));
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt_max));
  const double dt = horizon / static_cast<double>(steps);

  // n * sum_i S_i(t) on the grid and its time derivative at both ends
  std::vector<Complex> f(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) {
    const CorrelatorSet s = propagate(propagator(up, dt * static_cast<double>(j)), s0);
    f[j] = up.n * (s.s1 + s.s2 + s.s3 + s.s4);
  }
  const Complex i(0.0, 1.0);
  auto derivative = [&](double t) {
    const CorrelatorSet s = propagate(propagator(up, t), s0);
    const Complex m11 = i * up.dtilde - 0.5 * up.gamma, m22 = -i * up.dtilde - 0.5 * up.gamma;
    const Complex d1 = m11 * s.s1 + up.r() * s.s2, d2 = std::conj(up.r()) * s.s1 + m22 * s.s2;
    const Complex d3 = m11 * s.s3 + up.r() * s.s4, d4 = std::conj(up.r()) * s.s3 + m22 * s.s4;
    return up.n * (d1 + d2 + d3 + d4);
  };
  const Complex df0 = derivative(0.0);
  const Complex dfT = derivative(horizon);

  std::vector<double> out(omega_grid.size());
  parallel_for(
      omega_grid.size(),
      [&](std::size_t k) {
        const double w = omega_grid[k];
        const Complex rot = std::polar(1.0, w * dt);
        Complex phase(1.0, 0.0);
        Complex acc = 0.5 * f[0];
        for (std::size_t j = 1; j < steps; ++j) {
          if ((j & 1023u) == 0) {
            phase = std::polar(1.0, w * dt * static_cast<double>(j));
          } else {
            phase *= rot;
          }
          acc += phase * f[j];
        }
        const Complex end_phase = std::polar(1.0, w * horizon);
        acc += 0.5 * end_phase * f[steps];
        // trapezoid with Euler-Maclaurin end correction
        const Complex g0 = i * w * f[0] + df0;
        const Complex gT = end_phase * (i * w * f[steps] + dfT);
        const Complex integral = dt * acc - dt * dt / 12.0 * (gT - g0);
        // S(-t) = conj S(t) folds the negative half-line onto 2 Re
        out[k] = 2.0 * integral.real() * up.gamma;
      },
      exec);
  return out;
}

double damping_peak_frequency(const UniversalParams& up) {
  if (!(up.r2 - up.dtilde > 0.0)) return 0.0;
  // omega / D(omega) is unimodal on omega > 0; bracket then golden-section.
  auto h = [&](double w) { return w / spectral_denominator(up, w); };
  double hi = up.gamma;
  const double scale = std::abs(up.dtilde) + std::sqrt(up.r_abs2()) + up.gamma;
  while (hi < 100.0 * scale && h(2.0 * hi) > h(hi)) hi *= 2.0;
  double lo = 0.0;
  hi *= 2.0;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double hc = h(c), hd = h(d);
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    if (hc > hd) {
      hi = d;
      d = c;
      hd = hc;
      c = hi - invphi * (hi - lo);
      hc = h(c);
    } else {
      lo = c;
      c = d;
      hc = hd;
      d = lo + invphi * (hi - lo);
      hd = h(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace optocool
