#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "optocool/cavity_models.hpp"
#include "optocool/parallel.hpp"

namespace optocool {

// Local quantities at a fixed point that determine every cooling formula:
// effective detuning dtilde = -d2H/dalpha dalpha* and squeezing
// r = r1 + i r2 = -i exp(2 i theta0) d2H/dalpha*^2.
struct UniversalParams {
  double dtilde = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double gamma = 1.0;
  double n = 0.0;
  double theta0 = 0.0;

  Complex r() const { return {r1, r2}; }
  double r_abs2() const { return r1 * r1 + r2 * r2; }
  void validate() const;
};

struct MechanicalMode {
  double omega_m = 0.1;
  double gamma_m = 1e-7;
  double nbar_T = 0.0;
  double g0 = 1e-3;

  void validate() const;
  // gamma_m << gamma is assumed by the leading-order formulas.
  bool weakly_damped(double gamma = 1.0) const { return gamma_m <= 0.1 * gamma; }

  friend bool operator==(const MechanicalMode&, const MechanicalMode&) = default;
};

struct CorrelatorSet {
  Complex s1, s2, s3, s4;
};

struct Eigenvalues {
  Complex plus;
  Complex minus;
};

UniversalParams universal_params(const ModelDescriptor& model, const FixedPoint& fp,
                                 double gamma = 1.0);
UniversalParams universal_params(const ModelDescriptor& model, double a0, double theta0,
                                 double gamma = 1.0);

// S_nn(omega) * gamma, dimensionless.
double photon_number_spectrum(const UniversalParams& up, double omega);

// Gamma_opt(omega) from the closed form.
double optomechanical_damping(const UniversalParams& up, double g0, double omega);

// g0^2 [S_nn(omega) - S_nn(-omega)].
double damping_via_asymmetry(const UniversalParams& up, double g0, double omega);

// Residual phonon number from detailed balance. Throws NotCoolingError when
// r2 - dtilde <= 0.
double residual_phonons(const UniversalParams& up, double omega_m);

double min_phonons(double gamma_opt, double gamma_m, double nbar_r, double nbar_T);

Eigenvalues fluctuation_eigenvalues(const UniversalParams& up);
double max_real_eigenvalue(const UniversalParams& up);
bool is_stable(const UniversalParams& up);

// |r|^2 - dtilde^2; eigenvalues are real where this is >= 0.
double exceptional_point_gap(const UniversalParams& up);

struct ZeroHeatingDiagnostics {
  double r1_offset = 0.0;              // r1 + gamma/2
  double omega_opt = 0.0;              // r2 - dtilde
  std::optional<double> nbar_r_at_opt;  // empty: not cooling
};

ZeroHeatingDiagnostics zero_heating_diagnostics(const UniversalParams& up);

// Equal-time correlators from the closed forms. Throws
// UnstableFixedPointError off the stable region.
CorrelatorSet correlator_initial_conditions(const UniversalParams& up);

// Same quantities from the 3x3 steady-state linear system.
CorrelatorSet correlator_initial_conditions_linear(const UniversalParams& up);

// Exact propagation of (S1, S2) and (S3, S4) with exp(M t),
// M = [[i dtilde - gamma/2, r], [conj(r), -i dtilde - gamma/2]].
CorrelatorSet correlators_time(const UniversalParams& up, double t);

// Numerical Fourier transform of n * sum_i S_i(t), returned as S_nn * gamma
// on the given grid. The grid must resolve gamma (spacing <= gamma/20).
std::vector<double> spectrum_via_transform(const UniversalParams& up,
                                           std::span<const double> omega_grid,
                                           Execution exec = Execution::parallel);

// omega > 0 maximizing Gamma_opt(omega); 0 when Gamma_opt <= 0 for all omega > 0.
double damping_peak_frequency(const UniversalParams& up);

}  // namespace optocool
