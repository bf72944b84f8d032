#pragma once

#include <complex>
#include <string_view>
#include <vector>

namespace optocool {

using Complex = std::complex<double>;

enum class ModelKind { linear, kerr, josephson };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

// A driven cavity in internal units: energies in hbar*gamma, rates in gamma.
//
// drive is the linear/Kerr drive amplitude epsilon, or E_J*/(hbar gamma) for
// the Josephson model. kerr is K/gamma (Kerr only), phi0 the zero-point phase
// fluctuation (Josephson only).
struct ModelDescriptor {
  ModelKind kind = ModelKind::josephson;
  double delta = 0.0;
  double drive = 0.0;
  double kerr = 0.0;
  double phi0 = 0.06;

  static ModelDescriptor linear(double delta, double drive);
  static ModelDescriptor kerr_cavity(double delta, double drive, double kerr);
  static ModelDescriptor josephson(double delta, double ej, double phi0);

  void validate() const;

  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

enum class Branch { mono, plus, minus, unstable };

std::string_view to_string(Branch branch);

// Classical steady state alpha0 = a0 * exp(-i theta0).
struct FixedPoint {
  double a0 = 0.0;
  double theta0 = 0.0;
  double n = 0.0;
  Branch branch = Branch::mono;
  bool stable = true;

  Complex alpha() const { return std::polar(a0, -theta0); }
};

// Wirtinger derivatives of the classical Hamiltonian, in hbar*gamma units:
// d1 = dH/dalpha*, d_mixed = d2H/dalpha dalpha*, d_anti = d2H/dalpha*^2.
struct WirtingerDerivs {
  Complex d1;
  double d_mixed = 0.0;
  Complex d_anti;
};

double classical_hamiltonian(const ModelDescriptor& model, Complex alpha);

WirtingerDerivs hamiltonian_derivatives(const ModelDescriptor& model, Complex alpha);

// Central-difference estimate of the same derivatives from
// classical_hamiltonian on alpha = x + i y. Fourth-order stencils.
WirtingerDerivs fd_hamiltonian_derivatives(const ModelDescriptor& model, Complex alpha, double h);

// |dH/dalpha* - i gamma alpha / 2|, zero at a fixed point.
double fixed_point_residual(const ModelDescriptor& model, Complex alpha, double gamma = 1.0);

struct SearchSpec {
  double amplitude_max = 0.0;  // <= 0 selects default_amplitude_max(phi0)
  int brackets = 400;
};

// 1.5 * 4 / (2 phi0): covers the first lobe of J1 with margin.
double default_amplitude_max(double phi0);

// All classical fixed points, sorted by descending photon number.
// Throws ConvergenceError if a bracketed root cannot be polished to
// residual <= 1e-10.
std::vector<FixedPoint> find_fixed_points(const ModelDescriptor& model, double gamma = 1.0,
                                          const SearchSpec& search = {});

int count_stable(const std::vector<FixedPoint>& points);

struct BifurcationSearch {
  double drive_cap = 5000.0;
  double relative_width = 1e-6;
  SearchSpec search;
};

// Smallest Josephson drive E_J*/(hbar gamma) with at least two stable fixed
// points, by bisection on the stable-solution count. model.drive is ignored.
double bifurcation_threshold(const ModelDescriptor& model_family, double gamma = 1.0,
                             const BifurcationSearch& opts = {});

// Fold of the resonant (delta = 0) bistable branch:
//   gamma x*^2 / (4 phi0^2 J1(x*)),  x* the first root of J0 = J2.
double resonant_bifurcation_estimate(double phi0, double gamma = 1.0);

}  // namespace optocool
