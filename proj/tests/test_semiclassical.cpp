#include <doctest.h>

#include <cmath>
#include <vector>

#include "bessel_oracle.hpp"
#include "correlator_oracle.hpp"
#include "optocool/cavity_models.hpp"
#include "optocool/errors.hpp"
#include "optocool/semiclassical.hpp"

using namespace optocool;

namespace {

UniversalParams make(double dtilde, double r1, double r2, double n = 1.0) {
  UniversalParams up;
  up.dtilde = dtilde;
  up.r1 = r1;
  up.r2 = r2;
  up.n = n;
  return up;
}

FixedPoint branch_point(const ModelDescriptor& m, Branch b) {
  for (const auto& fp : find_fixed_points(m)) {
    if (fp.branch == b) return fp;
  }
  FAIL("branch missing");
  return {};
}

}  // namespace

TEST_CASE("universal params per model") {
  const auto lin = ModelDescriptor::linear(-0.3, 0.8);
  const auto up = universal_params(lin, find_fixed_points(lin).at(0));
  CHECK(up.dtilde == doctest::Approx(-0.3));
  CHECK(up.r1 == 0.0);
  CHECK(up.r2 == 0.0);

  const auto kerr = ModelDescriptor::kerr_cavity(0.2, 0.6, 0.4);
  const auto fp = find_fixed_points(kerr).at(0);
  const auto uk = universal_params(kerr, fp);
  CHECK(uk.dtilde == doctest::Approx(0.2 + 0.8 * fp.n).epsilon(1e-12));
  CHECK(std::abs(uk.r1) <= 1e-12);
  CHECK(uk.r2 == doctest::Approx(0.4 * fp.n).epsilon(1e-12));

  const auto jm = ModelDescriptor::josephson(0.0, 200.0, 0.06);
  const auto uj = universal_params(jm, find_fixed_points(jm).at(0));
  CHECK(std::abs(uj.dtilde) <= 1e-14);
  CHECK(std::abs(uj.r2) <= 1e-14);

  CHECK_THROWS_AS(make(0, 0, 0, -1).validate(), DomainError);
}

TEST_CASE("spectrum examples") {
  CHECK(photon_number_spectrum(make(0, 0, 0, 100), 0.0) == doctest::Approx(400.0));
  // zero at omega = -(r2 - dtilde) when r1 = -gamma/2
  const auto z = make(-0.2, -0.5, 0.15, 30);
  CHECK(photon_number_spectrum(z, -(0.15 + 0.2)) <= 1e-28);
  // r = 0 factorizes into a single Lorentzian
  for (double w : {-2.0, -0.4, 0.0, 0.7, 3.0}) {
    const auto up = make(0.35, 0, 0, 12);
    CHECK(photon_number_spectrum(up, w) ==
          doctest::Approx(12.0 / ((0.35 + w) * (0.35 + w) + 0.25)).epsilon(1e-12));
  }
}

TEST_CASE("damping examples") {
  const auto flat = make(0.3, -0.2, 0.3, 50);
  for (double w : {-1.0, 0.2, 2.0}) CHECK(optomechanical_damping(flat, 1e-3, w) == 0.0);
  for (double w : {-1.0, 0.2, 2.0}) CHECK(std::abs(damping_via_asymmetry(flat, 1e-3, w)) <= 1e-18);

  // resolved sideband: Gamma ~ 4 n g0^2 / gamma
  const double wm = 50.0, g0 = 1e-3, n = 100.0;
  const auto lin = make(-wm, 0, 0, n);
  CHECK(optomechanical_damping(lin, g0, wm) == doctest::Approx(4 * n * g0 * g0).epsilon(1e-3));
  CHECK(damping_via_asymmetry(make(-0.5, 0, 0, 3), 1e-2, 0.5) > 0.0);

  const auto up = make(0.13, -0.31, 0.42, 77);
  CHECK(damping_via_asymmetry(up, 0.01, 0.3) ==
        doctest::Approx(optomechanical_damping(up, 0.01, 0.3)).epsilon(1e-12));
}

TEST_CASE("residual and minimum phonons") {
  CHECK(residual_phonons(make(-0.1, -0.5, 0.2), 0.3) <= 1e-30);
  for (double wm : {0.1, 0.5, 2.0}) {
    CHECK(residual_phonons(make(-wm, 0, 0), wm) == doctest::Approx(std::pow(1.0 / (4 * wm), 2)).epsilon(1e-12));
  }
  for (double r1 : {-0.9, -0.3, 0.0, 0.4}) {
    const double wm = 0.25;
    const auto up = make(-0.05, r1, wm - 0.05);
    CHECK(residual_phonons(up, wm) ==
          doctest::Approx(std::pow(1.0 / (4 * wm), 2) * std::pow(1 + 2 * r1, 2)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(residual_phonons(make(0.2, 0, 0.1), 0.3), NotCoolingError);

  CHECK(min_phonons(0.0, 2e-7, 0.3, 2778.0) == 2778.0);
  const double g = 1282.39, gm = 0.5;
  CHECK(min_phonons(g, gm, 0.075, 2778.0) == doctest::Approx(1.15).epsilon(0.01 / 1.15));
  CHECK(min_phonons(g, 0.302, 0.075, 2778.0) == doctest::Approx(0.73).epsilon(0.01 / 0.73));
  CHECK_THROWS_AS(min_phonons(0.0, 0.0, 0.1, 1.0), DomainError);

  // strictly between nbar_r and nbar_T
  const double m = min_phonons(0.3, 0.01, 0.2, 50.0);
  CHECK(m > 0.2);
  CHECK(m < 50.0);
}

TEST_CASE("eigenvalues and exceptional points") {
  const auto e1 = fluctuation_eigenvalues(make(0.3, 0, 0));
  CHECK(e1.plus == Complex(-0.5, 0.3));
  CHECK(e1.minus == Complex(-0.5, -0.3));
  const auto ep = fluctuation_eigenvalues(make(0.3, 0.3 * std::cos(0.4), 0.3 * std::sin(0.4)));
  CHECK(std::abs(ep.plus - Complex(-0.5, 0)) <= 1e-7);
  CHECK(std::abs(ep.minus - Complex(-0.5, 0)) <= 1e-7);
  const auto un = make(0, 0.6, 0);
  CHECK(fluctuation_eigenvalues(un).plus.real() == doctest::Approx(0.1));
  CHECK_FALSE(is_stable(un));
  CHECK(max_real_eigenvalue(un) == doctest::Approx(0.1));

  CHECK(exceptional_point_gap(make(0.4, 0, 0)) == doctest::Approx(-0.16));
  CHECK(exceptional_point_gap(make(0.5, 0.3, 0.4)) == doctest::Approx(0.0));
  // real eigenvalues iff gap >= 0
  for (double r1 : {0.0, 0.1, 0.2, 0.3, 0.45}) {
    const auto up = make(0.3, r1, 0.1);
    const auto ev = fluctuation_eigenvalues(up);
    CHECK((exceptional_point_gap(up) >= 0) == (ev.plus.imag() == 0.0));
  }
}

TEST_CASE("EP along the resonant bistable branch") {
  // locate the sign change of the gap by bisection in E
  auto gap = [](double E) {
    const auto m = ModelDescriptor::josephson(0.0, E, 0.06);
    return exceptional_point_gap(universal_params(m, branch_point(m, Branch::plus)));
  };
  double lo = 410.0, hi = 5000.0;
  const double glo = gap(lo), ghi = gap(hi);
  if (glo * ghi < 0) {
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      if ((gap(mid) < 0) == (glo < 0)) lo = mid; else hi = mid;
    }
    CHECK(std::abs(gap(0.5 * (lo + hi))) <= 1e-6);
  } else {
    CHECK(glo * ghi >= 0);  // no EP on this branch segment
  }
}

TEST_CASE("zero-heating diagnostics") {
  const auto z = zero_heating_diagnostics(make(-0.1, -0.5, 0.3));
  CHECK(z.r1_offset == 0.0);
  CHECK(z.omega_opt == doctest::Approx(0.4));
  REQUIRE(z.nbar_r_at_opt);
  CHECK(*z.nbar_r_at_opt == 0.0);

  const auto lin = zero_heating_diagnostics(make(-0.6, 0, 0));
  CHECK(lin.r1_offset == 0.5);
  CHECK(lin.omega_opt == doctest::Approx(0.6));
  CHECK(*lin.nbar_r_at_opt == doctest::Approx(std::pow(1 / (4 * 0.6), 2)));
  CHECK_FALSE(zero_heating_diagnostics(make(0.6, 0, 0)).nbar_r_at_opt);

  for (double E : {420.0, 750.0, 1500.0}) {
    const auto m = ModelDescriptor::josephson(0.0, E, 0.06);
    const auto up = universal_params(m, branch_point(m, Branch::plus));
    CHECK(std::abs(zero_heating_diagnostics(up).r1_offset) <= 1e-8);
  }
}

TEST_CASE("initial correlators") {
  const auto vac = correlator_initial_conditions(make(0.4, 0, 0));
  CHECK(vac.s1 == Complex(0, 0));
  CHECK(vac.s2 == Complex(0, 0));
  CHECK(vac.s3 == Complex(1, 0));
  CHECK(vac.s4 == Complex(0, 0));

  const auto q = correlator_initial_conditions(make(0.0, 0.25, 0.0));
  CHECK(q.s2.real() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  for (const auto& up : {make(0.2, -0.3, 0.1), make(-0.7, 0.1, 0.45), make(0.05, 0.4, -0.2)}) {
    const auto a = correlator_initial_conditions(up);
    const auto b = correlator_initial_conditions_linear(up);
    CHECK(std::abs(a.s1 - b.s1) <= 1e-12);
    CHECK(std::abs(a.s2 - b.s2) <= 1e-12);
    CHECK(std::abs(a.s3 - b.s3) <= 1e-12);
    CHECK(std::abs(a.s4 - b.s4) <= 1e-12);
    CHECK((a.s3 - a.s2) == Complex(1, 0));
    CHECK(a.s4 == std::conj(a.s1));
  }
  CHECK_THROWS_AS(correlator_initial_conditions(make(0, 0.6, 0)), UnstableFixedPointError);
}

TEST_CASE("time-dependent correlators") {
  const auto up = make(0.3, -0.2, 0.15, 4);
  const auto c0 = correlators_time(up, 0.0);
  const auto i0 = correlator_initial_conditions(up);
  CHECK(std::abs(c0.s1 - i0.s1) <= 1e-15);
  CHECK(std::abs(c0.s3 - i0.s3) <= 1e-15);

  const auto diag = make(0.7, 0, 0);
  for (double t : {0.5, 3.0}) {
    const auto c = correlators_time(diag, t);
    CHECK(std::abs(c.s3 - std::exp(Complex(-0.5, 0.7) * t)) <= 1e-14);
    CHECK(std::abs(c.s1) == 0.0);
    CHECK(std::abs(c.s2) == 0.0);
    CHECK(std::abs(c.s4) == 0.0);
  }

  // against RK4 of the same linear system, including near and at the EP
  const double r = 0.3;
  for (const auto& p : {make(0.3, -0.2, 0.15), make(0.0, 0.35, 0.0),
                        make(r, r * std::cos(1.1), r * std::sin(1.1)), make(-0.4, 0.1, -0.2)}) {
    for (double t : {0.7, 4.0, 11.0}) {
      const auto a = correlators_time(p, t);
      const auto b = oracle::rk4_correlators(p, t, 20000);
      CHECK(std::abs(a.s1 - b.s1) <= 1e-10);
      CHECK(std::abs(a.s2 - b.s2) <= 1e-10);
      CHECK(std::abs(a.s3 - b.s3) <= 1e-10);
      CHECK(std::abs(a.s4 - b.s4) <= 1e-10);
    }
    // decay at t = 20 / gamma bounded by the slowest eigenvalue
    const auto late = correlators_time(p, 20.0);
    const double bound = 10.0 * std::exp(max_real_eigenvalue(p) * 20.0) * (1.0 + 20.0);
    CHECK(std::abs(late.s1) <= bound);
    CHECK(std::abs(late.s3) <= bound);
  }
  CHECK_THROWS_AS(correlators_time(up, -1.0), DomainError);
}

TEST_CASE("numerical transform against the closed form and the brute-force oracle") {
  std::vector<double> grid;
  for (int i = -60; i <= 60; ++i) grid.push_back(0.05 * i);

  const auto lin = make(-0.8, 0, 0, 5);
  const auto s = spectrum_via_transform(lin, grid);
  std::size_t peak = 0;
  for (std::size_t i = 1; i < s.size(); ++i) if (s[i] > s[peak]) peak = i;
  CHECK(grid[peak] == doctest::Approx(0.8).epsilon(1e-9));

  for (const auto& up : {make(0.3, -0.2, 0.15, 7), make(-0.2, 0.3, 0.1, 2)}) {
    const auto tr = spectrum_via_transform(up, grid);
    double peak_val = 0;
    for (double w : grid) peak_val = std::max(peak_val, photon_number_spectrum(up, w));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double ref = photon_number_spectrum(up, grid[i]);
      CHECK(std::abs(tr[i] - ref) <= 1e-3 * std::max(ref, 1e-3 * peak_val));
    }
    for (double w : {-0.6, 0.0, 0.45}) {
      const double brute = oracle::simpson_spectrum(up, w, 60.0, 24000);
      CHECK(std::abs(brute - photon_number_spectrum(up, w)) <= 1e-4 * peak_val);
    }
  }

  // exact spectral zero
  const auto z = make(-0.3, -0.5, 0.1, 10);
  const auto zt = spectrum_via_transform(z, grid);  // grid[52] = -0.4, grid[68] = 0.4
  CHECK(grid[52] == doctest::Approx(-0.4));
  CHECK(grid[68] == doctest::Approx(0.4));
  CHECK(zt[52] <= 1e-3 * zt[68]);

  const std::vector<double> coarse{0.0, 0.1};
  CHECK_THROWS_AS(spectrum_via_transform(lin, coarse), DomainError);
  CHECK_THROWS_AS(spectrum_via_transform(make(0, 0.7, 0), grid), UnstableFixedPointError);
}

TEST_CASE("spectrum is non-negative") {
  for (double d : {-1.0, 0.0, 0.4}) {
    for (double r1 : {-0.5, 0.2, 1.3}) {
      for (double w = -3; w <= 3; w += 0.01) CHECK(photon_number_spectrum(make(d, r1, -0.3, 2), w) >= 0.0);
    }
  }
}

TEST_CASE("josephson resonance: odd damping and no cooling on the mono branch") {
  const auto m = ModelDescriptor::josephson(0.0, 750.0, 0.06);
  const auto up = universal_params(m, branch_point(m, Branch::plus));
  const auto um = universal_params(m, branch_point(m, Branch::minus));
  for (double w : {0.05, 0.1, 0.4}) {
    CHECK(optomechanical_damping(up, 1e-3, w) ==
          doctest::Approx(-optomechanical_damping(um, 1e-3, w)).epsilon(1e-8));
  }
  for (double E : {50.0, 300.0, 404.0}) {
    const auto mm = ModelDescriptor::josephson(0.0, E, 0.06);
    const auto u = universal_params(mm, find_fixed_points(mm).at(0));
    CHECK(std::abs(optomechanical_damping(u, 1e-3, 0.1)) <= 1e-12);
  }
}

TEST_CASE("cooling only on the plus branch") {
  for (double delta : {-0.07, 0.0, 0.07}) {
    for (double E : {700.0, 1000.0}) {
      const auto m = ModelDescriptor::josephson(delta, E, 0.06);
      for (const auto& fp : find_fixed_points(m)) {
        if (!fp.stable || fp.branch == Branch::mono) continue;
        const double g = optomechanical_damping(universal_params(m, fp), 1e-3, 0.1);
        if (fp.branch == Branch::plus) CHECK(g > 0.0);
        if (fp.branch == Branch::minus) CHECK(g < 0.0);
      }
    }
  }
}

TEST_CASE("damping peak frequency") {
  const auto up = make(-0.5, 0, 0, 10);
  const double w = damping_peak_frequency(up);
  CHECK(w > 0);
  const double g = optomechanical_damping(up, 1e-3, w);
  CHECK(g >= optomechanical_damping(up, 1e-3, w * 1.001));
  CHECK(g >= optomechanical_damping(up, 1e-3, w * 0.999));
  CHECK(damping_peak_frequency(make(0.5, 0, 0)) == 0.0);
}

TEST_CASE("mechanical mode validation") {
  MechanicalMode m;
  CHECK_NOTHROW(m.validate());
  CHECK(m.weakly_damped());
  m.gamma_m = 0.5;
  CHECK_FALSE(m.weakly_damped());
  m.omega_m = -1;
  CHECK_THROWS_AS(m.validate(), DomainError);
}
