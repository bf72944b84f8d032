#include "optocool/cavity_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "optocool/errors.hpp"
#include "optocool/semiclassical.hpp"
#include "optocool/specfun.hpp"

namespace optocool {

using specfun::bessel_j;
using specfun::bessel_j_scaled;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::linear: return "linear";
    case ModelKind::kerr: return "kerr";
    case ModelKind::josephson: return "josephson";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "linear") return ModelKind::linear;
  if (name == "kerr") return ModelKind::kerr;
  if (name == "josephson") return ModelKind::josephson;
  throw DomainError("unknown model kind '" + std::string(name) + "'");
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::mono: return "mono";
    case Branch::plus: return "plus";
    case Branch::minus: return "minus";
    case Branch::unstable: return "unstable";
  }
  return "unknown";
}

ModelDescriptor ModelDescriptor::linear(double delta, double drive) {
  return {ModelKind::linear, delta, drive, 0.0, 0.0};
}

ModelDescriptor ModelDescriptor::kerr_cavity(double delta, double drive, double kerr) {
  return {ModelKind::kerr, delta, drive, kerr, 0.0};
}

ModelDescriptor ModelDescriptor::josephson(double delta, double ej, double phi0) {
  return {ModelKind::josephson, delta, ej, 0.0, phi0};
}

void ModelDescriptor::validate() const {
  if (!std::isfinite(delta) || !std::isfinite(drive) || !std::isfinite(kerr) ||
      !std::isfinite(phi0)) {
    throw DomainError("model parameters must be finite");
  }
  if (kind == ModelKind::josephson && !(phi0 > 0.0 && phi0 < 1.0)) {
    throw DomainError("josephson model requires 0 < phi0 < 1");
  }
}

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kDedupTol = 1e-8;
constexpr double kMonoPhaseTol = 1e-10;

void check_josephson_argument(const ModelDescriptor& m, double amplitude) {
  if (2.0 * m.phi0 * amplitude > specfun::kMaxArgument) {
    throw DomainError("josephson bessel argument 2*phi0*|alpha| exceeds 30");
  }
}

// ---------------------------------------------------------------------------
// Hamiltonians
//
// linear:    H = -delta |a|^2 - eps (a + a*)
// kerr:      H = -delta |a|^2 - (K/2) |a|^4 - eps (a + a*)
// josephson: H = -delta |a|^2 + (i E/2)(a* - a) J1(2 phi0 |a|) / |a|
//              = -delta |a|^2 + E Im(a) g(|a|^2),  g(u) = J1(2 phi0 sqrt u)/sqrt u

double josephson_g(double phi0, double x) { return 2.0 * phi0 * bessel_j_scaled(1, x); }

}  // namespace

double classical_hamiltonian(const ModelDescriptor& model, Complex alpha) {
  const double u = std::norm(alpha);
  switch (model.kind) {
    case ModelKind::linear:
      return -model.delta * u - 2.0 * model.drive * alpha.real();
    case ModelKind::kerr:
      return -model.delta * u - 0.5 * model.kerr * u * u - 2.0 * model.drive * alpha.real();
    case ModelKind::josephson: {
      const double a = std::sqrt(u);
      check_josephson_argument(model, a);
      const double x = 2.0 * model.phi0 * a;
      return -model.delta * u + model.drive * alpha.imag() * josephson_g(model.phi0, x);
    }
  }
  return 0.0;
}

WirtingerDerivs hamiltonian_derivatives(const ModelDescriptor& model, Complex alpha) {
  const double u = std::norm(alpha);
  WirtingerDerivs d;
  switch (model.kind) {
    case ModelKind::linear:
    case ModelKind::kerr: {
      const double k = model.kind == ModelKind::kerr ? model.kerr : 0.0;
      d.d1 = -model.delta * alpha - k * u * alpha - model.drive;
      d.d_mixed = -model.delta - 2.0 * k * u;
      d.d_anti = -k * alpha * alpha;
      return d;
    }
    case ModelKind::josephson: {
      const double a = std::sqrt(u);
      check_josephson_argument(model, a);
      const double p = model.phi0;
      const double x = 2.0 * p * a;
      const double e = model.drive;
      const Complex i(0.0, 1.0);
      // g, g' = dg/du, g'' in terms of J_k(x)/x^k
      const double g = josephson_g(p, x);
      const double g1 = -4.0 * p * p * p * bessel_j_scaled(2, x);
      const double g2 = 8.0 * std::pow(p, 5) * bessel_j_scaled(3, x);
      const Complex conj_minus = std::conj(alpha) - alpha;  // -2 i Im(alpha)

      d.d1 = -model.delta * alpha + 0.5 * i * e * (g + conj_minus * alpha * g1);
      // (i E/2)(a* - a)(2 g' + u g'') = -E phi0^2 J1(x) Im(a)/|a|
      d.d_mixed = -model.delta - e * p * p * 2.0 * p * bessel_j_scaled(1, x) * alpha.imag();
      d.d_anti = 0.5 * i * e * (2.0 * alpha * g1 + conj_minus * alpha * alpha * g2);
      return d;
    }
  }
  return d;
}

WirtingerDerivs fd_hamiltonian_derivatives(const ModelDescriptor& model, Complex alpha,
                                           double h) {
  const double scale = std::max(1.0, std::abs(alpha));
  if (!(h >= 1e-6 * scale && h <= 1e-3 * scale)) {
    throw DomainError("finite-difference step outside [1e-6, 1e-3] * max(1, |alpha|)");
  }
  // stencil arithmetic in long double; the polynomial models are then
  // differenced well below the double rounding floor
  using LD = long double;
  const LD x0 = alpha.real();
  const LD y0 = alpha.imag();
  auto f = [&](LD dx, LD dy) -> LD {
    const LD x = x0 + dx, y = y0 + dy;
    const LD u = x * x + y * y;
    switch (model.kind) {
      case ModelKind::linear: return -LD(model.delta) * u - 2 * LD(model.drive) * x;
      case ModelKind::kerr:
        return -LD(model.delta) * u - LD(model.kerr) / 2 * u * u - 2 * LD(model.drive) * x;
      case ModelKind::josephson: {
        const double a = std::sqrt(static_cast<double>(u));
        check_josephson_argument(model, a);
        return -LD(model.delta) * u +
               LD(model.drive) * y * LD(josephson_g(model.phi0, 2.0 * model.phi0 * a));
      }
    }
    return 0;
  };
  const LD f00 = f(0, 0);

  struct Stencil {
    LD fx, fy, fxx, fyy, fxy;
  };
  auto second_order = [&](LD s) {
    const LD fpx = f(s, 0), fmx = f(-s, 0), fpy = f(0, s), fmy = f(0, -s);
    Stencil st;
    st.fx = (fpx - fmx) / (2 * s);
    st.fy = (fpy - fmy) / (2 * s);
    st.fxx = (fpx - 2 * f00 + fmx) / (s * s);
    st.fyy = (fpy - 2 * f00 + fmy) / (s * s);
    st.fxy = (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4 * s * s);
    return st;
  };
  // Richardson extrapolation of the h and 2h estimates
  const Stencil a = second_order(h);
  const Stencil b = second_order(2 * LD(h));
  auto rich = [](LD fine, LD coarse) { return static_cast<double>((4 * fine - coarse) / 3); };
  const double fx = rich(a.fx, b.fx), fy = rich(a.fy, b.fy);
  const double fxx = rich(a.fxx, b.fxx), fyy = rich(a.fyy, b.fyy), fxy = rich(a.fxy, b.fxy);

  WirtingerDerivs d;
  d.d1 = 0.5 * Complex(fx, fy);
  d.d_mixed = 0.25 * (fxx + fyy);
  d.d_anti = 0.25 * Complex(fxx - fyy, 2.0 * fxy);
  return d;
}

double fixed_point_residual(const ModelDescriptor& model, Complex alpha, double gamma) {
  const WirtingerDerivs d = hamiltonian_derivatives(model, alpha);
  return std::abs(d.d1 - Complex(0.0, 0.5 * gamma) * alpha);
}

double default_amplitude_max(double phi0) { return 1.5 * 4.0 / (2.0 * phi0); }

namespace {

template <class F>
double golden_minimize(F&& f, double a, double b, int iterations = 80) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

template <class F>
double polish_root(F&& f, double lo, double hi, double flo, double fhi) {
  boost::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                  boost::math::tools::eps_tolerance<double>(52),
                                                  iters);
  return 0.5 * (a + b);
}

// Roots of f on the sorted node grid: sign changes, exact node zeros, and
// pairs of roots hidden inside a bracket whose samples show a local dip
// toward zero.
template <class F>
std::vector<double> bracketed_roots(F&& f, const std::vector<double>& nodes) {
  const std::size_t count = nodes.size();
  std::vector<double> vals(count);
  for (std::size_t i = 0; i < count; ++i) vals[i] = f(nodes[i]);

  std::vector<double> roots;
  for (std::size_t i = 0; i < count; ++i) {
    if (vals[i] == 0.0) roots.push_back(nodes[i]);
    if (i + 1 < count && vals[i] * vals[i + 1] < 0.0) {
      roots.push_back(polish_root(f, nodes[i], nodes[i + 1], vals[i], vals[i + 1]));
    }
  }
  for (std::size_t i = 1; i + 1 < count; ++i) {
    const double v = vals[i];
    if (v == 0.0 || vals[i - 1] * v <= 0.0 || vals[i + 1] * v <= 0.0) continue;
    if (std::abs(v) > std::abs(vals[i - 1]) || std::abs(v) > std::abs(vals[i + 1])) continue;
    const double s = v > 0.0 ? 1.0 : -1.0;
    const double lo = nodes[i - 1], hi = nodes[i + 1];
    const double m = golden_minimize([&](double z) { return s * f(z); }, lo, hi);
    const double fm = f(m);
    if (s * fm >= 0.0) continue;
    roots.push_back(polish_root(f, lo, m, vals[i - 1], fm));
    roots.push_back(polish_root(f, m, hi, fm, vals[i + 1]));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> uniform_nodes(double lo, double hi, int brackets) {
  std::vector<double> nodes(static_cast<std::size_t>(brackets) + 1);
  for (int i = 0; i <= brackets; ++i) nodes[i] = lo + (hi - lo) * i / brackets;
  return nodes;
}

struct JosephsonTerms {
  double bp;  // J0 + J2
  double bm;  // J0 - J2
};

JosephsonTerms josephson_terms(double phi0, double amplitude) {
  const double x = 2.0 * phi0 * amplitude;
  const double j0 = bessel_j(0, x), j2 = bessel_j(2, x);
  return {j0 + j2, j0 - j2};
}

// Newton on F(alpha) = dH/dalpha* - i gamma alpha/2, using
// dF/dalpha = d_mixed - i gamma/2 and dF/dalpha* = d_anti.
Complex newton_polish(const ModelDescriptor& model, Complex alpha, double gamma) {
  const Complex half_i_gamma(0.0, 0.5 * gamma);
  auto residual = [&](Complex a) {
    return hamiltonian_derivatives(model, a).d1 - half_i_gamma * a;
  };
  Complex f = residual(alpha);
  for (int it = 0; it < 30 && std::abs(f) > 1e-15; ++it) {
    const WirtingerDerivs d = hamiltonian_derivatives(model, alpha);
    const Complex a = d.d_mixed - half_i_gamma;
    const Complex b = d.d_anti;
    const double det = std::norm(a) - std::norm(b);
    if (det == 0.0) break;
    const Complex step = (-std::conj(a) * f + b * std::conj(f)) / det;
    const Complex next = alpha + step;
    const Complex fn = residual(next);
    if (!(std::abs(fn) < std::abs(f))) break;
    alpha = next;
    f = fn;
  }
  return alpha;
}

double wrap_phase(double theta) {
  double t = std::remainder(theta, 2.0 * std::numbers::pi);
  if (t <= -std::numbers::pi) t += 2.0 * std::numbers::pi;
  return t == 0.0 ? 0.0 : t;  // no negative zero
}

std::vector<Complex> josephson_candidates(const ModelDescriptor& m, double gamma, double a_max,
                                          int brackets) {
  const double c = 0.5 * m.drive * m.phi0;
  const std::vector<double> base = uniform_nodes(0.0, a_max, brackets);

  // zeros of J0 - J2 in (0, a_max]
  auto bm_of = [&](double a) { return josephson_terms(m.phi0, a).bm; };
  std::vector<double> bm_zeros;
  for (double z : bracketed_roots(bm_of, base)) {
    if (z > 0.0) bm_zeros.push_back(z);
  }

  std::vector<Complex> out;
  if (m.delta == 0.0) {
    // mono: gamma A = +-2 C (J0 + J2), theta = 0 or pi
    auto g0 = [&](double a) {
      const double bp = josephson_terms(m.phi0, a).bp;
      return gamma * gamma * a * a - 4.0 * c * c * bp * bp;
    };
    for (double a : bracketed_roots(g0, base)) {
      if (a <= 0.0) continue;
      const double bp = josephson_terms(m.phi0, a).bp;
      out.push_back(c * bp > 0.0 ? Complex(a, 0.0) : Complex(-a, 0.0));
    }
    // bistable: J0 = J2, cos(theta) = gamma A / (2 C (J0 + J2))
    for (double a : bm_zeros) {
      const double bp = josephson_terms(m.phi0, a).bp;
      const double cos_t = gamma * a / (2.0 * c * bp);
      if (!(std::abs(cos_t) <= 1.0)) continue;
      const double t = std::acos(cos_t);
      out.push_back(std::polar(a, -t));
      out.push_back(std::polar(a, t));
    }
    return out;
  }

  // (gamma A Bm)^2 + (2 delta A Bp)^2 - (2 C Bp Bm)^2 = 0
  auto g = [&](double a) {
    const JosephsonTerms t = josephson_terms(m.phi0, a);
    const double u = gamma * a * t.bm;
    const double v = 2.0 * m.delta * a * t.bp;
    const double w = 2.0 * c * t.bp * t.bm;
    return u * u + v * v - w * w;
  };
  std::vector<double> nodes = base;
  nodes.insert(nodes.end(), bm_zeros.begin(), bm_zeros.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  for (double a : bracketed_roots(g, nodes)) {
    if (a <= 0.0) continue;
    const JosephsonTerms t = josephson_terms(m.phi0, a);
    const double cos_t = gamma * a / (2.0 * c * t.bp);
    const double sin_t = -m.delta * a / (c * t.bm);
    out.push_back(std::polar(a, -std::atan2(sin_t, cos_t)));
  }
  return out;
}

std::vector<Complex> kerr_candidates(const ModelDescriptor& m, double gamma, int brackets) {
  const double eps = m.drive;
  auto alpha_of = [&](double n) { return -eps / Complex(m.delta + m.kerr * n, 0.5 * gamma); };
  if (m.kind == ModelKind::linear || m.kerr == 0.0) return {alpha_of(0.0)};
  // n ((delta + K n)^2 + gamma^2/4) = eps^2, with n <= 4 eps^2 / gamma^2
  const double n_max = 1.01 * 4.0 * eps * eps / (gamma * gamma);
  auto f = [&](double n) {
    const double det = m.delta + m.kerr * n;
    return n * (det * det + 0.25 * gamma * gamma) - eps * eps;
  };
  std::vector<Complex> out;
  for (double n : bracketed_roots(f, uniform_nodes(0.0, n_max, brackets))) {
    out.push_back(alpha_of(n));
  }
  return out;
}

}  // namespace

std::vector<FixedPoint> find_fixed_points(const ModelDescriptor& model, double gamma,
                                          const SearchSpec& search) {
  model.validate();
  if (!(gamma > 0.0)) throw DomainError("cavity decay gamma must be positive");

  if (model.drive == 0.0) {
    FixedPoint fp;
    const UniversalParams up = universal_params(model, 0.0, 0.0, gamma);
    fp.stable = is_stable(up);
    fp.branch = fp.stable ? Branch::mono : Branch::unstable;
    return {fp};
  }

  std::vector<Complex> candidates;
  if (model.kind == ModelKind::josephson) {
    const double a_max =
        search.amplitude_max > 0.0 ? search.amplitude_max : default_amplitude_max(model.phi0);
    check_josephson_argument(model, a_max);
    candidates = josephson_candidates(model, gamma, a_max, search.brackets);
  } else {
    candidates = kerr_candidates(model, gamma, search.brackets);
  }

  std::vector<FixedPoint> points;
  for (Complex alpha : candidates) {
    alpha = newton_polish(model, alpha, gamma);
    if (!(fixed_point_residual(model, alpha, gamma) <= kResidualTol)) {
      throw ConvergenceError("no convergence: fixed-point residual above 1e-10");
    }
    FixedPoint fp;
    fp.a0 = std::abs(alpha);
    fp.theta0 = fp.a0 == 0.0 ? 0.0 : wrap_phase(-std::arg(alpha));
    fp.n = fp.a0 * fp.a0;
    points.push_back(fp);
  }

  // deduplicate in (A0, theta0)
  std::sort(points.begin(), points.end(), [](const FixedPoint& a, const FixedPoint& b) {
    return a.a0 != b.a0 ? a.a0 < b.a0 : a.theta0 < b.theta0;
  });
  std::vector<FixedPoint> unique;
  for (const FixedPoint& p : points) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const FixedPoint& q) {
      return std::abs(p.a0 - q.a0) <= kDedupTol &&
             std::abs(std::remainder(p.theta0 - q.theta0, 2.0 * std::numbers::pi)) <= kDedupTol;
    });
    if (!dup) unique.push_back(p);
  }

  for (FixedPoint& p : unique) {
    p.stable = is_stable(universal_params(model, p.a0, p.theta0, gamma));
  }
  const int stable = count_stable(unique);
  for (FixedPoint& p : unique) {
    if (!p.stable) {
      p.branch = Branch::unstable;
    } else if (stable <= 1 || std::abs(p.theta0) < kMonoPhaseTol) {
      p.branch = Branch::mono;
    } else {
      p.branch = p.theta0 > 0.0 ? Branch::plus : Branch::minus;
    }
  }

  std::sort(unique.begin(), unique.end(), [](const FixedPoint& a, const FixedPoint& b) {
    return a.n != b.n ? a.n > b.n : a.theta0 > b.theta0;
  });
  return unique;
}

int count_stable(const std::vector<FixedPoint>& points) {
  return static_cast<int>(
      std::count_if(points.begin(), points.end(), [](const FixedPoint& p) { return p.stable; }));
}

double bifurcation_threshold(const ModelDescriptor& model_family, double gamma,
                             const BifurcationSearch& opts) {
  if (model_family.kind != ModelKind::josephson) {
    throw DomainError("bifurcation_threshold is defined for the josephson model");
  }
  ModelDescriptor m = model_family;
  auto stable_at = [&](double drive) {
    m.drive = drive;
    return count_stable(find_fixed_points(m, gamma, opts.search));
  };
  double lo = 0.0;
  double hi = opts.drive_cap;
  if (stable_at(hi) < 2) {
    throw NoBifurcationError("no bifurcation in range: fewer than two stable solutions up to " +
                             std::to_string(opts.drive_cap));
  }
  while (hi - lo > opts.relative_width * hi) {
    const double mid = 0.5 * (lo + hi);
    if (stable_at(mid) >= 2) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double resonant_bifurcation_estimate(double phi0, double gamma) {
  const double xs = specfun::first_j1_maximum();
  return gamma * xs * xs / (4.0 * phi0 * phi0 * bessel_j(1, xs));
}

}  // namespace optocool
