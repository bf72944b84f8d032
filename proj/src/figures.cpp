#include "optocool/figures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "optocool/errors.hpp"
#include "optocool/sweep.hpp"

namespace optocool {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::pair<FigureId, std::string_view>, 14> kNames{{
    {FigureId::f1b, "1b"}, {FigureId::f1c, "1c"}, {FigureId::f1d, "1d"}, {FigureId::f1e, "1e"},
    {FigureId::f2a, "2a"}, {FigureId::f2b, "2b"}, {FigureId::f3a, "3a"}, {FigureId::f3b, "3b"},
    {FigureId::f3c, "3c"}, {FigureId::f3d, "3d"}, {FigureId::f4a, "4a"}, {FigureId::f4b, "4b"},
    {FigureId::f4c, "4c"}, {FigureId::f4d, "4d"},
}};

using Rows = std::vector<Table::Row>;
using PrefixFn = std::function<Table::Row(std::size_t)>;
using BodyFn = std::function<Rows(std::size_t, const Table::Row&)>;

std::string status_of(const std::exception& e) {
  if (dynamic_cast<const ConvergenceError*>(&e)) return "no_convergence";
  if (dynamic_cast<const NotCoolingError*>(&e)) return "no_cooling";
  return "domain_error";
}

// Evaluates count independent points; a failing point leaves one row with
// its prefix, "-" as branch, NaN elsewhere and the failure as status.
Table collect(std::vector<std::string> columns, std::size_t count, const PrefixFn& prefix,
              const BodyFn& body, Execution exec) {
  std::vector<Rows> per_point(count);
  parallel_for(
      count,
      [&](std::size_t i) {
        const Table::Row head = prefix(i);
        try {
          per_point[i] = body(i, head);
        } catch (const std::exception& e) {
          Table::Row row = head;
          for (std::size_t c = head.size(); c + 1 < columns.size(); ++c) {
            if (columns[c] == "branch") {
              row.emplace_back(std::string("-"));
            } else {
              row.emplace_back(kNaN);
            }
          }
          row.emplace_back(status_of(e));
          per_point[i] = {std::move(row)};
        }
      },
      exec);
  Table table(std::move(columns));
  for (auto& rows : per_point) {
    for (auto& row : rows) table.add_row(std::move(row));
  }
  return table;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

std::string label(const FixedPoint& fp) { return std::string(to_string(fp.branch)); }

std::vector<FixedPoint> stable_points(const ModelDescriptor& model, BranchPolicy policy) {
  return apply_branch_policy(find_fixed_points(model), policy);
}

double threshold(double delta, double phi0) {
  return bifurcation_threshold(ModelDescriptor::josephson(delta, 0.0, phi0));
}

// E_bif(|delta|) on nodes clustered towards 0, where it varies fastest.
class ThresholdCurve {
 public:
  ThresholdCurve(double umax, int points, double phi0, Execution exec) : u_(points), e_(points) {
    if (points < 2) throw DomainError("threshold curve needs at least 2 points");
    for (int k = 0; k < points; ++k) {
      const double t = static_cast<double>(k) / (points - 1);
      u_[k] = umax * t * t * t;
    }
    parallel_for(
        static_cast<std::size_t>(points), [&](std::size_t k) { e_[k] = threshold(u_[k], phi0); },
        exec);
  }

  double operator()(double delta) const {
    const double u = std::min(std::abs(delta), u_.back());
    const auto it = std::upper_bound(u_.begin(), u_.end(), u);
    const std::size_t hi = std::min<std::size_t>(it - u_.begin(), u_.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (u - u_[lo]) / (u_[hi] - u_[lo]);
    return (1.0 - w) * e_[lo] + w * e_[hi];
  }

 private:
  std::vector<double> u_, e_;
};

Table fig1(FigureId id, const FigureParams& p, Execution exec) {
  const auto xs = p.x.values();
  const bool by_delta = id == FigureId::f1d;
  const std::size_t nx = xs.size();
  std::vector<std::string> cols;
  if (by_delta) {
    cols = {"delta_over_gamma", "ej_over_hgamma", "branch", "A0", "theta0", "n", "gamma_opt", "cooling"};
  } else if (id == FigureId::f1e) {
    cols = {"delta_over_gamma", "ej_over_hgamma", "branch", "A0", "theta0",
            "re_alpha",         "im_alpha",       "n",      "cooling"};
  } else {
    cols = {"ej_over_hgamma", "delta_over_gamma", "branch", "A0", "theta0", "n"};
    if (id == FigureId::f1c) {
      cols.emplace_back("gamma_opt");
      cols.emplace_back("cooling");
    }
  }
  cols.emplace_back("status");

  // series-major so each curve is contiguous
  auto coords = [&](std::size_t i) {
    const double s = p.series[i / nx];
    const double x = xs[i % nx];
    return by_delta ? std::pair{x, s} : std::pair{s, x};  // (delta, ej)
  };
  return collect(
      cols, p.series.size() * nx,
      [&](std::size_t i) {
        const auto [delta, ej] = coords(i);
        if (id == FigureId::f1b || id == FigureId::f1c) return Table::Row{ej, delta};
        return Table::Row{delta, ej};
      },
      [&](std::size_t i, const Table::Row& head) {
        const auto [delta, ej] = coords(i);
        const auto model = ModelDescriptor::josephson(delta, ej, p.phi0);
        Rows rows;
        for (const FixedPoint& fp : stable_points(model, BranchPolicy::stable_only)) {
          Table::Row row = head;
          row.emplace_back(label(fp));
          row.emplace_back(fp.a0);
          row.emplace_back(fp.theta0);
          const double g = optomechanical_damping(universal_params(model, fp), p.mech.g0,
                                                  p.mech.omega_m);
          if (id == FigureId::f1e) {
            row.emplace_back(fp.alpha().real());
            row.emplace_back(fp.alpha().imag());
          }
          row.emplace_back(fp.n);
          if (id != FigureId::f1b) {
            if (id != FigureId::f1e) row.emplace_back(g);
            row.emplace_back(sign_of(g));
          }
          row.emplace_back(std::string("ok"));
          rows.push_back(std::move(row));
        }
        return rows;
      },
      exec);
}

// Figures against E_J*/E_bif(delta = 0).
Table ratio_figure(FigureId id, const FigureParams& p, Execution exec) {
  const double ebif0 = threshold(0.0, p.phi0);
  const auto xs = p.x.values();
  std::vector<double> deltas = p.series;
  if (id == FigureId::f3a || id == FigureId::f3b || id == FigureId::f3c || id == FigureId::f3d) {
    deltas = {p.delta};
  }
  const std::size_t nx = xs.size();

  std::vector<std::string> cols = {"ej_ratio", "ej_over_hgamma", "delta_over_gamma", "branch"};
  switch (id) {
    case FigureId::f2a: cols.insert(cols.end(), {"r1", "r2", "dtilde", "r1_offset"}); break;
    case FigureId::f2b: cols.emplace_back("omega_opt"); break;
    case FigureId::f3a:
    case FigureId::f3b: cols.insert(cols.end(), {"omega_peak", "gamma_opt", "nbar_r"}); break;
    default:
      cols.insert(cols.end(), {"lambda_plus_re", "lambda_plus_im", "lambda_minus_re",
                               "lambda_minus_im", "ep_gap", "real_eigenvalues"});
  }
  cols.emplace_back("status");
  const BranchPolicy policy =
      (id == FigureId::f2a || id == FigureId::f2b) ? BranchPolicy::plus_only : BranchPolicy::stable_only;

  return collect(
      cols, deltas.size() * nx,
      [&](std::size_t i) {
        const double ratio = xs[i % nx];
        return Table::Row{ratio, ratio * ebif0, deltas[i / nx]};
      },
      [&](std::size_t i, const Table::Row& head) {
        const double ej = xs[i % nx] * ebif0;
        const auto model = ModelDescriptor::josephson(deltas[i / nx], ej, p.phi0);
        Rows rows;
        for (const FixedPoint& fp : stable_points(model, policy)) {
          const UniversalParams up = universal_params(model, fp);
          Table::Row row = head;
          row.emplace_back(label(fp));
          if (id == FigureId::f2a) {
            row.insert(row.end(), {up.r1, up.r2, up.dtilde, up.r1 + 0.5 * up.gamma});
          } else if (id == FigureId::f2b) {
            row.emplace_back(up.r2 - up.dtilde);
          } else if (id == FigureId::f3a || id == FigureId::f3b) {
            const double w = damping_peak_frequency(up);
            const double g = w > 0.0 ? optomechanical_damping(up, p.mech.g0, w) : 0.0;
            const double nr = w > 0.0 && up.r2 - up.dtilde > 0.0 ? residual_phonons(up, w) : kNaN;
            row.insert(row.end(), {w, g, nr});
          } else {
            const Eigenvalues ev = fluctuation_eigenvalues(up);
            const double gap = exceptional_point_gap(up);
            row.insert(row.end(), {ev.plus.real(), ev.plus.imag(), ev.minus.real(),
                                   ev.minus.imag(), gap, gap >= 0.0 ? 1.0 : 0.0});
          }
          row.emplace_back(std::string("ok"));
          rows.push_back(std::move(row));
        }
        return rows;
      },
      exec);
}

Table spectrum_figure(const FigureParams& p, Execution exec) {
  const double ebif = threshold(p.delta, p.phi0);
  const auto ws = p.x.values();
  return collect(
      {"ej_ratio", "ej_over_hgamma", "delta_over_gamma", "branch", "theta0", "omega_over_gamma",
       "s_nn", "status"},
      p.series.size(),
      [&](std::size_t i) {
        return Table::Row{p.series[i], p.series[i] * ebif, p.delta};
      },
      [&](std::size_t i, const Table::Row& head) {
        const auto model = ModelDescriptor::josephson(p.delta, p.series[i] * ebif, p.phi0);
        Rows rows;
        for (const FixedPoint& fp : stable_points(model, BranchPolicy::stable_only)) {
          const UniversalParams up = universal_params(model, fp);
          for (double w : ws) {
            Table::Row row = head;
            row.emplace_back(label(fp));
            row.emplace_back(fp.theta0);
            row.emplace_back(w);
            row.emplace_back(photon_number_spectrum(up, w));
            row.emplace_back(std::string("ok"));
            rows.push_back(std::move(row));
          }
        }
        return rows;
      },
      exec);
}

Table minimum_phonon_figure(const FigureParams& p, Execution exec) {
  if (!(p.delta_range.lo < p.delta_range.hi)) throw DomainError("figure: empty detuning range");
  const double umax = std::max(std::abs(p.delta_range.lo), std::abs(p.delta_range.hi));
  const ThresholdCurve ebif(umax, p.threshold_points, p.phi0, exec);
  const auto ws = p.x.values();
  const std::size_t nw = ws.size();
  const ModelDescriptor family = ModelDescriptor::josephson(0.0, 0.0, p.phi0);

  return collect(
      {"distance_over_hgamma", "omega_m_over_gamma", "branch", "delta_star", "ej_over_hgamma",
       "gamma_opt", "nbar_r", "nbar_min", "status"},
      p.series.size() * nw,
      [&](std::size_t i) { return Table::Row{p.series[i / nw], ws[i % nw]}; },
      [&](std::size_t i, const Table::Row& head) {
        const double distance = p.series[i / nw];
        MechanicalMode mech = p.mech;
        mech.omega_m = ws[i % nw];
        const DriveRule rule = [&](double delta) { return ebif(delta) + distance; };
        DetuningSearch search;
        search.scan_points = p.scan_points;
        search.exec = Execution::serial;
        const DetuningOptimum opt =
            optimize_detuning(family, mech, p.delta_range, BranchPolicy::plus_only, rule, search);
        const auto model = ModelDescriptor::josephson(opt.delta_star, opt.drive, p.phi0);
        const CoolingReport r = cooling_report(model, mech, BranchPolicy::plus_only);
        Table::Row row = head;
        row.emplace_back(label(r.fixed_point));
        row.insert(row.end(), {opt.delta_star, opt.drive, r.gamma_opt, r.nbar_r, r.nbar_min});
        row.emplace_back(std::string("ok"));
        return Rows{std::move(row)};
      },
      exec);
}

}  // namespace

std::string_view to_string(FigureId id) {
  for (const auto& [k, name] : kNames) {
    if (k == id) return name;
  }
  return "?";
}

FigureId figure_id_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown figure id '" + std::string(name) + "'");
}

std::vector<FigureId> all_figures() {
  std::vector<FigureId> out;
  for (const auto& entry : kNames) out.push_back(entry.first);
  return out;
}

std::vector<double> Range::values() const {
  if (count < 1) throw DomainError("range count must be >= 1");
  if (!std::isfinite(min) || !std::isfinite(max)) throw DomainError("range must be finite");
  if (log && !(min > 0.0 && max > 0.0)) throw DomainError("log range needs positive ends");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v[i] = log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
               : min + t * (max - min);
  }
  if (count > 1) v.back() = max;
  return v;
}

MechanicalMode reference_mechanics() {
  MechanicalMode m;
  m.omega_m = 302e3 / 3e6;
  m.gamma_m = 0.5 / 3e6;
  m.nbar_T = 2778.0;
  m.g0 = 2.1e3 / 3e6;
  return m;
}

FigureParams figure_defaults(FigureId id) {
  FigureParams p;
  p.mech = reference_mechanics();
  switch (id) {
    case FigureId::f1b:
    case FigureId::f1c:
      p.series = {0.0, 0.4, -0.4};
      p.x = {0.0, 1000.0, 201, false};
      break;
    case FigureId::f1d:
      p.series = {100.0, 200.0, 300.0, 404.40, 750.0};
      p.x = {-1.0, 1.0, 401, false};
      break;
    case FigureId::f1e:
      p.series = {-0.4, -0.2, 0.0, 0.2, 0.4};
      p.x = {0.0, 1000.0, 101, false};
      break;
    case FigureId::f2a:
    case FigureId::f2b:
      p.series = {0.0, -0.02, -0.07, -0.2};
      p.x = {0.02, 3.0, 150, false};
      break;
    case FigureId::f3a:
    case FigureId::f3c:
      p.delta = 0.0;
      p.x = {0.02, 3.0, 150, false};
      break;
    case FigureId::f3b:
    case FigureId::f3d:
      p.delta = -0.07;
      p.x = {0.02, 3.0, 150, false};
      break;
    case FigureId::f4a:
    case FigureId::f4b:
      p.phi0 = 0.2;
      p.delta = -0.1;
      p.series = {id == FigureId::f4a ? 0.92 : 2.06};
      p.x = {-3.0, 3.0, 601, false};
      break;
    case FigureId::f4c:
      p.series = {-40.0, -10.0, 10.0, 40.0};
      p.x = {0.05, 5.0, 25, true};
      p.delta_range = {-0.5, 0.0};
      break;
    case FigureId::f4d:
      p.series = {10.0, 40.0};
      p.x = {0.05, 5.0, 25, true};
      p.delta_range = {0.0, 0.5};
      break;
  }
  return p;
}

Table figure_dataset(FigureId id, const FigureParams& params, Execution exec) {
  if (!(params.phi0 > 0.0 && params.phi0 < 1.0)) throw DomainError("figure: phi0 must be in (0, 1)");
  params.mech.validate();
  switch (id) {
    case FigureId::f1b:
    case FigureId::f1c:
    case FigureId::f1d:
    case FigureId::f1e: return fig1(id, params, exec);
    case FigureId::f4a:
    case FigureId::f4b: return spectrum_figure(params, exec);
    case FigureId::f4c:
    case FigureId::f4d: return minimum_phonon_figure(params, exec);
    default: return ratio_figure(id, params, exec);
  }
}

}  // namespace optocool
