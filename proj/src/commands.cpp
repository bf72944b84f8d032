#include "optocool/commands.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string label(const FixedPoint& fp) { return std::string(to_string(fp.branch)); }

Table fixed_points_table(const RunSpec& s) {
  Table t({"branch", "A0", "theta0", "n", "re_alpha", "im_alpha", "stable", "max_re_lambda",
           "residual"});
  for (const FixedPoint& fp : find_fixed_points(s.model)) {
    const UniversalParams up = universal_params(s.model, fp);
    t.add_row({label(fp), fp.a0, fp.theta0, fp.n, fp.alpha().real(), fp.alpha().imag(),
               std::int64_t{fp.stable ? 1 : 0}, max_real_eigenvalue(up),
               fixed_point_residual(s.model, fp.alpha())});
  }
  return t;
}

Table spectrum_table(const RunSpec& s, bool damping, Execution exec) {
  Table t({"branch", "theta0", "omega_over_gamma", damping ? "gamma_opt" : "s_nn"});
  const auto ws = s.spectrum.omega.values();
  for (const FixedPoint& fp : apply_branch_policy(find_fixed_points(s.model), s.spectrum.policy)) {
    const UniversalParams up = universal_params(s.model, fp);
    std::vector<double> values(ws.size());
    if (damping) {
      for (std::size_t i = 0; i < ws.size(); ++i) values[i] = optomechanical_damping(up, s.mech->g0, ws[i]);
    } else if (s.spectrum.transform) {
      values = spectrum_via_transform(up, ws, exec);
    } else {
      for (std::size_t i = 0; i < ws.size(); ++i) values[i] = photon_number_spectrum(up, ws[i]);
    }
    for (std::size_t i = 0; i < ws.size(); ++i) t.add_row({label(fp), fp.theta0, ws[i], values[i]});
  }
  return t;
}

Table phonons_table(const RunSpec& s) {
  const MechanicalMode& mech = *s.mech;
  Table t({"branch", "n", "theta0", "omega_m_over_gamma", "gamma_opt", "nbar_r", "nbar_min",
           "omega_opt", "r1_offset", "status"});
  for (const FixedPoint& fp : apply_branch_policy(find_fixed_points(s.model), BranchPolicy::stable_only)) {
    const UniversalParams up = universal_params(s.model, fp);
    const double g = optomechanical_damping(up, mech.g0, mech.omega_m);
    const bool cools = up.r2 - up.dtilde > 0.0 && g > 0.0;
    const double nr = cools ? residual_phonons(up, mech.omega_m) : kNaN;
    const double nm = cools ? min_phonons(g, mech.gamma_m, nr, mech.nbar_T) : kNaN;
    t.add_row({label(fp), fp.n, fp.theta0, mech.omega_m, g, nr, nm, up.r2 - up.dtilde,
               up.r1 + 0.5 * up.gamma, std::string(cools ? "ok" : "not_cooling")});
  }
  return t;
}

Table optimize_table(const RunSpec& s, Execution exec) {
  DriveRule rule;
  if (s.optimize.margin) {
    const double margin = *s.optimize.margin;
    const ModelDescriptor family = s.model;
    rule = [margin, family](double delta) {
      ModelDescriptor m = family;
      m.delta = delta;
      return margin * bifurcation_threshold(m);
    };
  }
  DetuningSearch search;
  search.scan_points = s.optimize.scan_points;
  search.exec = exec;
  const DetuningOptimum opt =
      optimize_detuning(s.model, *s.mech, s.optimize.delta_range, s.optimize.policy, rule, search);
  Table t({"delta_star", "gamma_opt_star", "drive"});
  t.add_row({opt.delta_star, opt.gamma_opt_star, opt.drive});
  return t;
}

Table design_table(const RunSpec& s, Execution exec) {
  DesignInputs in;
  in.phi0 = s.model.phi0;
  in.mech = *s.mech;
  in.ej = s.model.drive;
  in.delta = s.model.delta;
  DesignOptions opts = s.design;
  opts.search.exec = exec;
  const CoolingReport r = design_cooling(in, opts);
  const double hz = s.units.has_scale() ? r.gamma_opt * s.units.gamma_hz : kNaN;
  Table t({"delta", "ej", "phi0", "ej_bif", "branch", "A0", "theta0", "n", "dtilde", "r1", "r2",
           "gamma_opt", "gamma_opt_hz", "nbar_r", "nbar_min", "ep_gap", "r1_offset", "omega_opt"});
  t.add_row({r.delta, r.ej, r.phi0, r.ej_bif, label(r.fixed_point), r.fixed_point.a0,
             r.fixed_point.theta0, r.fixed_point.n, r.params.dtilde, r.params.r1, r.params.r2,
             r.gamma_opt, hz, r.nbar_r, r.nbar_min, r.ep_gap, r.zero_heating.r1_offset,
             r.zero_heating.omega_opt});
  return t;
}

}  // namespace

Table execute(const RunSpec& spec, Execution exec) {
  switch (spec.command) {
    case Command::fixed_points: return fixed_points_table(spec);
    case Command::spectrum: return spectrum_table(spec, false, exec);
    case Command::damping: return spectrum_table(spec, true, exec);
    case Command::phonons: return phonons_table(spec);
    case Command::sweep: return run_sweep(spec.grid, spec.outputs, exec);
    case Command::optimize: return optimize_table(spec, exec);
    case Command::design: return design_table(spec, exec);
    case Command::figure: return figure_dataset(spec.figure, spec.figure_params, exec);
  }
  throw ConfigError("unhandled command");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const ConvergenceError*>(&e)) return kExitConvergence;
  if (dynamic_cast<const std::domain_error*>(&e)) return kExitDomain;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitConfig;
  return kExitDomain;
}

}  // namespace optocool
