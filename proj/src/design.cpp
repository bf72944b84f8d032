#include "optocool/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

double best_damping(const ModelDescriptor& model, const MechanicalMode& mech,
                    BranchPolicy policy, double gamma) {
  double best = kNegInf;
  for (const FixedPoint& fp : apply_branch_policy(find_fixed_points(model, gamma), policy)) {
    if (!fp.stable) continue;
    const UniversalParams up = universal_params(model, fp, gamma);
    best = std::max(best, optomechanical_damping(up, mech.g0, mech.omega_m));
  }
  return best;
}

DetuningOptimum optimize_detuning(const ModelDescriptor& model_family, const MechanicalMode& mech,
                                  Interval delta_range, BranchPolicy policy,
                                  const DriveRule& drive, const DetuningSearch& search) {
  if (!std::isfinite(delta_range.lo) || !std::isfinite(delta_range.hi) ||
      !(delta_range.lo < delta_range.hi)) {
    throw DomainError("detuning range must be finite with lo < hi");
  }
  if (search.scan_points < 3) throw DomainError("detuning scan needs at least 3 points");

  auto objective = [&](double delta) {
    ModelDescriptor m = model_family;
    m.delta = delta;
    try {
      if (drive) m.drive = drive(delta);
      return best_damping(m, mech, policy, search.gamma);
    } catch (const std::runtime_error&) {
      return kNegInf;  // no admitted point here
    } catch (const DomainError&) {
      return kNegInf;
    }
  };

  const int count = search.scan_points;
  std::vector<double> grid(count), values(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = delta_range.lo + (delta_range.hi - delta_range.lo) * i / (count - 1);
  }
  parallel_for(
      static_cast<std::size_t>(count), [&](std::size_t i) { values[i] = objective(grid[i]); },
      search.exec);

  const auto best_it = std::max_element(values.begin(), values.end());
  const auto best = static_cast<int>(best_it - values.begin());
  if (!(*best_it > 0.0)) throw NotCoolingError("no cooling in range");

  double lo = grid[std::max(best - 1, 0)];
  double hi = grid[std::min(best + 1, count - 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = objective(c), fd = objective(d);
  while (hi - lo > search.tolerance) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = objective(d);
    }
  }
  DetuningOptimum out;
  out.delta_star = 0.5 * (lo + hi);
  out.gamma_opt_star = objective(out.delta_star);
  // the objective can jump where a branch appears; never return worse than the scan
  if (!(out.gamma_opt_star >= *best_it)) {
    out.delta_star = grid[best];
    out.gamma_opt_star = *best_it;
  }
  out.drive = drive ? drive(out.delta_star) : model_family.drive;
  return out;
}

CoolingReport cooling_report(const ModelDescriptor& model, const MechanicalMode& mech,
                             BranchPolicy policy, double gamma) {
  const auto points = apply_branch_policy(find_fixed_points(model, gamma), policy);
  const FixedPoint* chosen = nullptr;
  double best = kNegInf;
  for (const FixedPoint& fp : points) {
    if (!fp.stable) continue;
    const double g =
        optomechanical_damping(universal_params(model, fp, gamma), mech.g0, mech.omega_m);
    if (g > best) {
      best = g;
      chosen = &fp;
    }
  }
  if (!chosen) throw NotCoolingError("no admitted stable fixed point at this operating point");

  CoolingReport report;
  report.delta = model.delta;
  report.ej = model.drive;
  report.phi0 = model.phi0;
  report.mech = mech;
  report.fixed_point = *chosen;
  report.params = universal_params(model, *chosen, gamma);
  report.gamma_opt = best;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.nbar_r = report.params.r2 - report.params.dtilde > 0.0
                      ? residual_phonons(report.params, mech.omega_m)
                      : nan;
  if (best == 0.0) {
    report.nbar_min = mech.nbar_T;
  } else if (best > 0.0 && std::isfinite(report.nbar_r)) {
    report.nbar_min = min_phonons(report.gamma_opt, mech.gamma_m, report.nbar_r, mech.nbar_T);
  } else {
    report.nbar_min = nan;  // heating
  }
  report.ep_gap = exceptional_point_gap(report.params);
  report.zero_heating = zero_heating_diagnostics(report.params);
  return report;
}

CoolingReport design_cooling(const DesignInputs& inputs, const DesignOptions& options) {
  inputs.mech.validate();
  if (!(inputs.phi0 > 0.0 && inputs.phi0 < 1.0)) throw DomainError("phi0 must be in (0, 1)");
  if (!options.explicit_drive && !(options.margin > 0.0 && options.margin < 1.0)) {
    throw DomainError("drive margin must be in (0, 1)");
  }

  const ModelDescriptor family = ModelDescriptor::josephson(0.0, 0.0, inputs.phi0);
  auto threshold_at = [&](double delta) {
    ModelDescriptor m = family;
    m.delta = delta;
    return bifurcation_threshold(m, inputs.gamma);
  };

  double resonant_threshold = 0.0;
  DriveRule rule;
  if (options.explicit_drive) {
    if (!inputs.ej) throw DomainError("explicit drive requested but no ej given");
    const double ej = *inputs.ej;
    rule = [ej](double) { return ej; };
  } else if (options.reference == ThresholdReference::resonance) {
    resonant_threshold = threshold_at(0.0);
    const double ej = options.margin * resonant_threshold;
    rule = [ej](double) { return ej; };
  } else {
    rule = [&, margin = options.margin](double delta) { return margin * threshold_at(delta); };
  }

  CoolingReport report;
  report.phi0 = inputs.phi0;
  report.mech = inputs.mech;
  if (options.optimize_detuning) {
    DetuningSearch search = options.search;
    search.gamma = inputs.gamma;
    const DetuningOptimum opt =
        optimize_detuning(family, inputs.mech, options.delta_range, options.policy, rule, search);
    report.delta = opt.delta_star;
  } else {
    if (!inputs.delta) throw DomainError("fixed detuning requested but no delta given");
    report.delta = *inputs.delta;
  }
  report.ej = rule(report.delta);
  if (!options.explicit_drive) {
    report.ej_bif = options.reference == ThresholdReference::resonance ? resonant_threshold
                                                                       : report.ej / options.margin;
  }

  const ModelDescriptor model = ModelDescriptor::josephson(report.delta, report.ej, inputs.phi0);
  CoolingReport point = cooling_report(model, inputs.mech, options.policy, inputs.gamma);
  point.ej_bif = report.ej_bif;
  report = point;
  return report;
}

}  // namespace optocool
