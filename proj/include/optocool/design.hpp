#pragma once

#include <functional>
#include <optional>

#include "optocool/cavity_models.hpp"
#include "optocool/errors.hpp"
#include "optocool/parallel.hpp"
#include "optocool/semiclassical.hpp"
#include "optocool/sweep.hpp"

namespace optocool {

struct Interval {
  double lo = -0.5;
  double hi = 0.5;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Josephson drive as a function of detuning; an empty rule keeps model.drive.
using DriveRule = std::function<double(double delta)>;

struct DetuningOptimum {
  double delta_star = 0.0;
  double gamma_opt_star = 0.0;
  double drive = 0.0;
};

struct DetuningSearch {
  int scan_points = 401;
  double tolerance = 1e-6;
  double gamma = 1.0;
  Execution exec = Execution::parallel;
};

// Best Gamma_opt(omega_m) over the fixed points admitted by the policy, or
// -inf when none is admitted.
double best_damping(const ModelDescriptor& model, const MechanicalMode& mech,
                    BranchPolicy policy, double gamma = 1.0);

// Maximizes Gamma_opt(omega_m) over delta: dense scan, then golden-section
// refinement around the best sample. Throws NotCoolingError when
// Gamma_opt <= 0 across the range.
DetuningOptimum optimize_detuning(const ModelDescriptor& model_family, const MechanicalMode& mech,
                                  Interval delta_range, BranchPolicy policy,
                                  const DriveRule& drive = {}, const DetuningSearch& search = {});

enum class ThresholdReference {
  at_detuning,  // E_J* = margin * E_bif(delta) at each candidate delta
  resonance,    // E_J* = margin * E_bif(0)
};

struct DesignInputs {
  double phi0 = 0.06;
  MechanicalMode mech;
  double gamma = 1.0;
  std::optional<double> ej;     // explicit drive, used with DesignOptions::explicit_drive
  std::optional<double> delta;  // fixed detuning, used when optimize_detuning is false

  friend bool operator==(const DesignInputs&, const DesignInputs&) = default;
};

struct DesignOptions {
  double margin = 0.98;
  ThresholdReference reference = ThresholdReference::at_detuning;
  bool explicit_drive = false;
  bool optimize_detuning = true;
  Interval delta_range{-0.5, 0.5};
  BranchPolicy policy = BranchPolicy::plus_only;
  DetuningSearch search;

  friend bool operator==(const DesignOptions& a, const DesignOptions& b) {
    return a.margin == b.margin && a.reference == b.reference &&
           a.explicit_drive == b.explicit_drive && a.optimize_detuning == b.optimize_detuning &&
           a.delta_range == b.delta_range && a.policy == b.policy &&
           a.search.scan_points == b.search.scan_points && a.search.tolerance == b.search.tolerance;
  }
};

struct CoolingReport {
  double delta = 0.0;
  double ej = 0.0;
  double phi0 = 0.0;
  double ej_bif = 0.0;  // threshold the margin refers to; 0 for an explicit drive
  FixedPoint fixed_point;
  UniversalParams params;
  MechanicalMode mech;
  double gamma_opt = 0.0;
  double nbar_r = 0.0;
  double nbar_min = 0.0;
  double ep_gap = 0.0;
  ZeroHeatingDiagnostics zero_heating;
};

// Report for a fixed model: the admitted stable point with the largest
// Gamma_opt(omega_m). ej_bif is left at 0. nbar_r and nbar_min are NaN when
// that point heats. Throws NotCoolingError when no stable point is admitted.
CoolingReport cooling_report(const ModelDescriptor& model, const MechanicalMode& mech,
                             BranchPolicy policy, double gamma = 1.0);

// Josephson cooling design: small phi0, drive just below the bistability
// threshold, detuning tuned for maximal Gamma_opt(omega_m).
CoolingReport design_cooling(const DesignInputs& inputs, const DesignOptions& options = {});

}  // namespace optocool
