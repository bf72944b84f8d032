#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "optocool/cavity_models.hpp"
#include "optocool/parallel.hpp"
#include "optocool/semiclassical.hpp"
#include "optocool/table.hpp"

namespace optocool {

enum class AxisName { delta, ej, phi0, omega_m };
enum class AxisScale { linear, log };
enum class BranchPolicy { all, stable_only, plus_only };

std::string_view to_string(AxisName name);
std::string_view to_string(AxisScale scale);
std::string_view to_string(BranchPolicy policy);
AxisName axis_name_from_string(std::string_view name);
AxisScale axis_scale_from_string(std::string_view name);
BranchPolicy branch_policy_from_string(std::string_view name);

struct Axis {
  AxisName name = AxisName::ej;
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  AxisScale scale = AxisScale::linear;

  std::vector<double> values() const;
  friend bool operator==(const Axis&, const Axis&) = default;
};

struct SweepGrid {
  std::vector<Axis> axes;  // first axis varies slowest
  ModelDescriptor model;   // fixed parameters; axes override fields
  MechanicalMode mech;
  BranchPolicy policy = BranchPolicy::stable_only;
  double gamma = 1.0;

  void validate() const;
  std::size_t size() const;

  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

enum class Quantity {
  n,
  a0,
  theta0,
  r1,
  r2,
  dtilde,
  lambda_plus_re,
  lambda_plus_im,
  lambda_minus_re,
  lambda_minus_im,
  gamma_opt,
  nbar_r,
  nbar_min,
  ep_gap,
  omega_opt,
  r1_offset,
};

std::string_view to_string(Quantity q);
Quantity quantity_from_string(std::string_view name);
std::vector<Quantity> all_quantities();

// Keeps the fixed points admitted by the policy, ordered by branch label
// (mono, plus, minus, unstable) and then by descending n.
std::vector<FixedPoint> apply_branch_policy(std::vector<FixedPoint> points, BranchPolicy policy);

// One row per (grid point, admitted branch). Columns: axis names, branch,
// requested quantities, status. Rows for failed grid points are kept with a
// status other than "ok". Row order is independent of exec.
Table run_sweep(const SweepGrid& grid, std::span<const Quantity> outputs,
                Execution exec = Execution::parallel);

}  // namespace optocool
