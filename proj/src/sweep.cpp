#include "optocool/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct QuantityName {
  Quantity q;
  std::string_view name;
};

constexpr QuantityName kQuantities[] = {
    {Quantity::n, "n"},
    {Quantity::a0, "A0"},
    {Quantity::theta0, "theta0"},
    {Quantity::r1, "r1"},
    {Quantity::r2, "r2"},
    {Quantity::dtilde, "dtilde"},
    {Quantity::lambda_plus_re, "lambda_plus_re"},
    {Quantity::lambda_plus_im, "lambda_plus_im"},
    {Quantity::lambda_minus_re, "lambda_minus_re"},
    {Quantity::lambda_minus_im, "lambda_minus_im"},
    {Quantity::gamma_opt, "gamma_opt"},
    {Quantity::nbar_r, "nbar_r"},
    {Quantity::nbar_min, "nbar_min"},
    {Quantity::ep_gap, "ep_gap"},
    {Quantity::omega_opt, "omega_opt"},
    {Quantity::r1_offset, "r1_offset"},
};

int branch_rank(Branch b) { return static_cast<int>(b); }

}  // namespace

std::string_view to_string(AxisName name) {
  switch (name) {
    case AxisName::delta: return "delta";
    case AxisName::ej: return "ej";
    case AxisName::phi0: return "phi0";
    case AxisName::omega_m: return "omega_m";
  }
  return "unknown";
}

std::string_view to_string(AxisScale scale) {
  return scale == AxisScale::log ? "log" : "linear";
}

std::string_view to_string(BranchPolicy policy) {
  switch (policy) {
    case BranchPolicy::all: return "all";
    case BranchPolicy::stable_only: return "stable_only";
    case BranchPolicy::plus_only: return "plus_only";
  }
  return "unknown";
}

AxisName axis_name_from_string(std::string_view name) {
  for (AxisName a : {AxisName::delta, AxisName::ej, AxisName::phi0, AxisName::omega_m}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown sweep axis '" + std::string(name) + "'");
}

AxisScale axis_scale_from_string(std::string_view name) {
  if (name == "linear") return AxisScale::linear;
  if (name == "log") return AxisScale::log;
  throw ConfigError("unknown axis scale '" + std::string(name) + "'");
}

BranchPolicy branch_policy_from_string(std::string_view name) {
  for (BranchPolicy p : {BranchPolicy::all, BranchPolicy::stable_only, BranchPolicy::plus_only}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown branch policy '" + std::string(name) + "'");
}

std::string_view to_string(Quantity q) {
  for (const auto& e : kQuantities) {
    if (e.q == q) return e.name;
  }
  return "unknown";
}

Quantity quantity_from_string(std::string_view name) {
  for (const auto& e : kQuantities) {
    if (e.name == name) return e.q;
  }
  throw ConfigError("unknown output quantity '" + std::string(name) + "'");
}

std::vector<Quantity> all_quantities() {
  std::vector<Quantity> out;
  for (const auto& e : kQuantities) out.push_back(e.q);
  return out;
}

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v[i] = scale == AxisScale::linear ? min + (max - min) * t
                                      : min * std::pow(max / min, t);
  }
  return v;
}

void SweepGrid::validate() const {
  if (axes.empty() || axes.size() > 2) throw ConfigError("a sweep needs one or two axes");
  for (const Axis& a : axes) {
    if (a.count < 1) throw ConfigError("axis '" + std::string(to_string(a.name)) + "': count < 1");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw ConfigError("axis range not finite");
    if (a.scale == AxisScale::log && !(a.min > 0.0 && a.max > 0.0)) {
      throw ConfigError("log axis '" + std::string(to_string(a.name)) + "' needs positive bounds");
    }
  }
  if (axes.size() == 2 && axes[0].name == axes[1].name) throw ConfigError("duplicate sweep axis");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
}

std::size_t SweepGrid::size() const {
  std::size_t n = 1;
  for (const Axis& a : axes) n *= static_cast<std::size_t>(a.count);
  return n;
}

std::vector<FixedPoint> apply_branch_policy(std::vector<FixedPoint> points, BranchPolicy policy) {
  std::erase_if(points, [&](const FixedPoint& p) {
    switch (policy) {
      case BranchPolicy::all: return false;
      case BranchPolicy::stable_only: return !p.stable;
      case BranchPolicy::plus_only:
        return !p.stable || !(p.branch == Branch::mono || p.branch == Branch::plus);
    }
    return false;
  });
  std::stable_sort(points.begin(), points.end(), [](const FixedPoint& a, const FixedPoint& b) {
    if (a.branch != b.branch) return branch_rank(a.branch) < branch_rank(b.branch);
    return a.n > b.n;
  });
  return points;
}

namespace {

double quantity_value(Quantity q, const FixedPoint& fp, const UniversalParams& up,
                      const MechanicalMode& mech) {
  switch (q) {
    case Quantity::n: return fp.n;
    case Quantity::a0: return fp.a0;
    case Quantity::theta0: return fp.theta0;
    case Quantity::r1: return up.r1;
    case Quantity::r2: return up.r2;
    case Quantity::dtilde: return up.dtilde;
    case Quantity::lambda_plus_re: return fluctuation_eigenvalues(up).plus.real();
    case Quantity::lambda_plus_im: return fluctuation_eigenvalues(up).plus.imag();
    case Quantity::lambda_minus_re: return fluctuation_eigenvalues(up).minus.real();
    case Quantity::lambda_minus_im: return fluctuation_eigenvalues(up).minus.imag();
    case Quantity::gamma_opt: return optomechanical_damping(up, mech.g0, mech.omega_m);
    case Quantity::nbar_r:
      return up.r2 - up.dtilde > 0.0 ? residual_phonons(up, mech.omega_m) : kNaN;
    case Quantity::nbar_min: {
      const double g = optomechanical_damping(up, mech.g0, mech.omega_m);
      if (!(g > 0.0) || !(up.r2 - up.dtilde > 0.0)) return kNaN;
      return min_phonons(g, mech.gamma_m, residual_phonons(up, mech.omega_m), mech.nbar_T);
    }
    case Quantity::ep_gap: return exceptional_point_gap(up);
    case Quantity::omega_opt: return up.r2 - up.dtilde;
    case Quantity::r1_offset: return up.r1 + 0.5 * up.gamma;
  }
  return kNaN;
}

void apply_axis(AxisName name, double value, ModelDescriptor& model, MechanicalMode& mech) {
  switch (name) {
    case AxisName::delta: model.delta = value; break;
    case AxisName::ej: model.drive = value; break;
    case AxisName::phi0: model.phi0 = value; break;
    case AxisName::omega_m: mech.omega_m = value; break;
  }
}

std::string status_of(const std::exception& e) {
  if (dynamic_cast<const ConvergenceError*>(&e)) return "no_convergence";
  return "domain_error";
}

}  // namespace

Table run_sweep(const SweepGrid& grid, std::span<const Quantity> outputs, Execution exec) {
  grid.validate();
  std::vector<std::string> columns;
  for (const Axis& a : grid.axes) columns.emplace_back(to_string(a.name));
  columns.emplace_back("branch");
  for (Quantity q : outputs) columns.emplace_back(to_string(q));
  columns.emplace_back("status");

  std::vector<std::vector<double>> axis_values;
  for (const Axis& a : grid.axes) axis_values.push_back(a.values());

  const std::size_t total = grid.size();
  std::vector<std::vector<Table::Row>> per_point(total);

  parallel_for(
      total,
      [&](std::size_t index) {
        ModelDescriptor model = grid.model;
        MechanicalMode mech = grid.mech;
        Table::Row prefix;
        std::size_t rem = index;
        std::vector<double> coords(grid.axes.size());
        for (std::size_t k = grid.axes.size(); k-- > 0;) {
          const std::size_t c = axis_values[k].size();
          coords[k] = axis_values[k][rem % c];
          rem /= c;
        }
        for (std::size_t k = 0; k < grid.axes.size(); ++k) {
          apply_axis(grid.axes[k].name, coords[k], model, mech);
          prefix.emplace_back(coords[k]);
        }

        auto& rows = per_point[index];
        try {
          const auto points =
              apply_branch_policy(find_fixed_points(model, grid.gamma), grid.policy);
          for (const FixedPoint& fp : points) {
            const UniversalParams up = universal_params(model, fp, grid.gamma);
            Table::Row row = prefix;
            row.emplace_back(std::string(to_string(fp.branch)));
            for (Quantity q : outputs) row.emplace_back(quantity_value(q, fp, up, mech));
            row.emplace_back(std::string("ok"));
            rows.push_back(std::move(row));
          }
        } catch (const std::exception& e) {
          rows.clear();
          Table::Row row = prefix;
          row.emplace_back(std::string("-"));
          for (std::size_t q = 0; q < outputs.size(); ++q) row.emplace_back(kNaN);
          row.emplace_back(status_of(e));
          rows.push_back(std::move(row));
        }
      },
      exec);

  Table table(columns);
  for (auto& rows : per_point) {
    for (auto& row : rows) table.add_row(std::move(row));
  }
  return table;
}

}  // namespace optocool
