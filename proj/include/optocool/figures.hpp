#pragma once

#include <string_view>
#include <vector>

#include "optocool/design.hpp"
#include "optocool/parallel.hpp"
#include "optocool/semiclassical.hpp"
#include "optocool/table.hpp"

namespace optocool {

enum class FigureId { f1b, f1c, f1d, f1e, f2a, f2b, f3a, f3b, f3c, f3d, f4a, f4b, f4c, f4d };

std::string_view to_string(FigureId id);
FigureId figure_id_from_string(std::string_view name);  // ConfigError on unknown id
std::vector<FigureId> all_figures();

struct Range {
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  bool log = false;

  std::vector<double> values() const;
  friend bool operator==(const Range&, const Range&) = default;
};

// What `series` holds depends on the figure:
//   1b 1c 1e 2a 2b : detunings
//   1d             : drives E_J*/hbar gamma
//   4a 4b          : drive ratios E_J*/E_bif(delta)
//   4c 4d          : distances to threshold (E_J* - E_bif(delta))/hbar gamma
// `x` is the horizontal axis: E_J* (1b 1c 1e), delta (1d), E_J*/E_bif(0)
// (2a..3d), omega (4a 4b), omega_m (4c 4d).
struct FigureParams {
  double phi0 = 0.06;
  std::vector<double> series;
  double delta = 0.0;  // 3a..3d, 4a 4b
  Range x;
  MechanicalMode mech;
  Interval delta_range;  // 4c 4d
  int scan_points = 81;  // 4c 4d
  int threshold_points = 41;

  friend bool operator==(const FigureParams&, const FigureParams&) = default;
};

// Per-figure defaults; reference_mechanics() is the 3 MHz / 302 kHz design.
FigureParams figure_defaults(FigureId id);
MechanicalMode reference_mechanics();

// Columns per figure (status last):
//   1b: ej_over_hgamma delta_over_gamma branch A0 theta0 n
//   1c: as 1b + gamma_opt cooling
//   1d: delta_over_gamma ej_over_hgamma branch A0 theta0 n gamma_opt cooling
//   1e: delta_over_gamma ej_over_hgamma branch A0 theta0 re_alpha im_alpha n cooling
//   2a: ej_ratio ej_over_hgamma delta_over_gamma branch r1 r2 dtilde r1_offset
//   2b: ej_ratio ej_over_hgamma delta_over_gamma branch omega_opt
//   3a 3b: ej_ratio ej_over_hgamma delta_over_gamma branch omega_peak gamma_opt nbar_r
//   3c 3d: ej_ratio ej_over_hgamma delta_over_gamma branch lambda_plus_re
//          lambda_plus_im lambda_minus_re lambda_minus_im ep_gap real_eigenvalues
//   4a 4b: ej_ratio ej_over_hgamma delta_over_gamma branch theta0 omega_over_gamma s_nn
//   4c 4d: distance_over_hgamma omega_m_over_gamma branch delta_star ej_over_hgamma
//          gamma_opt nbar_r nbar_min
// cooling is the sign of Gamma_opt(omega_m): 1, 0 or -1.
Table figure_dataset(FigureId id, const FigureParams& params,
                     Execution exec = Execution::parallel);

}  // namespace optocool
