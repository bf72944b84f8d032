#pragma once

#include <exception>

#include "optocool/config.hpp"
#include "optocool/parallel.hpp"
#include "optocool/table.hpp"

namespace optocool {

// Output tables per command (status last where present):
//   fixed-points: branch A0 theta0 n re_alpha im_alpha stable max_re_lambda residual
//   spectrum:     branch theta0 omega_over_gamma s_nn
//   damping:      branch theta0 omega_over_gamma gamma_opt
//   phonons:      branch n theta0 omega_m_over_gamma gamma_opt nbar_r nbar_min omega_opt
//                 r1_offset status
//   sweep:        see run_sweep
//   optimize:     delta_star gamma_opt_star drive
//   design:       delta ej phi0 ej_bif branch A0 theta0 n dtilde r1 r2 gamma_opt
//                 gamma_opt_hz nbar_r nbar_min ep_gap r1_offset omega_opt
//   figure:       see figure_dataset
// gamma_opt_hz is Gamma_opt / 2 pi in Hz; NaN without cavity.gamma.
Table execute(const RunSpec& spec, Execution exec = Execution::parallel);

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitConvergence = 3, kExitDomain = 4 };

// Maps a caught exception to the process exit code.
int exit_code_for(const std::exception& e);

}  // namespace optocool
