// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "bgk/phase_grid.hpp"
#include "bgk/regime.hpp"

namespace bgk {

/// Per-step diagnostics of a kinetic run.  Quantities are phase-space
/// integrals (cell sums times dx^d dv^d); *_eq_* columns evaluate the same
/// functional on the discrete equilibrium of the step's own moments, either
/// plain (shape from the moments themselves) or regularized (shape from the
/// bounded-regularized fields, the one the relaxation actually uses).
struct StepRecord {
  long step = 0;
  double t = 0.0;
  double mass = 0.0;
  double mom_x = 0.0;
  double mom_y = 0.0;     ///< 0 for d = 1
  double energy2 = 0.0;   ///< integral |v|^2 f
  double h_total = 0.0;   ///< integral H(f)
  double h_eq_plain = 0.0;
  double h_eq_reg = 0.0;
  double e2_eq_plain = 0.0;
  double e2_eq_reg = 0.0;
  double min_rho = 0.0;
  double min_f = 0.0;
  double l_infty = 0.0;
  double l_1p2n = 0.0;  ///< NaN on the indicator branch
  double xmom2 = 0.0;   ///< integral dist_per(x)^2 f
  double corr_max = 0.0;  ///< largest equilibrium correction this step
};

struct RunReport {
  int d = 1;
  double gamma = 0.0;
  double relax_eps = 1.0;
  double reg_eps = 0.0;
  double dt = 0.0;
  double dv = 0.0;
  double dx = 0.0;
  std::vector<StepRecord> steps;
};

/// CSV with one row per step.  Columns (in order): step, t, mass, mom_x,
/// [mom_y,] kinetic_energy (= energy2/2), total_entropy, min_rho, l_infty,
/// then the remaining StepRecord fields.  Values print with %.17g so equal
/// runs produce byte-equal files.
void write_run_csv(const std::string& path, const RunReport& report);

}  // namespace bgk
