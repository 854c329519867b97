// SPDX-License-Identifier: MIT
//
// Barotropic Euler reference solver: first-order finite volumes with the
// Rusanov flux on the same periodic torus the kinetic grid uses.
#pragma once

#include <string>
#include <vector>

#include "bgk/phase_grid.hpp"
#include "bgk/regime.hpp"

namespace bgk {

struct EulerState {
  int d = 1;
  int Nx = 0;      ///< cells per axis
  double L = 1.0;
  double t = 0.0;
  std::vector<double> rho;
  std::vector<double> mx;
  std::vector<double> my;  ///< empty for d = 1

  double dx() const { return L / Nx; }
  int cells() const { return d == 1 ? Nx : Nx * Nx; }
};

/// Pointwise flux of the barotropic system with pressure C_d rho^gamma.
/// Returns (mass flux vector, momentum flux tensor row-major d x d).
struct EulerFlux {
  double mass[2];
  double mom[4];
};

EulerFlux euler_flux(const GammaRegime& regime, double rho, const double* m,
                     int d);

/// Maximum signal speed |u| + sqrt(gamma C_d rho^(gamma-1)) over the state.
double max_wavespeed(const GammaRegime& regime, const EulerState& s);

/// One Rusanov finite-volume step.  dt must satisfy the CFL bound
/// dt <= 0.45 dx / max_wavespeed (Error(CFLViolation)); a negative updated
/// density throws Error(VacuumBreakdown) naming the cell.
void fv_step(EulerState& s, const GammaRegime& regime, double dt);

struct EulerStepRecord {
  double t = 0.0;
  double mass = 0.0;
  double mom_x = 0.0;
  double mom_y = 0.0;
  double eta_total = 0.0;  ///< integral of eta(rho, u)
};

struct EulerRunResult {
  EulerState state;
  std::vector<EulerStepRecord> steps;
  double max_slope_initial = 0.0;  ///< max |du/dx| of the initial data
  double max_slope_peak = 0.0;     ///< peak over the run
  double u_max_peak = 0.0;         ///< peak |u| component over the run
};

/// Advance to time T with CFL-limited steps (fraction 0.45), recording
/// conserved quantities and entropy per step.
EulerRunResult run_euler(const EulerState& s0, const GammaRegime& regime,
                         double T);

struct MacroDistance {
  double l1_rho = 0.0;
  double l1_momentum = 0.0;
};

/// L1 distance between kinetic moments and an Euler state on the same grid.
/// Grids must agree exactly (Error(GridMismatch)).
MacroDistance macro_distance(const MacroFieldSet& kinetic, const PhaseGrid& grid,
                             const EulerState& euler);

void write_euler_csv(const std::string& path, const EulerRunResult& run);

}  // namespace bgk
