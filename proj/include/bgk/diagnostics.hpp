// SPDX-License-Identifier: MIT
//
// A-posteriori checks of the structural inequalities a run is supposed to
// satisfy.  Margins are signed with "satisfied" negative (or zero), so a
// check passes when margin <= tol(dt, dv).
#pragma once

#include "bgk/phase_grid.hpp"
#include "bgk/regime.hpp"
#include "bgk/report.hpp"

namespace bgk {

/// Discretization-aware tolerance: tol = c1 * dv + c2 * dt.
double margin_tol(double dv, double dt, double c1 = 1.0, double c2 = 1.0);

/// Max over position cells of integral of H(M_h[f]) - H(f) dv, where M_h[f]
/// is the moment-matched discrete equilibrium of the cell.  Nonpositive when
/// the equilibrium minimizes entropy at fixed discrete moments.
double check_minimization(const DistributionField& field,
                          const GammaRegime& regime);

struct EntropyMargins {
  double plain = 0.0;  ///< dissipation measured against M_h[f]
  double reg = 0.0;    ///< dissipation measured against M_h^eps[f]
};

/// Entropy inequality along a run: the worst (largest) value over steps j of
///   H(t_j) + (1/relax_eps) * trapezoid_0^j (H - H_eq) dt - H(t_0).
/// Requires at least two recorded steps (Error(BadBounds)); both equilibrium
/// variants are reported.
EntropyMargins check_entropy_inequality(const RunReport& report);

struct EnergyMargins {
  double monotone = 0.0;  ///< max single-step increase of integral |v|^2 f
  double plain = 0.0;     ///< mild-form margin against M_h[f]
  double reg = 0.0;       ///< mild-form margin against M_h^eps[f]
};

/// Second-moment decay along a run (indicator branch: kinetic entropy is
/// energy/2, so the energy analogue of the entropy inequality must hold).
EnergyMargins check_energy_decay(const RunReport& report);

struct InterpolationRatios {
  double ratio_rho = 0.0;
  double ratio_mom = 0.0;
};

/// Velocity-averaging ratios
///   ||rho_f||_{(d+2)/d}       / (||f||_inf^{2/(d+2)} E^{d/(d+2)})
///   ||rho_f u_f||_{(d+2)/(d+1)} / (||f||_inf^{1/(d+2)} E^{(d+1)/(d+2)})
/// with E = integral |v|^2 f.  Scale-invariant in f; f == 0 throws
/// Error(ZeroField).
InterpolationRatios check_interpolation(const DistributionField& field);

/// Margin of sup_t ||f||_{L1 ∩ L^(1+2/n)} against the initial-data bound
/// ||f0||_{L1 ∩ L^(1+2/n)} + || |v|^2 f0 ||_{L1} (the norm of the
/// intersection is the max of the two norms).  Positive-part branch only
/// (Error(WrongBranch) on the indicator branch).
double check_l1p2n_bound(const RunReport& report, const GammaRegime& regime);

struct MomentGrowthCertificate {
  double max_violation = 0.0;  ///< worst step excess over the envelope
  bool satisfied = false;
};

/// Step-by-step Gronwall envelope for the spatial second moment
/// X = integral dist_per(x)^2 f:
///   X_{j+1} - X_j <= dt * (3 X_j + E_j + 2 eps mass_j) + tol.
MomentGrowthCertificate check_spatial_moment(const RunReport& report,
                                             double tol);

}  // namespace bgk
