// SPDX-License-Identifier: MIT
//
// Discrete phase space: periodic position torus [0,L)^d times the velocity
// box [-Vmax, Vmax]^d, both with even cell counts and midpoint centers.
// Home of the distribution field container, discrete moments, the
// moment-matched discrete equilibrium, norms, and snapshot/CSV output.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bgk/equilibrium.hpp"
#include "bgk/regime.hpp"

namespace bgk {

struct PhaseGrid {
  int d = 1;
  double L = 1.0;
  int Nx = 0;  ///< position cells per axis
  double Vmax = 0.0;
  int Nv = 0;  ///< velocity cells per axis

  double dx = 0.0;
  double dv = 0.0;
  int nxc = 0;  ///< total position cells (Nx^d)
  int nvc = 0;  ///< total velocity cells (Nv^d)

  std::vector<double> xc;   ///< position centers, one axis
  std::vector<double> vc;   ///< velocity centers, one axis
  std::vector<double> vc2;  ///< squared velocity centers

  double x_center(int i) const { return xc[static_cast<std::size_t>(i)]; }
  double v_center(int j) const { return vc[static_cast<std::size_t>(j)]; }

  /// dv^d (velocity cell volume)
  double dvol() const { return d == 1 ? dv : dv * dv; }
  /// dx^d (position cell volume)
  double xvol() const { return d == 1 ? dx : dx * dx; }
};

/// Validates d in {1,2}, L > 0, Vmax > 0, Nx and Nv even and >= 4; throws
/// Error(BadBounds) otherwise.
PhaseGrid make_grid(int d, double L, int Nx, double Vmax, int Nv);

/// Distribution values indexed f[x_cell * nvc + v_cell] with
/// x_cell = iy*Nx + ix and v_cell = jy*Nv + jx for d = 2 (vx varies fastest,
/// so per-(x, vy) rows are contiguous for the row kernels).
struct DistributionField {
  PhaseGrid grid;
  std::vector<double> f;
  double time = 0.0;

  double* row(int x_cell) { return f.data() + static_cast<std::size_t>(x_cell) * grid.nvc; }
  const double* row(int x_cell) const { return f.data() + static_cast<std::size_t>(x_cell) * grid.nvc; }
};

DistributionField make_field(const PhaseGrid& grid);

/// Per-position-cell moments.  Where rho <= floor the stored momentum and
/// velocity are zeroed.
struct MacroFieldSet {
  int d = 1;
  std::vector<double> rho;
  std::vector<double> mom_x;
  std::vector<double> mom_y;    ///< empty for d = 1
  std::vector<double> energy2;  ///< integral of |v|^2 f dv per cell
};

/// Density floor below which a cell is treated as vacuum when recovering u.
inline constexpr double kRhoFloor = 1e-14;

MacroFieldSet discrete_moments(const DistributionField& field);

/// Mean velocity of cell i (0 for vacuum cells).
Vec cell_velocity(const MacroFieldSet& m, int i);

struct EquilibriumBuildStats {
  double max_correction = 0.0;   ///< largest affine correction magnitude
  double mean_correction = 0.0;  ///< average over non-vacuum cells
};

/// Discrete equilibrium whose moments match (rho, m) exactly: the analytic
/// equilibrium is sampled at cell centers, then a per-cell affine-in-v
/// correction restores the sampled (rho, m).  The equilibrium SHAPE may be
/// taken from a different state than the matching target (the regularized
/// relaxation needs that); the plain overload uses the same state for both.
///
/// Throws Error(SupportOverflow) when a shape support ball pokes out of the
/// velocity box and Error(CorrectionFailure) when matching would need a
/// correction beyond 50% (nonnegativity would no longer be guaranteed).
DistributionField discrete_equilibrium_with_target(
    const GammaRegime& regime, const MacroFieldSet& shape,
    const MacroFieldSet& target, const PhaseGrid& grid,
    EquilibriumBuildStats* stats = nullptr);

DistributionField discrete_equilibrium(const GammaRegime& regime,
                                       const MacroFieldSet& macro,
                                       const PhaseGrid& grid,
                                       EquilibriumBuildStats* stats = nullptr);

/// Norms over phase space.  l1_2 weights by (1 + |v|^2); l_1p2n is the
/// L^(1+2/n) norm and only exists on the positive-part branch.
struct FieldNorms {
  double l1 = 0.0;
  double l1_2 = 0.0;
  double l_infty = 0.0;
  std::optional<double> l_1p2n;
};

FieldNorms field_norms(const DistributionField& field, const GammaRegime& regime);

// ==========================================================================
// Serialization
// ==========================================================================

/// Text header (d, L, Nx, Vmax, Nv, time, gamma) followed by the raw values
/// as little-endian float64.  Readable by numpy via a two-line helper; the
/// header ends with an "end_header" line.
void write_snapshot(const std::string& path, const DistributionField& field,
                    double gamma);

struct Snapshot {
  DistributionField field;
  double gamma = 0.0;
};

Snapshot read_snapshot(const std::string& path);

/// Macro fields as CSV: x (and y), rho, momentum, velocity, energy2.
void write_macro_csv(const std::string& path, const PhaseGrid& grid,
                     const MacroFieldSet& macro);

}  // namespace bgk
