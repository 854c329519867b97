// SPDX-License-Identifier: MIT
//
// Mollification and the bounded regularization of macroscopic fields, plus
// the strictly positive regularization of initial data.
#pragma once

#include "bgk/phase_grid.hpp"

namespace bgk {

/// Discrete radial bump stencil on a lattice with spacing h: weights at
/// offsets |k| h < eps, normalized so sum(w) * h^d = 1.
struct MollifierSpec {
  int d = 1;
  double eps = 0.0;
  double h = 0.0;  ///< lattice spacing the stencil was built for
  int radius = 0;  ///< cells per axis; offsets range over [-radius, radius]
  std::vector<double> w;  ///< (2 radius + 1)^d weights, zero outside the ball
};

/// Builds the stencil.  Requires 0 < eps <= 1 (the closed-form bounds on the
/// regularized fields need eps <= 1; larger values throw Error(BadBounds))
/// and eps >= 2h so at least one neighbor participates
/// (Error(EpsUnresolvable)).
MollifierSpec make_mollifier(int d, double h, double eps);

struct RegularizedFields {
  double eps = 0.0;
  std::vector<double> rho_eps;
  std::vector<double> ux_eps;
  std::vector<double> uy_eps;  ///< empty for d = 1
};

/// Bounded regularization of (rho, m): with s = rho * theta_eps and
/// t = m * theta_eps (periodic convolutions),
///   rho_eps = s / (1 + eps^(d+1) s),
///   u_eps   = t / (s + eps^(2d+1) (1 + |t|^2)).
/// Both satisfy rho_eps <= eps^-(2d+1) and |u_eps| <= eps^-(2d+1); the
/// bounds are checked and a violation throws Error(BoundViolation), which
/// signals an implementation bug rather than bad data.
RegularizedFields regularize_fields(const MacroFieldSet& macro,
                                    const MollifierSpec& moll,
                                    const PhaseGrid& grid);

/// Regularized initial datum: mollify f0 in x (periodic) and v (zero
/// padded) with the product bump kernel at scale eps, then add the strictly
/// positive floor eps * exp(-|v|^2) / (1 + |x|^q), where |x| is the periodic
/// distance to the center of cell 0.  Requires q > d (Error(BadQ)) and eps
/// resolvable on both lattices (Error(EpsUnresolvable)).
DistributionField regularize_initial(const DistributionField& f0, double eps,
                                     double q);

}  // namespace bgk
