// SPDX-License-Identifier: MIT
//
// Pointwise equilibrium evaluation, its closed-form velocity moments, and
// the kinetic/macroscopic entropy pair.  Everything here is dimension- and
// branch-generic; grids are not involved.
#pragma once

#include "bgk/regime.hpp"
#include "bgk/vec.hpp"

namespace bgk {

struct MacroState {
  double rho = 0.0;
  Vec u;
};

struct MomentTriple {
  double m0 = 0.0;  ///< density
  Vec m1;           ///< momentum
  double m2 = 0.0;  ///< second moment: rho |u|^2 + d C_d rho^gamma
};

/// Radius of the equilibrium's velocity support ball.
///   Indicator:    r = (c_d rho)^(1/d)
///   PositivePart: r = (2 gamma/(gamma-1))^(1/2) rho^((gamma-1)/2)
/// rho < 0 throws Error(NegativeDensity); rho = 0 gives 0.
double support_radius(const GammaRegime& regime, double rho);

/// Equilibrium value at squared distance dist2 = |v - u|^2 from the mean
/// velocity.  Scalar core used by the samplers and quadrature oracles.
double eval_equilibrium_r2(const GammaRegime& regime, double rho, double dist2);

/// Equilibrium value at velocity v for macroscopic state (rho, u).
double eval_equilibrium(const GammaRegime& regime, const MacroState& state,
                        const Vec& v);

/// Exact moments (integral of (1, v, |v|^2) against the equilibrium).
MomentTriple closed_form_moments(const GammaRegime& regime,
                                 const MacroState& state);

/// Kinetic entropy density H(f, v) evaluated at a pointwise value f >= 0:
///   Indicator:    |v|^2 f / 2
///   PositivePart: |v|^2 f / 2 + f^(1+2/n) / (2 c^(2/n) (1 + 2/n))
/// f < 0 throws Error(NegativeValue).
double kinetic_entropy_density(const GammaRegime& regime, double f_value,
                               const Vec& v);

/// Same with |v|^2 passed directly (hot-loop form).
double kinetic_entropy_density_v2(const GammaRegime& regime, double f_value,
                                  double v2);

/// Macroscopic entropy eta(rho, u) = rho |u|^2 / 2 + C_d rho^gamma/(gamma-1).
/// Equals the velocity integral of H over the equilibrium at (rho, u).
double macro_entropy(const GammaRegime& regime, const MacroState& state);

}  // namespace bgk
