// SPDX-License-Identifier: MIT
//
// Admissible exponent regimes for the barotropic equilibrium.  Two branches
// exist: at gamma = (d+2)/d the equilibrium is an indicator of a velocity
// ball, below that threshold it is a truncated power ("positive part").
#pragma once

#include <string>

namespace bgk {

enum class Branch { Indicator, PositivePart };

/// Frozen per-(d, gamma) constants.  Built once by make_regime and passed
/// around by const reference; everything downstream reads from here instead
/// of recomputing gamma algebra.
struct GammaRegime {
  int d = 1;
  double gamma = 0.0;
  Branch branch = Branch::Indicator;

  /// Positive-part exponent n = 2/(gamma-1) - d; zero on the indicator branch.
  double n = 0.0;
  /// Positive-part normalization constant; 1 on the indicator branch where
  /// the equilibrium amplitude is 1.
  double c = 1.0;
  /// Indicator ball-volume constant c_d = d / |S^{d-1}|; zero otherwise.
  double c_d = 0.0;
  /// Pressure constant: p(rho) = C_d rho^gamma.
  double C_d = 1.0;

  // Cached entropy-power coefficients for the positive-part kinetic entropy
  // H(f,v) = |v|^2 f / 2 + h_coef * f^h_exp (both zero for the indicator).
  double h_exp = 0.0;
  double h_coef = 0.0;
};

/// Surface measure |S^{d-1}| of the unit sphere in R^d (d >= 1; |S^0| = 2).
double unit_sphere_area(int d);

/// Human-readable description of the admissible gamma set for dimension d.
std::string admissible_gammas(int d);

/// Validates (d, gamma) and freezes all derived constants.
/// Throws Error(GammaOutOfRange) outside the admissible set:
///   d = 1:  gamma in (1, 3],   d >= 2:  gamma in (1, (d+4)/(d+2)] or
///   gamma = (d+2)/d exactly (within 1e-12, selecting the indicator branch).
GammaRegime make_regime(int d, double gamma);

}  // namespace bgk
