// SPDX-License-Identifier: MIT
//
// Geometry of pairs of equilibrium support balls: case classification,
// spherical-cap moment formulas, rotations onto a coordinate axis, the
// weighted L1 distance between two equilibria, and the Lipschitz-ratio
// survey built on top of it.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bgk/equilibrium.hpp"
#include "bgk/regime.hpp"
#include "bgk/vec.hpp"

namespace bgk {

/// Mutually exclusive configuration of two support balls B_f, B_g with
/// centers a distance U apart (after canonicalization r_f >= r_g):
///   D1: disjoint            U > r_f + r_g
///   D4: nested              U <= r_f - r_g
///   D2: proper crossing     otherwise, with U^2 >  r_f^2 - r_g^2
///   D3: shallow crossing    otherwise, with U^2 <= r_f^2 - r_g^2
/// Boundary ties resolve in the order D1, D4, D2/D3 as written above.
enum class PairCase { D1 = 1, D2 = 2, D3 = 3, D4 = 4 };

struct BallPairGeometry {
  double r_f = 0.0;  ///< larger radius after canonicalization
  double r_g = 0.0;
  Vec u_f, u_g;
  double U = 0.0;  ///< |u_f - u_g|
  /// Cap angles at the intersection; NaN when the boundary spheres do not
  /// meet (D1, D4) or U = 0 makes them undefined.
  double theta_f = 0.0;
  double theta_g = 0.0;
  /// Crescent angle arccos((r_f^2 - r_g^2 - U^2)/(2 r_g U)); defined in
  /// D2/D3 and clamps to 0 at the D4 boundary, NaN when U = 0.
  double theta_tilde = 0.0;
  PairCase case_id = PairCase::D4;
  bool swapped = false;  ///< inputs were exchanged to enforce r_f >= r_g
};

/// Classify the support balls of two equilibrium states.  States with zero
/// density are allowed (empty balls classify as nested).
BallPairGeometry classify_case(const GammaRegime& regime, const MacroState& f,
                               const MacroState& g);

/// Closed form of the power-sine primitive: integral of sin^m over [0, theta]
/// for m >= 0.
double sin_power_integral(int m, double theta);

/// Volume of the spherical cap {v in B(0,r): v_d >= r cos(theta)} in R^d.
/// Preconditions: d >= 2, r >= 0, theta in [0, pi/2]; violations throw
/// Error(BadAngle) (or BadBounds for r < 0 / d < 2).
double cap_volume(int d, double r, double theta);

/// Axial component of the cap's first moment (integral of v_d over the cap).
/// Same preconditions as cap_volume.
double cap_first_moment(int d, double r, double theta);

/// Integral of |v|^2 over the cap.  Same preconditions.
double cap_second_moment(int d, double r, double theta);

struct RotationToAxis {
  int d = 0;
  std::vector<double> R;  ///< row-major d x d, maps w to |w| e_d
};

/// Proper rotation (det +1, orthogonal) taking w to |w| e_d, built as a
/// sequence of plane rotations.  |w| = 0 throws Error(ZeroVector).
RotationToAxis rotation_to_axis(const std::vector<double>& w);

/// Velocity-space quadrature specification for the distance oracle: a
/// midpoint grid of nv cells per axis on [-vmax, vmax]^d, refined twice and
/// extrapolated.
struct VQuad {
  double vmax = 4.0;
  int nv = 64;
};

/// Weighted L1 distance  integral of (1 + |v|^2) |M[f] - M[g]| dv  computed
/// by midpoint quadrature with two refinements and Richardson extrapolation
/// (first-order model on the indicator branch, second-order otherwise).
/// Throws Error(GridTooSmall) when either support ball does not fit in the
/// quadrature box.
double l12_equilibrium_distance(const GammaRegime& regime, const MacroState& f,
                                const MacroState& g, const VQuad& quad);

struct SurveyParams {
  double rho_lo = 0.0;    ///< C0
  double rho_hi = 2.0;    ///< C1
  double u_max = 1.0;     ///< C2
  int samples = 10000;
  std::uint64_t seed = 12345;
  VQuad quad{};
};

struct SurveyResult {
  double sup_ratio = 0.0;
  MacroState argmax_f, argmax_g;
  PairCase argmax_case = PairCase::D1;
  std::array<int, 4> case_counts{0, 0, 0, 0};  ///< indexed D1..D4
  int evaluated = 0;  ///< samples with denominator above the cutoff
  int skipped = 0;    ///< samples dropped by the 1e-10 denominator cutoff
  /// running_sup[k] = sup ratio over samples 0..k (size = samples).
  std::vector<double> running_sup;
};

/// One evaluated survey draw (skipped draws carry ratio = 0, distance = 0).
struct SurveySample {
  int index = 0;
  double rho_f = 0.0;
  double rho_g = 0.0;
  double du = 0.0;  ///< |u_f - u_g|
  PairCase case_id = PairCase::D1;
  double distance = 0.0;
  double ratio = 0.0;
  bool skipped = false;
};

/// Randomized survey of the ratio
///   l12(M[f], M[g]) / (|rho_f - rho_g| + |u_f - u_g|)
/// over states rho ~ U[C0, C1], u uniform in the ball |u| <= C2.  Draws are
/// a pure function of (seed, sample index).  Throws Error(BadBounds) for an
/// empty or negative sampling box and Error(EmptySurvey) for samples <= 0.
/// When `trace` is non-null every draw is appended to it.
SurveyResult lipschitz_ratio_survey(const GammaRegime& regime,
                                    const SurveyParams& params,
                                    std::vector<SurveySample>* trace = nullptr);

struct MeanValueBound {
  double bound = 0.0;      ///< C * (|dr| + |du| (1 + |v|)) * J
  double true_diff = 0.0;  ///< |M[f](v) - M[g](v)|
  double C = 0.0;
  double J = 0.0;  ///< the averaged-power integral over theta in [0,1]
};

/// Pointwise mean-value control of |M[f](v) - M[g](v)| on the positive-part
/// branch, with the averaged-power integral J evaluated by adaptive
/// quadrature.  Requires v strictly inside both support balls
/// (Error(OutsideIntersection)) and the positive-part branch
/// (Error(WrongBranch)).
MeanValueBound mean_value_bound(const GammaRegime& regime, const MacroState& f,
                                const MacroState& g, const Vec& v);

}  // namespace bgk
