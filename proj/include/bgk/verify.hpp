// SPDX-License-Identifier: MIT
//
// Reusable verification studies behind the `verify` CLI subcommands and the
// acceptance suite: moment-identity refinement orders and survey stability.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgk/ball_geometry.hpp"
#include "bgk/regime.hpp"

namespace bgk {

struct MomentStudyLevel {
  int nv = 0;
  double err_m0 = 0.0;  ///< mean |quadrature - closed form| over states
  double err_m1 = 0.0;
  double err_m2 = 0.0;
};

struct MomentStudyResult {
  std::vector<MomentStudyLevel> levels;  ///< coarse to fine
  /// Endpoint-averaged refinement orders log2(err_first/err_last)/pairs.
  double order_m0 = 0.0;
  double order_m1 = 0.0;
  double order_m2 = 0.0;
  std::string csv_text;
};

/// Quadrature-vs-closed-form study of the equilibrium moments: `states`
/// random macroscopic states (rho in [0, 2.5], |u| components <= 1.2), the
/// plain sampled equilibrium (no conservation correction) integrated on
/// midpoint grids of nv_levels cells per axis, errors averaged over states.
/// nv_levels must be a doubling chain (Error(BadBounds) otherwise).
MomentStudyResult moment_order_study(const GammaRegime& regime, int states,
                                     std::uint64_t seed,
                                     const std::vector<int>& nv_levels);

/// Stability report of the Lipschitz survey: the sup ratio at `samples`
/// draws versus 2x draws of the same stream.
struct SurveyStability {
  SurveyResult full;       ///< the 2 N -sample survey
  double sup_at_half = 0.0;
  double sup_at_full = 0.0;
  double rel_change = 0.0;  ///< |full - half| / half
};

SurveyStability survey_stability(const GammaRegime& regime,
                                 const SurveyParams& params,
                                 std::vector<SurveySample>* trace = nullptr);

}  // namespace bgk
