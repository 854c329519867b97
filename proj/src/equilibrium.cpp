// SPDX-License-Identifier: MIT

#include "bgk/equilibrium.hpp"

#include <cmath>
#include <sstream>

#include "bgk/errors.hpp"

namespace bgk {

double support_radius(const GammaRegime& regime, double rho) {
  if (rho < 0.0) {
    std::ostringstream os;
    os << "support_radius: rho = " << rho;
    throw Error(ErrorCode::NegativeDensity, os.str());
  }
  if (rho == 0.0) return 0.0;
  if (regime.branch == Branch::Indicator)
    return std::pow(regime.c_d * rho, 1.0 / regime.d);
  const double big = 2.0 * regime.gamma / (regime.gamma - 1.0);
  return std::sqrt(big) * std::pow(rho, 0.5 * (regime.gamma - 1.0));
}

double eval_equilibrium_r2(const GammaRegime& regime, double rho, double dist2) {
  if (rho < 0.0) {
    std::ostringstream os;
    os << "eval_equilibrium: rho = " << rho;
    throw Error(ErrorCode::NegativeDensity, os.str());
  }
  if (rho == 0.0) return 0.0;
  const double r = support_radius(regime, rho);
  if (regime.branch == Branch::Indicator) return dist2 <= r * r ? 1.0 : 0.0;
  const double t = r * r - dist2;
  if (t <= 0.0) return 0.0;
  const double half_n = 0.5 * regime.n;
  if (half_n == 1.0) return regime.c * t;
  return regime.c * std::pow(t, half_n);
}

double eval_equilibrium(const GammaRegime& regime, const MacroState& state,
                        const Vec& v) {
  return eval_equilibrium_r2(regime, state.rho, norm2(v - state.u));
}

MomentTriple closed_form_moments(const GammaRegime& regime,
                                 const MacroState& state) {
  if (state.rho < 0.0)
    throw Error(ErrorCode::NegativeDensity, "closed_form_moments: rho < 0");
  MomentTriple m;
  m.m0 = state.rho;
  m.m1 = state.rho * state.u;
  m.m1.d = state.u.d;
  m.m2 = state.rho * norm2(state.u) +
         regime.d * regime.C_d * std::pow(state.rho, regime.gamma);
  return m;
}

double kinetic_entropy_density_v2(const GammaRegime& regime, double f_value,
                                  double v2) {
  if (f_value < 0.0) {
    std::ostringstream os;
    os << "kinetic_entropy_density: f = " << f_value;
    throw Error(ErrorCode::NegativeValue, os.str());
  }
  double h = 0.5 * v2 * f_value;
  if (regime.branch == Branch::PositivePart && f_value > 0.0)
    h += regime.h_coef * std::pow(f_value, regime.h_exp);
  return h;
}

double kinetic_entropy_density(const GammaRegime& regime, double f_value,
                               const Vec& v) {
  return kinetic_entropy_density_v2(regime, f_value, norm2(v));
}

double macro_entropy(const GammaRegime& regime, const MacroState& state) {
  if (state.rho < 0.0)
    throw Error(ErrorCode::NegativeDensity, "macro_entropy: rho < 0");
  if (state.rho == 0.0) return 0.0;
  return 0.5 * state.rho * norm2(state.u) +
         regime.C_d / (regime.gamma - 1.0) * std::pow(state.rho, regime.gamma);
}

}  // namespace bgk
