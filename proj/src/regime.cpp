// SPDX-License-Identifier: MIT

#include "bgk/regime.hpp"

#include <cmath>
#include <sstream>

#include "bgk/errors.hpp"

namespace bgk {

namespace {
constexpr double kBranchTol = 1e-12;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

double unit_sphere_area(int d) {
  if (d < 1) throw Error(ErrorCode::BadBounds, "sphere dimension must be >= 1");
  // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

std::string admissible_gammas(int d) {
  std::ostringstream os;
  if (d == 1) {
    os << "gamma in (1, 3] (gamma = 3 selects the indicator branch)";
  } else {
    os << "gamma in (1, " << (d + 4) << "/" << (d + 2) << "] or gamma = "
       << (d + 2) << "/" << d << " (indicator branch)";
  }
  return os.str();
}

GammaRegime make_regime(int d, double gamma) {
  if (d < 1)
    throw Error(ErrorCode::GammaOutOfRange, "dimension must be >= 1");
  GammaRegime r;
  r.d = d;
  r.gamma = gamma;

  const double gamma_ind = static_cast<double>(d + 2) / d;
  const double area = unit_sphere_area(d);

  if (std::fabs(gamma - gamma_ind) < kBranchTol) {
    r.branch = Branch::Indicator;
    r.n = 0.0;
    r.c = 1.0;
    r.c_d = d / area;
    // Lemma-level pressure constant for the indicator branch.
    r.C_d = area / (static_cast<double>(d) * (d + 2)) *
            std::pow(r.c_d, gamma_ind);
    return r;
  }

  const bool in_range =
      d == 1 ? (gamma > 1.0 && gamma < 3.0)
             : (gamma > 1.0 &&
                gamma <= static_cast<double>(d + 4) / (d + 2) + kBranchTol);
  if (!in_range) {
    std::ostringstream os;
    os << "gamma = " << gamma << " inadmissible for d = " << d
       << "; admissible: " << admissible_gammas(d);
    throw Error(ErrorCode::GammaOutOfRange, os.str());
  }

  r.branch = Branch::PositivePart;
  r.n = 2.0 / (gamma - 1.0) - d;
  const double big = 2.0 * gamma / (gamma - 1.0);
  // c = big^{-1/(gamma-1)} Gamma(gamma/(gamma-1)) / (pi^{d/2} Gamma(n/2+1)),
  // evaluated in log space so near-degenerate gammas fail loudly instead of
  // overflowing silently.
  const double log_c = -std::log(big) / (gamma - 1.0) +
                       std::lgamma(gamma / (gamma - 1.0)) -
                       0.5 * d * std::log(kPi) - std::lgamma(0.5 * r.n + 1.0);
  r.c = std::exp(log_c);
  if (!std::isfinite(r.c) || r.c <= 0.0) {
    std::ostringstream os;
    os << "normalization constant not representable for gamma = " << gamma
       << " (too close to 1)";
    throw Error(ErrorCode::GammaOutOfRange, os.str());
  }
  r.c_d = 0.0;
  r.C_d = 1.0;
  r.h_exp = 1.0 + 2.0 / r.n;
  r.h_coef = 1.0 / (2.0 * std::pow(r.c, 2.0 / r.n) * r.h_exp);
  if (!std::isfinite(r.h_coef))
    throw Error(ErrorCode::GammaOutOfRange,
                "entropy coefficient not representable for this gamma");
  return r;
}

}  // namespace bgk
