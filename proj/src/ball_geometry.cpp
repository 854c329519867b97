// SPDX-License-Identifier: MIT
//
// =========================================================================
// Support-ball geometry and the equilibrium distance machinery
// =========================================================================
//
// Notation: a pair of equilibria has support balls B_f = B(u_f, r_f) and
// B_g = B(u_g, r_g) with center distance U.  After canonicalization
// (r_f >= r_g) the relative position falls into one of the four cases D1
// (disjoint) / D2 / D3 (crossing, split by U^2 vs r_f^2 - r_g^2) / D4
// (nested).  Cap angles measure the intersection lens, theta_tilde the
// crescent B_g \ B_f.

#include "bgk/ball_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bgk/errors.hpp"
#include "bgk/rng.hpp"

namespace bgk {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = 3.14159265358979323846;

double clamped_acos(double x) {
  if (x > 1.0) {
    if (x > 1.0 + 1e-9)
      throw Error(ErrorCode::BadAngle, "acos argument above 1 beyond slack");
    x = 1.0;
  }
  if (x < -1.0) {
    if (x < -1.0 - 1e-9)
      throw Error(ErrorCode::BadAngle, "acos argument below -1 beyond slack");
    x = -1.0;
  }
  return std::acos(x);
}

/// Flattened per-state evaluation constants for the hot quadrature loops.
struct EqParams {
  bool empty = true;
  bool indicator = true;
  double ux = 0.0, uy = 0.0;
  double r = 0.0;
  double r2 = 0.0;      // indicator threshold
  double c = 0.0;       // positive-part amplitude
  double half_n = 0.0;  // positive-part exponent
};

EqParams eq_params(const GammaRegime& regime, const MacroState& s) {
  EqParams p;
  if (s.rho < 0.0)
    throw Error(ErrorCode::NegativeDensity, "equilibrium state: rho < 0");
  if (s.rho == 0.0) return p;
  p.empty = false;
  p.indicator = regime.branch == Branch::Indicator;
  p.ux = s.u[0];
  p.uy = s.u.d > 1 ? s.u[1] : 0.0;
  p.r = support_radius(regime, s.rho);
  p.r2 = p.r * p.r;
  p.c = regime.c;
  p.half_n = 0.5 * regime.n;
  return p;
}

inline double eq_value(const EqParams& p, double dist2) {
  if (p.empty) return 0.0;
  if (p.indicator) return dist2 <= p.r2 ? 1.0 : 0.0;
  const double t = p.r2 - dist2;
  if (t <= 0.0) return 0.0;
  if (p.half_n == 1.0) return p.c * t;
  return p.c * std::pow(t, p.half_n);
}

struct AxisRange {
  int j0 = 0;
  int j1 = -1;  // inclusive; empty when j1 < j0
};

AxisRange restrict_axis(double vmax, int nv, double lo, double hi) {
  const double h = 2.0 * vmax / nv;
  AxisRange r;
  r.j0 = std::max(0, static_cast<int>(std::floor((lo + vmax) / h)) - 1);
  r.j1 = std::min(nv - 1, static_cast<int>(std::floor((hi + vmax) / h)) + 1);
  return r;
}

/// Midpoint approximation of the (1 + |v|^2)-weighted L1 distance on one
/// grid level, restricted to the union bounding box of the two supports
/// (the integrand vanishes identically outside, so the restriction is
/// exact).
double l12_level(const GammaRegime& regime, const EqParams& pf,
                 const EqParams& pg, const VQuad& quad, int nv) {
  const double h = 2.0 * quad.vmax / nv;
  auto bounds = [&](int axis, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const EqParams* p : {&pf, &pg}) {
      if (p->empty) continue;
      const double u = axis == 0 ? p->ux : p->uy;
      lo = std::min(lo, u - p->r);
      hi = std::max(hi, u + p->r);
    }
  };
  if (pf.empty && pg.empty) return 0.0;

  double lox, hix;
  bounds(0, lox, hix);
  const AxisRange rx = restrict_axis(quad.vmax, nv, lox, hix);

  double acc = 0.0;
  if (regime.d == 1) {
    for (int j = rx.j0; j <= rx.j1; ++j) {
      const double v = -quad.vmax + (j + 0.5) * h;
      const double d2f = (v - pf.ux) * (v - pf.ux);
      const double d2g = (v - pg.ux) * (v - pg.ux);
      acc += (1.0 + v * v) * std::fabs(eq_value(pf, d2f) - eq_value(pg, d2g));
    }
    return acc * h;
  }

  double loy, hiy;
  bounds(1, loy, hiy);
  const AxisRange ry = restrict_axis(quad.vmax, nv, loy, hiy);
  for (int jy = ry.j0; jy <= ry.j1; ++jy) {
    const double vy = -quad.vmax + (jy + 0.5) * h;
    const double bf = (vy - pf.uy) * (vy - pf.uy);
    const double bg = (vy - pg.uy) * (vy - pg.uy);
    const double wy = 1.0 + vy * vy;
    for (int jx = rx.j0; jx <= rx.j1; ++jx) {
      const double vx = -quad.vmax + (jx + 0.5) * h;
      const double d2f = (vx - pf.ux) * (vx - pf.ux) + bf;
      const double d2g = (vx - pg.ux) * (vx - pg.ux) + bg;
      acc += (wy + vx * vx) * std::fabs(eq_value(pf, d2f) - eq_value(pg, d2g));
    }
  }
  return acc * h * h;
}

void check_quad_fits(const GammaRegime& regime, const EqParams& p,
                     const VQuad& quad) {
  if (p.empty) return;
  const double us[2] = {p.ux, p.uy};
  for (int k = 0; k < regime.d; ++k) {
    if (std::fabs(us[k]) + p.r > quad.vmax + 1e-12) {
      std::ostringstream os;
      os << "support ball (|u_" << k << "| = " << std::fabs(us[k])
         << ", r = " << p.r << ") exceeds quadrature box vmax = " << quad.vmax;
      throw Error(ErrorCode::GridTooSmall, os.str());
    }
  }
}

/// Adaptive Simpson with a fixed-depth guard; integrand must be smooth on
/// [a, b], which holds for the averaged-power integrand strictly inside the
/// support intersection.
template <typename F>
double adaptive_simpson(F&& fn, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = fn(lm), frm = fn(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate_01(F&& fn, double tol) {
  const double fa = fn(0.0), fm = fn(0.5), fb = fn(1.0);
  const double whole = (fa + 4.0 * fm + fb) / 6.0;
  return adaptive_simpson(fn, 0.0, 1.0, fa, fm, fb, whole, tol, 30);
}

}  // namespace

// ==========================================================================
// Classification
// ==========================================================================

BallPairGeometry classify_case(const GammaRegime& regime, const MacroState& f,
                               const MacroState& g) {
  BallPairGeometry geo;
  double rf = support_radius(regime, f.rho);
  double rg = support_radius(regime, g.rho);
  MacroState a = f, b = g;
  if (rf < rg) {
    std::swap(rf, rg);
    std::swap(a, b);
    geo.swapped = true;
  }
  geo.r_f = rf;
  geo.r_g = rg;
  geo.u_f = a.u;
  geo.u_g = b.u;
  geo.U = norm(a.u - b.u);
  geo.theta_f = geo.theta_g = geo.theta_tilde = kNan;

  const double U = geo.U;
  if (U > rf + rg) {
    geo.case_id = PairCase::D1;
  } else if (U <= rf - rg) {
    geo.case_id = PairCase::D4;
  } else {
    geo.case_id = U * U > rf * rf - rg * rg ? PairCase::D2 : PairCase::D3;
  }

  if (U > 0.0 && rg > 0.0) {
    if (geo.case_id == PairCase::D2 || geo.case_id == PairCase::D3) {
      geo.theta_f = clamped_acos((rf * rf + U * U - rg * rg) / (2.0 * rf * U));
      geo.theta_g = clamped_acos((rg * rg + U * U - rf * rf) / (2.0 * rg * U));
      geo.theta_tilde =
          clamped_acos((rf * rf - rg * rg - U * U) / (2.0 * rg * U));
    } else if (geo.case_id == PairCase::D4) {
      // Crescent closes; the acos argument is >= 1 exactly at the boundary.
      geo.theta_tilde = 0.0;
    }
  }
  return geo;
}

// ==========================================================================
// Cap moments
// ==========================================================================

double sin_power_integral(int m, double theta) {
  if (m < 0) throw Error(ErrorCode::BadBounds, "sin power must be >= 0");
  const double s = std::sin(theta), cth = std::cos(theta);
  double prev = theta;        // m = 0
  if (m == 0) return prev;
  double cur = 1.0 - cth;     // m = 1
  for (int k = 2; k <= m; ++k) {
    const double next =
        ((k - 1) * prev - std::pow(s, k - 1) * cth) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

void check_cap_args(int d, double r, double& theta) {
  if (d < 2) throw Error(ErrorCode::BadBounds, "cap formulas require d >= 2");
  if (r < 0.0) throw Error(ErrorCode::BadBounds, "cap radius must be >= 0");
  if (theta < -1e-12 || theta > 0.5 * kPi + 1e-12) {
    std::ostringstream os;
    os << "cap angle " << theta << " outside [0, pi/2]";
    throw Error(ErrorCode::BadAngle, os.str());
  }
  theta = std::clamp(theta, 0.0, 0.5 * kPi);
}

}  // namespace

double cap_volume(int d, double r, double theta) {
  check_cap_args(d, r, theta);
  const double area = unit_sphere_area(d - 1);  // |S^{d-2}|
  const double s = std::sin(theta), cth = std::cos(theta);
  const double body = sin_power_integral(d - 2, theta) -
                      std::pow(s, d - 1) * cth / (d - 1);
  return area / d * std::pow(r, d) * body;
}

double cap_first_moment(int d, double r, double theta) {
  check_cap_args(d, r, theta);
  const double area = unit_sphere_area(d - 1);
  return area / (static_cast<double>(d - 1) * (d + 1)) * std::pow(r, d + 1) *
         std::pow(std::sin(theta), d + 1);
}

double cap_second_moment(int d, double r, double theta) {
  check_cap_args(d, r, theta);
  const double area = unit_sphere_area(d - 1);
  const double s = std::sin(theta), cth = std::cos(theta);
  const double body = -std::pow(s, d + 1) * cth / (d + 1) -
                      std::pow(s, d - 1) * cth * cth * cth / (d - 1) +
                      sin_power_integral(d - 2, theta);
  return area / (d + 2) * std::pow(r, d + 2) * body;
}

// ==========================================================================
// Rotation onto the last axis
// ==========================================================================

RotationToAxis rotation_to_axis(const std::vector<double>& w) {
  const int d = static_cast<int>(w.size());
  if (d < 1) throw Error(ErrorCode::BadBounds, "rotation needs d >= 1");
  double n2 = 0.0;
  for (double wi : w) n2 += wi * wi;
  if (n2 == 0.0) throw Error(ErrorCode::ZeroVector, "cannot orient the zero vector");

  RotationToAxis rot;
  rot.d = d;
  rot.R.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) rot.R[static_cast<std::size_t>(i) * d + i] = 1.0;

  std::vector<double> x = w;
  auto row = [&](int i) { return rot.R.data() + static_cast<std::size_t>(i) * d; };
  for (int i = 0; i < d - 1; ++i) {
    const double a = x[static_cast<std::size_t>(i)];
    const double b = x[static_cast<std::size_t>(d - 1)];
    const double h = std::hypot(a, b);
    if (h == 0.0) continue;
    const double cs = b / h, sn = a / h;
    // Proper plane rotation in (i, d-1): zeroes x_i, keeps det = +1.
    double* ri = row(i);
    double* rd = row(d - 1);
    for (int k = 0; k < d; ++k) {
      const double t = cs * ri[k] - sn * rd[k];
      rd[k] = sn * ri[k] + cs * rd[k];
      ri[k] = t;
    }
    x[static_cast<std::size_t>(i)] = 0.0;
    x[static_cast<std::size_t>(d - 1)] = h;
  }
  return rot;
}

// ==========================================================================
// Weighted L1 equilibrium distance
// ==========================================================================

double l12_equilibrium_distance(const GammaRegime& regime, const MacroState& f,
                                const MacroState& g, const VQuad& quad) {
  if (regime.d > 2)
    throw Error(ErrorCode::BadBounds, "distance quadrature supports d <= 2");
  if (quad.nv < 4 || quad.vmax <= 0.0)
    throw Error(ErrorCode::GridTooSmall, "need nv >= 4 and vmax > 0");

  const EqParams pf = eq_params(regime, f);
  const EqParams pg = eq_params(regime, g);
  check_quad_fits(regime, pf, quad);
  check_quad_fits(regime, pg, quad);

  const double i1 = l12_level(regime, pf, pg, quad, quad.nv);
  const double i2 = l12_level(regime, pf, pg, quad, 2 * quad.nv);
  const double i3 = l12_level(regime, pf, pg, quad, 4 * quad.nv);
  // Two-stage Richardson table.  The leading error is first order in the
  // cell size across the indicator jumps and second order for the
  // continuous positive-part profile.
  if (regime.branch == Branch::Indicator) {
    const double ta = 2.0 * i2 - i1;
    const double tb = 2.0 * i3 - i2;
    return (4.0 * tb - ta) / 3.0;
  }
  const double ta = (4.0 * i2 - i1) / 3.0;
  const double tb = (4.0 * i3 - i2) / 3.0;
  return (16.0 * tb - ta) / 15.0;
}

// ==========================================================================
// Lipschitz-ratio survey
// ==========================================================================

SurveyResult lipschitz_ratio_survey(const GammaRegime& regime,
                                    const SurveyParams& params,
                                    std::vector<SurveySample>* trace) {
  if (regime.d > 2)
    throw Error(ErrorCode::BadBounds, "survey supports d in {1, 2}");
  if (params.rho_lo < 0.0 || params.rho_hi <= params.rho_lo ||
      params.u_max < 0.0)
    throw Error(ErrorCode::BadBounds, "survey sampling box is empty or negative");
  if (params.samples <= 0)
    throw Error(ErrorCode::EmptySurvey, "survey needs at least one sample");

  // One upfront fit check instead of a throw halfway through the sweep.
  const double r_hi = support_radius(regime, params.rho_hi);
  if (r_hi + params.u_max > params.quad.vmax + 1e-12) {
    std::ostringstream os;
    os << "sampling box needs vmax >= " << r_hi + params.u_max << ", have "
       << params.quad.vmax;
    throw Error(ErrorCode::GridTooSmall, os.str());
  }

  SurveyResult res;
  res.running_sup.resize(static_cast<std::size_t>(params.samples), 0.0);

  auto draw_state = [&](Rng& rng) {
    MacroState s;
    s.rho = rng.uniform(params.rho_lo, params.rho_hi);
    if (regime.d == 1) {
      s.u = vec1(rng.uniform(-params.u_max, params.u_max));
    } else {
      const double rad = params.u_max * std::sqrt(rng.next_double());
      const double phi = 2.0 * kPi * rng.next_double();
      s.u = vec2(rad * std::cos(phi), rad * std::sin(phi));
    }
    return s;
  };

  for (int idx = 0; idx < params.samples; ++idx) {
    Rng rng = Rng::for_sample(params.seed, static_cast<std::uint64_t>(idx));
    const MacroState f = draw_state(rng);
    const MacroState g = draw_state(rng);

    const BallPairGeometry geo = classify_case(regime, f, g);
    res.case_counts[static_cast<int>(geo.case_id) - 1]++;

    SurveySample sample;
    sample.index = idx;
    sample.rho_f = f.rho;
    sample.rho_g = g.rho;
    sample.du = norm(f.u - g.u);
    sample.case_id = geo.case_id;

    const double denom = std::fabs(f.rho - g.rho) + norm(f.u - g.u);
    if (denom < 1e-10) {
      res.skipped++;
      res.running_sup[static_cast<std::size_t>(idx)] = res.sup_ratio;
      sample.skipped = true;
      if (trace) trace->push_back(sample);
      continue;
    }

    const double num = l12_equilibrium_distance(regime, f, g, params.quad);
    const double ratio = num / denom;
    if (ratio > res.sup_ratio) {
      res.sup_ratio = ratio;
      res.argmax_f = f;
      res.argmax_g = g;
      res.argmax_case = geo.case_id;
    }
    res.evaluated++;
    res.running_sup[static_cast<std::size_t>(idx)] = res.sup_ratio;
    sample.distance = num;
    sample.ratio = ratio;
    if (trace) trace->push_back(sample);
  }

  if (res.evaluated == 0)
    throw Error(ErrorCode::EmptySurvey, "all samples fell below the denominator cutoff");
  return res;
}

// ==========================================================================
// Pointwise mean-value bound (positive-part branch)
// ==========================================================================

MeanValueBound mean_value_bound(const GammaRegime& regime, const MacroState& f,
                                const MacroState& g, const Vec& v) {
  if (regime.branch != Branch::PositivePart)
    throw Error(ErrorCode::WrongBranch,
                "mean_value_bound applies to the positive-part branch");
  const double rf = support_radius(regime, f.rho);
  const double rg = support_radius(regime, g.rho);
  const double Af = rf * rf - norm2(v - f.u);
  const double Ag = rg * rg - norm2(v - g.u);
  if (Af <= 0.0 || Ag <= 0.0) {
    std::ostringstream os;
    os << "v lies outside the support intersection (A_f = " << Af
       << ", A_g = " << Ag << ")";
    throw Error(ErrorCode::OutsideIntersection, os.str());
  }

  const double half_n = 0.5 * regime.n;
  const double expo = half_n - 1.0;
  const auto integrand = [&](double th) {
    return std::pow(th * Af + (1.0 - th) * Ag, expo);
  };
  const double scale = std::max({1.0, std::pow(Af, expo), std::pow(Ag, expo)});
  MeanValueBound out;
  out.J = integrate_01(integrand, 1e-10 * scale);

  const double du = norm(f.u - g.u);
  const double dr = std::fabs(rf - rg);
  Vec w = 2.0 * v - f.u - g.u;
  w.d = v.d;
  const double vnorm = norm(v);
  out.C = regime.c * half_n *
          std::max(rf + rg, norm(w) / (1.0 + vnorm));
  out.bound = out.C * (dr + du * (1.0 + vnorm)) * out.J;
  out.true_diff =
      std::fabs(regime.c * std::pow(Af, half_n) - regime.c * std::pow(Ag, half_n));
  return out;
}

}  // namespace bgk
