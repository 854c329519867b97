// SPDX-License-Identifier: MIT

#include "bgk/verify.hpp"

#include <cmath>
#include <limits>

#include "bgk/equilibrium.hpp"
#include "bgk/errors.hpp"
#include "bgk/io.hpp"
#include "bgk/rng.hpp"

namespace bgk {

namespace {

struct QuadMoments {
  double m0 = 0.0;
  Vec m1;
  double m2 = 0.0;
};

QuadMoments quad_moments(const GammaRegime& regime, const MacroState& s,
                         double vmax, int nv) {
  const double dv = 2.0 * vmax / nv;
  QuadMoments q;
  q.m1.d = regime.d;
  if (regime.d == 1) {
    for (int j = 0; j < nv; ++j) {
      const double v = -vmax + (j + 0.5) * dv;
      const double dvu = v - s.u[0];
      const double w = eval_equilibrium_r2(regime, s.rho, dvu * dvu);
      q.m0 += w;
      q.m1.c[0] += v * w;
      q.m2 += v * v * w;
    }
    q.m0 *= dv;
    q.m1.c[0] *= dv;
    q.m2 *= dv;
    return q;
  }
  for (int jy = 0; jy < nv; ++jy) {
    const double vy = -vmax + (jy + 0.5) * dv;
    const double dy = vy - s.u[1];
    for (int jx = 0; jx < nv; ++jx) {
      const double vx = -vmax + (jx + 0.5) * dv;
      const double dxu = vx - s.u[0];
      const double w = eval_equilibrium_r2(regime, s.rho, dxu * dxu + dy * dy);
      q.m0 += w;
      q.m1.c[0] += vx * w;
      q.m1.c[1] += vy * w;
      q.m2 += (vx * vx + vy * vy) * w;
    }
  }
  const double vol = dv * dv;
  q.m0 *= vol;
  q.m1.c[0] *= vol;
  q.m1.c[1] *= vol;
  q.m2 *= vol;
  return q;
}

}  // namespace

MomentStudyResult moment_order_study(const GammaRegime& regime, int states,
                                     std::uint64_t seed,
                                     const std::vector<int>& nv_levels) {
  if (states < 1) throw Error(ErrorCode::BadBounds, "need at least one state");
  if (nv_levels.size() < 2)
    throw Error(ErrorCode::BadBounds, "need at least two refinement levels");
  for (std::size_t i = 1; i < nv_levels.size(); ++i)
    if (nv_levels[i] != 2 * nv_levels[i - 1])
      throw Error(ErrorCode::BadBounds, "nv_levels must double");

  const double rho_hi = 2.5;
  const double u_hi = 1.2;
  const double vmax =
      support_radius(regime, rho_hi) + u_hi * std::sqrt(regime.d) + 0.5;

  MomentStudyResult out;
  for (int nv : nv_levels) {
    MomentStudyLevel lvl;
    lvl.nv = nv;
    for (int sidx = 0; sidx < states; ++sidx) {
      Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(sidx));
      MacroState s;
      s.rho = rng.uniform(0.0, rho_hi);
      s.u.d = regime.d;
      for (int k = 0; k < regime.d; ++k) s.u.c[static_cast<std::size_t>(k)] =
          rng.uniform(-u_hi, u_hi);
      const MomentTriple exact = closed_form_moments(regime, s);
      const QuadMoments q = quad_moments(regime, s, vmax, nv);
      lvl.err_m0 += std::fabs(q.m0 - exact.m0);
      double e1 = 0.0;
      for (int k = 0; k < regime.d; ++k)
        e1 += std::fabs(q.m1[k] - exact.m1[k]);
      lvl.err_m1 += e1;
      lvl.err_m2 += std::fabs(q.m2 - exact.m2);
    }
    lvl.err_m0 /= states;
    lvl.err_m1 /= states;
    lvl.err_m2 /= states;
    out.levels.push_back(lvl);
  }

  const auto pairs = static_cast<double>(out.levels.size() - 1);
  auto order_of = [&](double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0))
      return std::numeric_limits<double>::infinity();  // exact at this level
    return std::log2(coarse / fine) / pairs;
  };
  out.order_m0 = order_of(out.levels.front().err_m0, out.levels.back().err_m0);
  out.order_m1 = order_of(out.levels.front().err_m1, out.levels.back().err_m1);
  out.order_m2 = order_of(out.levels.front().err_m2, out.levels.back().err_m2);

  io::Csv csv("nv,err_m0,err_m1,err_m2");
  for (const MomentStudyLevel& l : out.levels)
    csv.row({static_cast<double>(l.nv), l.err_m0, l.err_m1, l.err_m2});
  out.csv_text = csv.text();
  return out;
}

SurveyStability survey_stability(const GammaRegime& regime,
                                 const SurveyParams& params,
                                 std::vector<SurveySample>* trace) {
  SurveyParams doubled = params;
  doubled.samples = 2 * params.samples;
  SurveyStability out;
  out.full = lipschitz_ratio_survey(regime, doubled, trace);
  out.sup_at_half =
      out.full.running_sup[static_cast<std::size_t>(params.samples) - 1];
  out.sup_at_full = out.full.sup_ratio;
  out.rel_change = out.sup_at_half > 0.0
                       ? (out.sup_at_full - out.sup_at_half) / out.sup_at_half
                       : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace bgk
