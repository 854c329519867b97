// SPDX-License-Identifier: MIT

#include "bgk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bgk/equilibrium.hpp"
#include "bgk/errors.hpp"
#include "bgk/kernels.hpp"

namespace bgk {

namespace {

/// Integral over the velocity slice of one position cell of the kinetic
/// entropy density H(f).
double cell_entropy(const double* row, const PhaseGrid& g,
                    const GammaRegime& regime) {
  const auto nv = static_cast<std::size_t>(g.Nv);
  double e2;
  if (g.d == 1) {
    e2 = kern::dot(row, g.vc2.data(), nv);
  } else {
    e2 = 0.0;
    for (int jy = 0; jy < g.Nv; ++jy) {
      const double* sub = row + static_cast<std::size_t>(jy) * nv;
      e2 += kern::dot(sub, g.vc2.data(), nv) +
            g.vc2[static_cast<std::size_t>(jy)] * kern::sum(sub, nv);
    }
  }
  double h = 0.5 * e2;
  if (regime.branch == Branch::PositivePart) {
    double hp = 0.0;
    for (int j = 0; j < g.nvc; ++j)
      if (row[j] > 0.0) hp += std::pow(row[j], regime.h_exp);
    h += regime.h_coef * hp;
  }
  return h * g.dvol();
}

/// Trapezoid accumulation of the dissipation term D_i = H_i - H_eq,i along
/// the report, returning the worst mild-form margin.
double mild_margin(const RunReport& report, const double* field_vals,
                   const double* eq_vals) {
  const std::size_t n = report.steps.size();
  const double inv_eps = 1.0 / report.relax_eps;
  double margin = -std::numeric_limits<double>::infinity();
  double integral = 0.0;
  double prev_d = field_vals[0] - eq_vals[0];
  for (std::size_t j = 1; j < n; ++j) {
    const double dcur = field_vals[j] - eq_vals[j];
    integral += 0.5 * (prev_d + dcur) * report.dt;
    prev_d = dcur;
    margin = std::max(margin, field_vals[j] + inv_eps * integral - field_vals[0]);
  }
  return margin;
}

}  // namespace

double margin_tol(double dv, double dt, double c1, double c2) {
  return c1 * dv + c2 * dt;
}

double check_minimization(const DistributionField& field,
                          const GammaRegime& regime) {
  const PhaseGrid& g = field.grid;
  const MacroFieldSet macro = discrete_moments(field);
  const DistributionField M = discrete_equilibrium(regime, macro, g);
  double worst = -std::numeric_limits<double>::infinity();
  for (int x = 0; x < g.nxc; ++x) {
    const double hf = cell_entropy(field.row(x), g, regime);
    const double hm = cell_entropy(M.row(x), g, regime);
    worst = std::max(worst, hm - hf);
  }
  return worst;
}

EntropyMargins check_entropy_inequality(const RunReport& report) {
  if (report.steps.size() < 2)
    throw Error(ErrorCode::BadBounds,
                "entropy inequality needs at least two recorded steps");
  const std::size_t n = report.steps.size();
  std::vector<double> h(n), eq_plain(n), eq_reg(n);
  for (std::size_t j = 0; j < n; ++j) {
    h[j] = report.steps[j].h_total;
    eq_plain[j] = report.steps[j].h_eq_plain;
    eq_reg[j] = report.steps[j].h_eq_reg;
  }
  EntropyMargins out;
  out.plain = mild_margin(report, h.data(), eq_plain.data());
  out.reg = mild_margin(report, h.data(), eq_reg.data());
  return out;
}

EnergyMargins check_energy_decay(const RunReport& report) {
  if (report.steps.size() < 2)
    throw Error(ErrorCode::BadBounds,
                "energy decay needs at least two recorded steps");
  const std::size_t n = report.steps.size();
  std::vector<double> e(n), eq_plain(n), eq_reg(n);
  EnergyMargins out;
  out.monotone = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = report.steps[j].energy2;
    eq_plain[j] = report.steps[j].e2_eq_plain;
    eq_reg[j] = report.steps[j].e2_eq_reg;
    if (j > 0) out.monotone = std::max(out.monotone, e[j] - e[j - 1]);
  }
  out.plain = mild_margin(report, e.data(), eq_plain.data());
  out.reg = mild_margin(report, e.data(), eq_reg.data());
  return out;
}

InterpolationRatios check_interpolation(const DistributionField& field) {
  const PhaseGrid& g = field.grid;
  const double linf = kern::max_value(field.f.data(), field.f.size());
  const MacroFieldSet macro = discrete_moments(field);
  const double xv = g.xvol();
  double energy2 = kern::sum(macro.energy2.data(), macro.energy2.size()) * xv;
  if (linf <= 0.0 || energy2 <= 0.0)
    throw Error(ErrorCode::ZeroField,
                "interpolation ratios are undefined for a null field");

  const double d = static_cast<double>(g.d);
  const double p_rho = (d + 2.0) / d;
  const double p_mom = (d + 2.0) / (d + 1.0);
  double srho = 0.0, smom = 0.0;
  for (int c = 0; c < g.nxc; ++c) {
    const double rho = macro.rho[static_cast<std::size_t>(c)];
    double m2 = macro.mom_x[static_cast<std::size_t>(c)] *
                macro.mom_x[static_cast<std::size_t>(c)];
    if (g.d == 2)
      m2 += macro.mom_y[static_cast<std::size_t>(c)] *
            macro.mom_y[static_cast<std::size_t>(c)];
    if (rho > 0.0) srho += std::pow(rho, p_rho);
    if (m2 > 0.0) smom += std::pow(std::sqrt(m2), p_mom);
  }
  const double norm_rho = std::pow(srho * xv, 1.0 / p_rho);
  const double norm_mom = std::pow(smom * xv, 1.0 / p_mom);

  InterpolationRatios out;
  out.ratio_rho = norm_rho / (std::pow(linf, 2.0 / (d + 2.0)) *
                              std::pow(energy2, d / (d + 2.0)));
  out.ratio_mom = norm_mom / (std::pow(linf, 1.0 / (d + 2.0)) *
                              std::pow(energy2, (d + 1.0) / (d + 2.0)));
  return out;
}

double check_l1p2n_bound(const RunReport& report, const GammaRegime& regime) {
  if (regime.branch != Branch::PositivePart)
    throw Error(ErrorCode::WrongBranch,
                "the L^(1+2/n) bound applies to the positive-part branch only");
  if (report.steps.empty())
    throw Error(ErrorCode::BadBounds, "empty report");
  // Mass equals the L1 norm for nonnegative data.
  const double init = std::max(report.steps[0].mass, report.steps[0].l_1p2n) +
                      report.steps[0].energy2;
  double worst = -std::numeric_limits<double>::infinity();
  for (const StepRecord& r : report.steps)
    worst = std::max(worst, std::max(r.mass, r.l_1p2n) - init);
  return worst;
}

MomentGrowthCertificate check_spatial_moment(const RunReport& report,
                                             double tol) {
  MomentGrowthCertificate cert;
  cert.max_violation = -std::numeric_limits<double>::infinity();
  if (report.steps.size() < 2)
    throw Error(ErrorCode::BadBounds,
                "moment growth needs at least two recorded steps");
  for (std::size_t j = 0; j + 1 < report.steps.size(); ++j) {
    const StepRecord& a = report.steps[j];
    const StepRecord& b = report.steps[j + 1];
    const double envelope =
        report.dt * (3.0 * a.xmom2 + a.energy2 + 2.0 * report.reg_eps * a.mass);
    cert.max_violation =
        std::max(cert.max_violation, b.xmom2 - a.xmom2 - envelope);
  }
  cert.satisfied = cert.max_violation <= tol;
  return cert;
}

}  // namespace bgk
