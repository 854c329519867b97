// SPDX-License-Identifier: MIT

#include "bgk/euler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bgk/equilibrium.hpp"
#include "bgk/errors.hpp"
#include "bgk/io.hpp"
#include "bgk/vec.hpp"

namespace bgk {

namespace {

double cell_speed(const GammaRegime& regime, double rho, const double* m,
                  int d) {
  if (rho <= kRhoFloor) return 0.0;
  double u2 = 0.0;
  for (int k = 0; k < d; ++k) u2 += (m[k] / rho) * (m[k] / rho);
  return std::sqrt(u2) +
         std::sqrt(regime.gamma * regime.C_d * std::pow(rho, regime.gamma - 1.0));
}

struct SlopeScan {
  double slope = 0.0;
  double umax = 0.0;
};

SlopeScan velocity_scan(const EulerState& s) {
  SlopeScan out;
  const double dx = s.dx();
  const int n = s.Nx;
  auto u_of = [&](int c, int k) {
    const double rho = s.rho[static_cast<std::size_t>(c)];
    if (rho <= kRhoFloor) return 0.0;
    const double m =
        k == 0 ? s.mx[static_cast<std::size_t>(c)] : s.my[static_cast<std::size_t>(c)];
    return m / rho;
  };
  const int ncomp = s.d;
  if (s.d == 1) {
    for (int i = 0; i < n; ++i) {
      const double a = u_of(i, 0);
      const double b = u_of((i + 1) % n, 0);
      out.slope = std::max(out.slope, std::fabs(b - a) / dx);
      out.umax = std::max(out.umax, std::fabs(a));
    }
    return out;
  }
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const int c = iy * n + ix;
      const int cx = iy * n + (ix + 1) % n;
      const int cy = ((iy + 1) % n) * n + ix;
      for (int k = 0; k < ncomp; ++k) {
        const double a = u_of(c, k);
        out.slope = std::max(out.slope, std::fabs(u_of(cx, k) - a) / dx);
        out.slope = std::max(out.slope, std::fabs(u_of(cy, k) - a) / dx);
        out.umax = std::max(out.umax, std::fabs(a));
      }
    }
  return out;
}

EulerStepRecord record_of(const EulerState& s, const GammaRegime& regime) {
  EulerStepRecord r;
  r.t = s.t;
  const double vol = s.d == 1 ? s.dx() : s.dx() * s.dx();
  double mass = 0.0, mx = 0.0, my = 0.0, eta = 0.0;
  for (int c = 0; c < s.cells(); ++c) {
    const double rho = s.rho[static_cast<std::size_t>(c)];
    mass += rho;
    mx += s.mx[static_cast<std::size_t>(c)];
    Vec u = vec1(0.0);
    if (s.d == 2) {
      my += s.my[static_cast<std::size_t>(c)];
      u = rho > kRhoFloor ? vec2(s.mx[static_cast<std::size_t>(c)] / rho,
                                 s.my[static_cast<std::size_t>(c)] / rho)
                          : vec2(0.0, 0.0);
    } else {
      u = rho > kRhoFloor ? vec1(s.mx[static_cast<std::size_t>(c)] / rho)
                          : vec1(0.0);
    }
    if (rho > 0.0) eta += macro_entropy(regime, MacroState{rho, u});
  }
  r.mass = mass * vol;
  r.mom_x = mx * vol;
  r.mom_y = my * vol;
  r.eta_total = eta * vol;
  return r;
}

}  // namespace

EulerFlux euler_flux(const GammaRegime& regime, double rho, const double* m,
                     int d) {
  EulerFlux f{};
  if (rho < 0.0)
    throw Error(ErrorCode::NegativeDensity, "euler_flux: negative density");
  const double p = rho > 0.0 ? regime.C_d * std::pow(rho, regime.gamma) : 0.0;
  double u[2] = {0.0, 0.0};
  if (rho > kRhoFloor)
    for (int k = 0; k < d; ++k) u[k] = m[k] / rho;
  for (int k = 0; k < d; ++k) {
    f.mass[k] = m[k];
    for (int l = 0; l < d; ++l)
      f.mom[k * d + l] = m[k] * u[l] + (k == l ? p : 0.0);
  }
  return f;
}

double max_wavespeed(const GammaRegime& regime, const EulerState& s) {
  double a = 0.0;
  for (int c = 0; c < s.cells(); ++c) {
    double m[2] = {s.mx[static_cast<std::size_t>(c)],
                   s.d == 2 ? s.my[static_cast<std::size_t>(c)] : 0.0};
    a = std::max(a, cell_speed(regime, s.rho[static_cast<std::size_t>(c)], m,
                               s.d));
  }
  return a;
}

void fv_step(EulerState& s, const GammaRegime& regime, double dt) {
  const double dx = s.dx();
  const double amax = max_wavespeed(regime, s);
  if (amax > 0.0 && dt > 0.45 * dx / amax * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds 0.45 dx / amax = " << 0.45 * dx / amax;
    throw Error(ErrorCode::CFLViolation, os.str());
  }
  const int n = s.Nx;
  const int cells = s.cells();
  const int d = s.d;

  std::vector<double> drho(static_cast<std::size_t>(cells), 0.0);
  std::vector<double> dmx(static_cast<std::size_t>(cells), 0.0);
  std::vector<double> dmy(d == 2 ? static_cast<std::size_t>(cells) : 0, 0.0);

  auto accumulate_axis = [&](int axis) {
    // Interface between cell c and its +axis neighbour.
    for (int c = 0; c < cells; ++c) {
      int nb;
      if (d == 1) {
        nb = (c + 1) % n;
      } else if (axis == 0) {
        const int iy = c / n, ix = c % n;
        nb = iy * n + (ix + 1) % n;
      } else {
        const int iy = c / n, ix = c % n;
        nb = ((iy + 1) % n) * n + ix;
      }
      const double rL = s.rho[static_cast<std::size_t>(c)];
      const double rR = s.rho[static_cast<std::size_t>(nb)];
      double mL[2] = {s.mx[static_cast<std::size_t>(c)],
                      d == 2 ? s.my[static_cast<std::size_t>(c)] : 0.0};
      double mR[2] = {s.mx[static_cast<std::size_t>(nb)],
                      d == 2 ? s.my[static_cast<std::size_t>(nb)] : 0.0};
      const EulerFlux fL = euler_flux(regime, rL, mL, d);
      const EulerFlux fR = euler_flux(regime, rR, mR, d);
      const double a =
          std::max(cell_speed(regime, rL, mL, d), cell_speed(regime, rR, mR, d));
      const double fhat_rho =
          0.5 * (fL.mass[axis] + fR.mass[axis]) - 0.5 * a * (rR - rL);
      const double fhat_mx = 0.5 * (fL.mom[axis * d + 0] + fR.mom[axis * d + 0]) -
                             0.5 * a * (mR[0] - mL[0]);
      drho[static_cast<std::size_t>(c)] -= fhat_rho;
      drho[static_cast<std::size_t>(nb)] += fhat_rho;
      dmx[static_cast<std::size_t>(c)] -= fhat_mx;
      dmx[static_cast<std::size_t>(nb)] += fhat_mx;
      if (d == 2) {
        const double fhat_my =
            0.5 * (fL.mom[axis * d + 1] + fR.mom[axis * d + 1]) -
            0.5 * a * (mR[1] - mL[1]);
        dmy[static_cast<std::size_t>(c)] -= fhat_my;
        dmy[static_cast<std::size_t>(nb)] += fhat_my;
      }
    }
  };

  accumulate_axis(0);
  if (d == 2) accumulate_axis(1);

  const double lam = dt / dx;
  for (int c = 0; c < cells; ++c) {
    const double r = s.rho[static_cast<std::size_t>(c)] +
                     lam * drho[static_cast<std::size_t>(c)];
    if (r < 0.0) {
      std::ostringstream os;
      os << "negative density " << r << " in cell " << c << " at t = " << s.t;
      throw Error(ErrorCode::VacuumBreakdown, os.str());
    }
    s.rho[static_cast<std::size_t>(c)] = r;
    s.mx[static_cast<std::size_t>(c)] += lam * dmx[static_cast<std::size_t>(c)];
    if (d == 2)
      s.my[static_cast<std::size_t>(c)] += lam * dmy[static_cast<std::size_t>(c)];
  }
  s.t += dt;
}

EulerRunResult run_euler(const EulerState& s0, const GammaRegime& regime,
                         double T) {
  EulerRunResult out;
  out.state = s0;
  {
    const SlopeScan scan = velocity_scan(out.state);
    out.max_slope_initial = scan.slope;
    out.max_slope_peak = scan.slope;
    out.u_max_peak = scan.umax;
  }
  out.steps.push_back(record_of(out.state, regime));
  const double dx = out.state.dx();
  double t = 0.0;
  while (t < T - 1e-14 * std::max(1.0, T)) {
    const double amax = max_wavespeed(regime, out.state);
    if (amax <= 0.0) break;  // vacuum everywhere: nothing moves
    const double dt = std::min(0.45 * dx / amax, T - t);
    fv_step(out.state, regime, dt);
    t += dt;
    out.state.t = t;
    const SlopeScan scan = velocity_scan(out.state);
    out.max_slope_peak = std::max(out.max_slope_peak, scan.slope);
    out.u_max_peak = std::max(out.u_max_peak, scan.umax);
    out.steps.push_back(record_of(out.state, regime));
  }
  return out;
}

MacroDistance macro_distance(const MacroFieldSet& kinetic,
                             const PhaseGrid& grid, const EulerState& euler) {
  if (grid.d != euler.d || grid.Nx != euler.Nx ||
      std::fabs(grid.L - euler.L) > 1e-12 * std::max(1.0, grid.L))
    throw Error(ErrorCode::GridMismatch,
                "macro_distance: kinetic and Euler grids differ");
  const double vol = grid.xvol();
  MacroDistance dist;
  for (int c = 0; c < grid.nxc; ++c) {
    dist.l1_rho += std::fabs(kinetic.rho[static_cast<std::size_t>(c)] -
                             euler.rho[static_cast<std::size_t>(c)]);
    dist.l1_momentum += std::fabs(kinetic.mom_x[static_cast<std::size_t>(c)] -
                                  euler.mx[static_cast<std::size_t>(c)]);
    if (grid.d == 2)
      dist.l1_momentum += std::fabs(kinetic.mom_y[static_cast<std::size_t>(c)] -
                                    euler.my[static_cast<std::size_t>(c)]);
  }
  dist.l1_rho *= vol;
  dist.l1_momentum *= vol;
  return dist;
}

void write_euler_csv(const std::string& path, const EulerRunResult& run) {
  io::Csv csv("t,mass,mom_x,mom_y,eta_total");
  for (const EulerStepRecord& r : run.steps)
    csv.row({r.t, r.mass, r.mom_x, r.mom_y, r.eta_total});
  csv.save(path);
}

}  // namespace bgk
