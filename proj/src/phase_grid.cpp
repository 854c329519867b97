// SPDX-License-Identifier: MIT
//
// =========================================================================
// Phase-space grid, discrete moments, and the moment-matched equilibrium
// =========================================================================
//
// The discrete equilibrium is where conservation is decided: sampling the
// analytic profile at cell centers loses the moments to O(dv), so each cell
// applies an affine-in-v correction M(v) * (alpha + beta . (v - u_raw))
// whose coefficients solve a (d+1) x (d+1) system making the discrete
// (rho, m) match the target exactly.  alpha rescales mass, beta shifts
// momentum against the sampled central second-moment matrix P, which is
// symmetric positive definite whenever the support spans more than one
// cell.  Cells whose support falls below the grid resolution fall back to a
// two-point (bilinear in 2D) deposit that still carries exact (rho, m).

#include "bgk/phase_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bgk/errors.hpp"
#include "bgk/io.hpp"
#include "bgk/kernels.hpp"

namespace bgk {

PhaseGrid make_grid(int d, double L, int Nx, double Vmax, int Nv) {
  std::vector<std::string> problems;
  if (d != 1 && d != 2) problems.push_back("d must be 1 or 2");
  if (!(L > 0.0)) problems.push_back("L must be positive");
  if (!(Vmax > 0.0)) problems.push_back("Vmax must be positive");
  if (Nx < 4 || Nx % 2 != 0) problems.push_back("Nx must be even and >= 4");
  if (Nv < 4 || Nv % 2 != 0) problems.push_back("Nv must be even and >= 4");
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) {
      if (!msg.empty()) msg += "; ";
      msg += p;
    }
    throw Error(ErrorCode::BadBounds, msg);
  }

  PhaseGrid g;
  g.d = d;
  g.L = L;
  g.Nx = Nx;
  g.Vmax = Vmax;
  g.Nv = Nv;
  g.dx = L / Nx;
  g.dv = 2.0 * Vmax / Nv;
  g.nxc = d == 1 ? Nx : Nx * Nx;
  g.nvc = d == 1 ? Nv : Nv * Nv;
  g.xc.resize(static_cast<std::size_t>(Nx));
  for (int i = 0; i < Nx; ++i) g.xc[static_cast<std::size_t>(i)] = (i + 0.5) * g.dx;
  g.vc.resize(static_cast<std::size_t>(Nv));
  g.vc2.resize(static_cast<std::size_t>(Nv));
  for (int j = 0; j < Nv; ++j) {
    const double v = -Vmax + (j + 0.5) * g.dv;
    g.vc[static_cast<std::size_t>(j)] = v;
    g.vc2[static_cast<std::size_t>(j)] = v * v;
  }
  return g;
}

DistributionField make_field(const PhaseGrid& grid) {
  DistributionField f;
  f.grid = grid;
  f.f.assign(static_cast<std::size_t>(grid.nxc) * grid.nvc, 0.0);
  return f;
}

// ==========================================================================
// Moments
// ==========================================================================

MacroFieldSet discrete_moments(const DistributionField& field) {
  const PhaseGrid& g = field.grid;
  MacroFieldSet m;
  m.d = g.d;
  m.rho.assign(static_cast<std::size_t>(g.nxc), 0.0);
  m.mom_x.assign(static_cast<std::size_t>(g.nxc), 0.0);
  if (g.d == 2) m.mom_y.assign(static_cast<std::size_t>(g.nxc), 0.0);
  m.energy2.assign(static_cast<std::size_t>(g.nxc), 0.0);

  const double dvd = g.dvol();
  const double* vc = g.vc.data();
  const double* vc2 = g.vc2.data();
  const auto nv = static_cast<std::size_t>(g.Nv);

  for (int x = 0; x < g.nxc; ++x) {
    const double* row = field.row(x);
    double rho, mx, my = 0.0, e2;
    if (g.d == 1) {
      rho = kern::sum(row, nv) * dvd;
      mx = kern::dot(row, vc, nv) * dvd;
      e2 = kern::dot(row, vc2, nv) * dvd;
    } else {
      double s = 0.0, sx = 0.0, sy = 0.0, se = 0.0;
      for (int jy = 0; jy < g.Nv; ++jy) {
        const double* sub = row + static_cast<std::size_t>(jy) * nv;
        const double sj = kern::sum(sub, nv);
        const double mj = kern::dot(sub, vc, nv);
        const double ej = kern::dot(sub, vc2, nv);
        s += sj;
        sx += mj;
        sy += vc[jy] * sj;
        se += ej + vc2[jy] * sj;
      }
      rho = s * dvd;
      mx = sx * dvd;
      my = sy * dvd;
      e2 = se * dvd;
    }
    const auto xi = static_cast<std::size_t>(x);
    m.rho[xi] = rho;
    m.energy2[xi] = e2;
    if (rho > kRhoFloor) {
      m.mom_x[xi] = mx;
      if (g.d == 2) m.mom_y[xi] = my;
    }
    // vacuum cells keep zero momentum by construction
  }
  return m;
}

Vec cell_velocity(const MacroFieldSet& m, int i) {
  const auto xi = static_cast<std::size_t>(i);
  if (m.rho[xi] <= kRhoFloor) return m.d == 1 ? vec1(0.0) : vec2(0.0, 0.0);
  if (m.d == 1) return vec1(m.mom_x[xi] / m.rho[xi]);
  return vec2(m.mom_x[xi] / m.rho[xi], m.mom_y[xi] / m.rho[xi]);
}

// ==========================================================================
// Moment-matched discrete equilibrium
// ==========================================================================

namespace {

struct CellMoments {
  double q0 = 0.0;           // mass
  double q1x = 0.0, q1y = 0.0;  // momentum
  double sxx = 0.0, sxy = 0.0, syy = 0.0;  // raw second moments
};

CellMoments raw_moments(const PhaseGrid& g, const double* row) {
  CellMoments cm;
  const double* vc = g.vc.data();
  const double* vc2 = g.vc2.data();
  const auto nv = static_cast<std::size_t>(g.Nv);
  if (g.d == 1) {
    cm.q0 = kern::sum(row, nv);
    cm.q1x = kern::dot(row, vc, nv);
    cm.sxx = kern::dot(row, vc2, nv);
  } else {
    for (int jy = 0; jy < g.Nv; ++jy) {
      const double* sub = row + static_cast<std::size_t>(jy) * nv;
      const double sj = kern::sum(sub, nv);
      const double mj = kern::dot(sub, vc, nv);
      cm.q0 += sj;
      cm.q1x += mj;
      cm.q1y += vc[jy] * sj;
      cm.sxx += kern::dot(sub, vc2, nv);
      cm.sxy += vc[jy] * mj;
      cm.syy += vc2[jy] * sj;
    }
  }
  const double dvd = g.dvol();
  cm.q0 *= dvd;
  cm.q1x *= dvd;
  cm.q1y *= dvd;
  cm.sxx *= dvd;
  cm.sxy *= dvd;
  cm.syy *= dvd;
  return cm;
}

/// Conservative two-point deposit of (rho, m) at velocity u: exact mass and
/// momentum as long as u sits between the outermost cell centers.  Used when
/// the analytic support is too small for the grid to see.
void deposit_cell(const PhaseGrid& g, double rho, const Vec& u, double* row) {
  const double dvd = g.dvol();
  auto split = [&](double uu, int& j0, double& a) {
    double pos = (uu + g.Vmax) / g.dv - 0.5;
    j0 = static_cast<int>(std::floor(pos));
    a = pos - j0;
    if (j0 < 0) {
      j0 = 0;
      a = 0.0;
    }
    if (j0 > g.Nv - 2) {
      j0 = g.Nv - 2;
      a = 1.0;
    }
  };
  int jx;
  double ax;
  split(u[0], jx, ax);
  if (g.d == 1) {
    row[jx] += rho * (1.0 - ax) / dvd;
    row[jx + 1] += rho * ax / dvd;
    return;
  }
  int jy;
  double ay;
  split(u[1], jy, ay);
  const double w00 = (1.0 - ax) * (1.0 - ay), w10 = ax * (1.0 - ay);
  const double w01 = (1.0 - ax) * ay, w11 = ax * ay;
  auto at = [&](int jjx, int jjy) -> double& {
    return row[static_cast<std::size_t>(jjy) * g.Nv + jjx];
  };
  at(jx, jy) += rho * w00 / dvd;
  at(jx + 1, jy) += rho * w10 / dvd;
  at(jx, jy + 1) += rho * w01 / dvd;
  at(jx + 1, jy + 1) += rho * w11 / dvd;
}

}  // namespace

DistributionField discrete_equilibrium_with_target(
    const GammaRegime& regime, const MacroFieldSet& shape,
    const MacroFieldSet& target, const PhaseGrid& grid,
    EquilibriumBuildStats* stats) {
  if (static_cast<int>(shape.rho.size()) != grid.nxc ||
      static_cast<int>(target.rho.size()) != grid.nxc)
    throw Error(ErrorCode::GridMismatch, "macro field size != position cells");

  DistributionField out = make_field(grid);
  const double* vc = grid.vc.data();
  const auto nv = static_cast<std::size_t>(grid.Nv);
  double corr_sum = 0.0, corr_max = 0.0;
  int corr_cells = 0;

  for (int x = 0; x < grid.nxc; ++x) {
    const auto xi = static_cast<std::size_t>(x);
    const double rho_t = target.rho[xi];
    const double mtx = target.mom_x[xi];
    const double mty = grid.d == 2 ? target.mom_y[xi] : 0.0;
    double* row = out.row(x);

    if (rho_t <= 0.0) {
      if (std::fabs(mtx) + std::fabs(mty) > 1e-13) {
        std::ostringstream os;
        os << "cell " << x << ": vacuum density with nonzero momentum";
        throw Error(ErrorCode::CorrectionFailure, os.str());
      }
      continue;  // zero slice
    }

    const double rho_s = shape.rho[xi];
    const Vec u_t = grid.d == 1 ? vec1(mtx / rho_t) : vec2(mtx / rho_t, mty / rho_t);

    if (rho_s <= kRhoFloor) {
      deposit_cell(grid, rho_t, u_t, row);
      continue;
    }

    const Vec u_s = cell_velocity(shape, x);
    const double r_s = support_radius(regime, rho_s);
    for (int k = 0; k < grid.d; ++k) {
      if (std::fabs(u_s[k]) + r_s > grid.Vmax + 1e-12) {
        std::ostringstream os;
        os << "cell " << x << ": support |u| + r = " << std::fabs(u_s[k]) + r_s
           << " exceeds Vmax = " << grid.Vmax << " on axis " << k;
        throw Error(ErrorCode::SupportOverflow, os.str());
      }
    }

    // Sample the analytic shape at cell centers.
    const double r2 = r_s * r_s;
    if (regime.branch == Branch::Indicator) {
      if (grid.d == 1) {
        kern::eq_indicator_row(vc, nv, u_s[0], 0.0, r2, 1.0, row);
      } else {
        for (int jy = 0; jy < grid.Nv; ++jy) {
          const double dy = vc[jy] - u_s[1];
          kern::eq_indicator_row(vc, nv, u_s[0], dy * dy, r2, 1.0,
                                 row + static_cast<std::size_t>(jy) * nv);
        }
      }
    } else {
      const double half_n = 0.5 * regime.n;
      if (grid.d == 1) {
        kern::eq_positive_row(vc, nv, u_s[0], 0.0, r2, regime.c, half_n, row);
      } else {
        for (int jy = 0; jy < grid.Nv; ++jy) {
          const double dy = vc[jy] - u_s[1];
          kern::eq_positive_row(vc, nv, u_s[0], dy * dy, r2, regime.c, half_n,
                                row + static_cast<std::size_t>(jy) * nv);
        }
      }
    }

    const CellMoments cm = raw_moments(grid, row);
    if (cm.q0 <= kRhoFloor || r_s < grid.dv) {
      // Support invisible at this resolution: fall back to the deposit.
      std::fill(row, row + grid.nvc, 0.0);
      deposit_cell(grid, rho_t, u_t, row);
      continue;
    }

    const double alpha = rho_t / cm.q0;
    const double urx = cm.q1x / cm.q0;
    const double ury = grid.d == 2 ? cm.q1y / cm.q0 : 0.0;
    double bx = 0.0, by = 0.0;
    const double rhs_x = mtx - alpha * cm.q1x;
    const double rhs_y = mty - alpha * cm.q1y;
    const double pxx = cm.sxx - cm.q1x * cm.q1x / cm.q0;
    if (grid.d == 1) {
      if (pxx > 1e-300) {
        bx = rhs_x / pxx;
      } else if (std::fabs(rhs_x) > 1e-13 * std::max(1.0, std::fabs(mtx))) {
        std::fill(row, row + grid.nvc, 0.0);
        deposit_cell(grid, rho_t, u_t, row);
        continue;
      }
    } else {
      const double pxy = cm.sxy - cm.q1x * cm.q1y / cm.q0;
      const double pyy = cm.syy - cm.q1y * cm.q1y / cm.q0;
      const double det = pxx * pyy - pxy * pxy;
      if (det > 1e-300) {
        bx = (pyy * rhs_x - pxy * rhs_y) / det;
        by = (pxx * rhs_y - pxy * rhs_x) / det;
      } else if (std::fabs(rhs_x) + std::fabs(rhs_y) >
                 1e-13 * std::max(1.0, std::fabs(mtx) + std::fabs(mty))) {
        std::fill(row, row + grid.nvc, 0.0);
        deposit_cell(grid, rho_t, u_t, row);
        continue;
      }
    }

    // Conservative bound on the affine multiplier's deviation from 1 over
    // the sampled support.
    const double ext_x = r_s + std::fabs(u_s[0] - urx) + grid.dv;
    const double ext_y = grid.d == 2 ? r_s + std::fabs(u_s[1] - ury) + grid.dv : 0.0;
    const double corr =
        std::max(std::fabs(alpha - 1.0), std::fabs(bx) * ext_x + std::fabs(by) * ext_y);
    if (corr > 0.5) {
      std::ostringstream os;
      os << "cell " << x << ": moment correction " << corr
         << " exceeds 50% (alpha = " << alpha << ", |beta| = "
         << std::fabs(bx) + std::fabs(by) << "); nonnegativity not guaranteed";
      throw Error(ErrorCode::CorrectionFailure, os.str());
    }
    corr_sum += corr;
    corr_max = std::max(corr_max, corr);
    ++corr_cells;

    if (grid.d == 1) {
      const double c0 = alpha - bx * urx;
      for (int j = 0; j < grid.Nv; ++j) {
        const double val = row[j] * (c0 + bx * vc[j]);
        row[j] = val > 0.0 ? val : 0.0;
      }
    } else {
      for (int jy = 0; jy < grid.Nv; ++jy) {
        double* sub = row + static_cast<std::size_t>(jy) * nv;
        const double c0 = alpha + by * (vc[jy] - ury);
        for (int j = 0; j < grid.Nv; ++j) {
          const double val = sub[j] * (c0 + bx * (vc[j] - urx));
          sub[j] = val > 0.0 ? val : 0.0;
        }
      }
    }
  }

  if (stats) {
    stats->max_correction = corr_max;
    stats->mean_correction = corr_cells > 0 ? corr_sum / corr_cells : 0.0;
  }
  return out;
}

DistributionField discrete_equilibrium(const GammaRegime& regime,
                                       const MacroFieldSet& macro,
                                       const PhaseGrid& grid,
                                       EquilibriumBuildStats* stats) {
  return discrete_equilibrium_with_target(regime, macro, macro, grid, stats);
}

// ==========================================================================
// Norms
// ==========================================================================

FieldNorms field_norms(const DistributionField& field, const GammaRegime& regime) {
  const PhaseGrid& g = field.grid;
  const double vol = g.xvol() * g.dvol();
  const std::size_t n = field.f.size();
  const auto nv = static_cast<std::size_t>(g.Nv);

  std::vector<double> abs_f(n);
  for (std::size_t i = 0; i < n; ++i) abs_f[i] = std::fabs(field.f[i]);

  FieldNorms out;
  out.l1 = kern::sum(abs_f.data(), n) * vol;
  out.l_infty = kern::max_value(abs_f.data(), n);

  double w = 0.0;
  for (int x = 0; x < g.nxc; ++x) {
    const double* row = abs_f.data() + static_cast<std::size_t>(x) * g.nvc;
    if (g.d == 1) {
      w += kern::sum(row, nv) + kern::dot(row, g.vc2.data(), nv);
    } else {
      for (int jy = 0; jy < g.Nv; ++jy) {
        const double* sub = row + static_cast<std::size_t>(jy) * nv;
        w += kern::dot(sub, g.vc2.data(), nv) +
             (1.0 + g.vc2[static_cast<std::size_t>(jy)]) * kern::sum(sub, nv);
      }
    }
  }
  out.l1_2 = w * vol;

  if (regime.branch == Branch::PositivePart) {
    const double p = 1.0 + 2.0 / regime.n;
    for (std::size_t i = 0; i < n; ++i) abs_f[i] = std::pow(abs_f[i], p);
    out.l_1p2n = std::pow(kern::sum(abs_f.data(), n) * vol, 1.0 / p);
  }
  return out;
}

// ==========================================================================
// Snapshots and CSV
// ==========================================================================

void write_snapshot(const std::string& path, const DistributionField& field,
                    double gamma) {
  static_assert(sizeof(double) == 8);
  const PhaseGrid& g = field.grid;
  std::ostringstream head;
  head << "kinetic-snapshot 1\n";
  head << "d " << g.d << "\n";
  head << "L " << io::fmt(g.L) << "\n";
  head << "Nx " << g.Nx << "\n";
  head << "Vmax " << io::fmt(g.Vmax) << "\n";
  head << "Nv " << g.Nv << "\n";
  head << "time " << io::fmt(field.time) << "\n";
  head << "gamma " << io::fmt(gamma) << "\n";
  head << "end_header\n";

  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  const std::string h = head.str();
  os.write(h.data(), static_cast<std::streamsize>(h.size()));
  // Values are stored little-endian; this code targets little-endian hosts.
  os.write(reinterpret_cast<const char*>(field.f.data()),
           static_cast<std::streamsize>(field.f.size() * sizeof(double)));
  if (!os) throw Error(ErrorCode::ParseError, "short write to " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || line != "kinetic-snapshot 1")
    throw Error(ErrorCode::ParseError, path + ": bad magic line");

  int d = 0, Nx = 0, Nv = 0;
  double L = 0.0, Vmax = 0.0, time = 0.0, gamma = 0.0;
  bool done = false;
  while (std::getline(is, line)) {
    if (line == "end_header") {
      done = true;
      break;
    }
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "d") ls >> d;
    else if (key == "L") ls >> L;
    else if (key == "Nx") ls >> Nx;
    else if (key == "Vmax") ls >> Vmax;
    else if (key == "Nv") ls >> Nv;
    else if (key == "time") ls >> time;
    else if (key == "gamma") ls >> gamma;
    else throw Error(ErrorCode::ParseError, path + ": unknown header key " + key);
    if (!ls) throw Error(ErrorCode::ParseError, path + ": bad header line: " + line);
  }
  if (!done) throw Error(ErrorCode::ParseError, path + ": missing end_header");

  Snapshot snap;
  snap.gamma = gamma;
  snap.field = make_field(make_grid(d, L, Nx, Vmax, Nv));
  snap.field.time = time;
  is.read(reinterpret_cast<char*>(snap.field.f.data()),
          static_cast<std::streamsize>(snap.field.f.size() * sizeof(double)));
  if (is.gcount() !=
      static_cast<std::streamsize>(snap.field.f.size() * sizeof(double)))
    throw Error(ErrorCode::ParseError, path + ": truncated payload");
  return snap;
}

void write_macro_csv(const std::string& path, const PhaseGrid& grid,
                     const MacroFieldSet& macro) {
  std::vector<std::string> header;
  if (grid.d == 1)
    header = {"x", "rho", "mom_x", "u_x", "energy2"};
  else
    header = {"x", "y", "rho", "mom_x", "mom_y", "u_x", "u_y", "energy2"};
  io::Csv csv(header);
  for (int i = 0; i < grid.nxc; ++i) {
    const auto xi = static_cast<std::size_t>(i);
    const Vec u = cell_velocity(macro, i);
    if (grid.d == 1) {
      csv.row({grid.xc[xi], macro.rho[xi], macro.mom_x[xi], u[0], macro.energy2[xi]});
    } else {
      const int ix = i % grid.Nx, iy = i / grid.Nx;
      csv.row({grid.xc[static_cast<std::size_t>(ix)], grid.xc[static_cast<std::size_t>(iy)],
               macro.rho[xi], macro.mom_x[xi], macro.mom_y[xi], u[0], u[1],
               macro.energy2[xi]});
    }
  }
  csv.save(path);
}

}  // namespace bgk
