// SPDX-License-Identifier: MIT

#include "bgk/regularization.hpp"

#include <cmath>
#include <sstream>

#include "bgk/errors.hpp"

namespace bgk {

namespace {

/// Normalized bump profile exp(1/(s^2 - 1)) for |s| < 1, 0 outside.
double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 / (s2 - 1.0));
}

/// Periodic 1D convolution along a strided axis.
void convolve_axis_periodic(const double* in, double* out, int n, int stride,
                            const double* w, int radius, double h_d) {
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = -radius; k <= radius; ++k) {
      int j = i + k;
      if (j < 0) j += n;
      if (j >= n) j -= n;
      acc += w[k + radius] * in[static_cast<std::size_t>(j) * stride];
    }
    out[static_cast<std::size_t>(i) * stride] = acc * h_d;
  }
}

/// Zero-padded 1D convolution along a strided axis (velocity space).
void convolve_axis_padded(const double* in, double* out, int n, int stride,
                          const double* w, int radius, double h_d) {
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const int klo = std::max(-radius, -i);
    const int khi = std::min(radius, n - 1 - i);
    for (int k = klo; k <= khi; ++k)
      acc += w[k + radius] * in[static_cast<std::size_t>(i + k) * stride];
    out[static_cast<std::size_t>(i) * stride] = acc * h_d;
  }
}

/// 1D weights of the product kernel: bump(k h / eps) normalized so that
/// sum * h = 1.
std::vector<double> axis_weights(double h, double eps, int radius) {
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double s = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    w[static_cast<std::size_t>(k + radius)] = bump(k * h / eps);
    s += w[static_cast<std::size_t>(k + radius)];
  }
  for (auto& x : w) x /= s * h;
  return w;
}

int stencil_radius(double h, double eps) {
  // largest R with R h < eps
  int r = static_cast<int>(std::ceil(eps / h)) - 1;
  while (r * h >= eps) --r;
  return r;
}

/// Periodic distance between two coordinates on a circle of length L.
double dist_per(double a, double b, double L) {
  double t = std::fabs(a - b);
  while (t > 0.5 * L) t = std::fabs(t - L);
  return t;
}

}  // namespace

MollifierSpec make_mollifier(int d, double h, double eps) {
  if (d < 1 || d > 2) throw Error(ErrorCode::BadBounds, "mollifier: d must be 1 or 2");
  if (!(h > 0.0)) throw Error(ErrorCode::BadBounds, "mollifier: spacing must be positive");
  if (!(eps > 0.0) || eps > 1.0)
    throw Error(ErrorCode::BadBounds, "mollifier: eps must lie in (0, 1]");
  if (eps < 2.0 * h) {
    std::ostringstream os;
    os << "eps = " << eps << " below 2h = " << 2.0 * h
       << "; stencil would not reach any neighbor";
    throw Error(ErrorCode::EpsUnresolvable, os.str());
  }

  MollifierSpec m;
  m.d = d;
  m.eps = eps;
  m.h = h;
  m.radius = stencil_radius(h, eps);
  const int w = 2 * m.radius + 1;
  if (d == 1) {
    m.w.assign(static_cast<std::size_t>(w), 0.0);
    double s = 0.0;
    for (int k = -m.radius; k <= m.radius; ++k) {
      m.w[static_cast<std::size_t>(k + m.radius)] = bump(k * h / eps);
      s += m.w[static_cast<std::size_t>(k + m.radius)];
    }
    for (auto& x : m.w) x /= s * h;
  } else {
    m.w.assign(static_cast<std::size_t>(w) * w, 0.0);
    double s = 0.0;
    for (int ky = -m.radius; ky <= m.radius; ++ky)
      for (int kx = -m.radius; kx <= m.radius; ++kx) {
        const double r = std::hypot(kx * h, ky * h);
        const double val = bump(r / eps);
        m.w[static_cast<std::size_t>(ky + m.radius) * w + (kx + m.radius)] = val;
        s += val;
      }
    for (auto& x : m.w) x /= s * h * h;
  }
  return m;
}

namespace {

/// Periodic convolution of a scalar position field with the (possibly 2D)
/// stencil; out = field * theta in density normalization (sum w h^d = 1).
std::vector<double> convolve_macro(const std::vector<double>& field,
                                   const MollifierSpec& m, const PhaseGrid& g) {
  std::vector<double> out(field.size(), 0.0);
  const int R = m.radius;
  const int W = 2 * R + 1;
  const double hd = g.d == 1 ? m.h : m.h * m.h;
  if (g.d == 1) {
    for (int i = 0; i < g.Nx; ++i) {
      double acc = 0.0;
      for (int k = -R; k <= R; ++k) {
        int j = i + k;
        if (j < 0) j += g.Nx;
        if (j >= g.Nx) j -= g.Nx;
        acc += m.w[static_cast<std::size_t>(k + R)] * field[static_cast<std::size_t>(j)];
      }
      out[static_cast<std::size_t>(i)] = acc * hd;
    }
    return out;
  }
  for (int iy = 0; iy < g.Nx; ++iy)
    for (int ix = 0; ix < g.Nx; ++ix) {
      double acc = 0.0;
      for (int ky = -R; ky <= R; ++ky) {
        int jy = iy + ky;
        if (jy < 0) jy += g.Nx;
        if (jy >= g.Nx) jy -= g.Nx;
        const double* wrow = m.w.data() + static_cast<std::size_t>(ky + R) * W;
        const double* frow = field.data() + static_cast<std::size_t>(jy) * g.Nx;
        for (int kx = -R; kx <= R; ++kx) {
          int jx = ix + kx;
          if (jx < 0) jx += g.Nx;
          if (jx >= g.Nx) jx -= g.Nx;
          acc += wrow[kx + R] * frow[jx];
        }
      }
      out[static_cast<std::size_t>(iy) * g.Nx + ix] = acc * hd;
    }
  return out;
}

}  // namespace

RegularizedFields regularize_fields(const MacroFieldSet& macro,
                                    const MollifierSpec& moll,
                                    const PhaseGrid& grid) {
  if (static_cast<int>(macro.rho.size()) != grid.nxc)
    throw Error(ErrorCode::GridMismatch, "macro field size != position cells");

  const double eps = moll.eps;
  const int d = grid.d;
  const double cap = std::pow(eps, -(2.0 * d + 1.0));
  const double eps_d1 = std::pow(eps, d + 1.0);
  const double eps_2d1 = std::pow(eps, 2.0 * d + 1.0);

  RegularizedFields out;
  out.eps = eps;
  const std::vector<double> s = convolve_macro(macro.rho, moll, grid);
  const std::vector<double> tx = convolve_macro(macro.mom_x, moll, grid);
  std::vector<double> ty;
  if (d == 2) ty = convolve_macro(macro.mom_y, moll, grid);

  out.rho_eps.resize(s.size());
  out.ux_eps.resize(s.size());
  if (d == 2) out.uy_eps.resize(s.size());

  for (std::size_t i = 0; i < s.size(); ++i) {
    const double si = s[i];
    const double t2 = d == 1 ? tx[i] * tx[i] : tx[i] * tx[i] + ty[i] * ty[i];
    const double denom = si + eps_2d1 * (1.0 + t2);
    out.rho_eps[i] = si / (1.0 + eps_d1 * si);
    out.ux_eps[i] = tx[i] / denom;
    if (d == 2) out.uy_eps[i] = ty[i] / denom;

    const double umag = d == 1 ? std::fabs(out.ux_eps[i])
                               : std::hypot(out.ux_eps[i], out.uy_eps[i]);
    if (out.rho_eps[i] > cap * (1.0 + 1e-12) || umag > cap * (1.0 + 1e-12) ||
        out.rho_eps[i] < 0.0) {
      std::ostringstream os;
      os << "regularized field escaped its closed-form bound at cell " << i
         << " (rho_eps = " << out.rho_eps[i] << ", |u_eps| = " << umag
         << ", cap = " << cap << "); this is a bug, not a data problem";
      throw Error(ErrorCode::BoundViolation, os.str());
    }
  }
  return out;
}

DistributionField regularize_initial(const DistributionField& f0, double eps,
                                     double q) {
  const PhaseGrid& g = f0.grid;
  if (q <= g.d) {
    std::ostringstream os;
    os << "floor decay q = " << q << " must exceed d = " << g.d;
    throw Error(ErrorCode::BadQ, os.str());
  }
  // Build both axis stencils first so resolvability errors fire before any
  // work happens.
  if (eps < 2.0 * g.dv) {
    std::ostringstream os;
    os << "eps = " << eps << " below 2dv = " << 2.0 * g.dv
       << "; velocity mollifier unresolvable";
    throw Error(ErrorCode::EpsUnresolvable, os.str());
  }
  make_mollifier(g.d, g.dx, eps);  // validates eps against dx
  const int Rx = stencil_radius(g.dx, eps);
  const int Rv = stencil_radius(g.dv, eps);
  const std::vector<double> wx = axis_weights(g.dx, eps, Rx);
  const std::vector<double> wv = axis_weights(g.dv, eps, Rv);

  DistributionField out = make_field(g);
  out.time = f0.time;
  std::vector<double> tmp(f0.f.size());

  // x-mollification (periodic), axis by axis of the product kernel.
  const auto nvc = static_cast<std::size_t>(g.nvc);
  if (g.d == 1) {
    for (int v = 0; v < g.nvc; ++v)
      convolve_axis_periodic(f0.f.data() + v, tmp.data() + v, g.Nx,
                             g.nvc, wx.data(), Rx, g.dx);
  } else {
    // x-axis then y-axis on the position torus
    for (int xy = 0; xy < g.Nx; ++xy)
      for (int v = 0; v < g.nvc; ++v) {
        const std::size_t off = static_cast<std::size_t>(xy) * g.Nx * nvc + v;
        convolve_axis_periodic(f0.f.data() + off, out.f.data() + off, g.Nx,
                               g.nvc, wx.data(), Rx, g.dx);
      }
    for (int xx = 0; xx < g.Nx; ++xx)
      for (int v = 0; v < g.nvc; ++v) {
        const std::size_t off = static_cast<std::size_t>(xx) * nvc + v;
        convolve_axis_periodic(out.f.data() + off, tmp.data() + off, g.Nx,
                               static_cast<int>(g.Nx * nvc), wx.data(), Rx, g.dx);
      }
  }

  // v-mollification (zero padded beyond the box).
  std::fill(out.f.begin(), out.f.end(), 0.0);
  if (g.d == 1) {
    for (int x = 0; x < g.nxc; ++x)
      convolve_axis_padded(tmp.data() + static_cast<std::size_t>(x) * g.nvc,
                           out.f.data() + static_cast<std::size_t>(x) * g.nvc,
                           g.Nv, 1, wv.data(), Rv, g.dv);
  } else {
    std::vector<double> tmp2(f0.f.size());
    for (int x = 0; x < g.nxc; ++x)
      for (int jy = 0; jy < g.Nv; ++jy) {
        const std::size_t off =
            static_cast<std::size_t>(x) * nvc + static_cast<std::size_t>(jy) * g.Nv;
        convolve_axis_padded(tmp.data() + off, tmp2.data() + off, g.Nv, 1,
                             wv.data(), Rv, g.dv);
      }
    for (int x = 0; x < g.nxc; ++x)
      for (int jx = 0; jx < g.Nv; ++jx) {
        const std::size_t off = static_cast<std::size_t>(x) * nvc + jx;
        convolve_axis_padded(tmp2.data() + off, out.f.data() + off, g.Nv,
                             g.Nv, wv.data(), Rv, g.dv);
      }
  }

  // Strictly positive floor eps * exp(-|v|^2) / (1 + |x|_per^q).
  const double x0 = g.xc[0];
  for (int x = 0; x < g.nxc; ++x) {
    double xd;
    if (g.d == 1) {
      xd = dist_per(g.xc[static_cast<std::size_t>(x)], x0, g.L);
    } else {
      const int ix = x % g.Nx, iy = x / g.Nx;
      const double ddx = dist_per(g.xc[static_cast<std::size_t>(ix)], x0, g.L);
      const double ddy = dist_per(g.xc[static_cast<std::size_t>(iy)], x0, g.L);
      xd = std::hypot(ddx, ddy);
    }
    const double fx = eps / (1.0 + std::pow(xd, q));
    double* row = out.f.data() + static_cast<std::size_t>(x) * nvc;
    if (g.d == 1) {
      for (int j = 0; j < g.Nv; ++j)
        row[j] += fx * std::exp(-g.vc2[static_cast<std::size_t>(j)]);
    } else {
      for (int jy = 0; jy < g.Nv; ++jy) {
        const double ey = std::exp(-g.vc2[static_cast<std::size_t>(jy)]);
        for (int jx = 0; jx < g.Nv; ++jx)
          row[static_cast<std::size_t>(jy) * g.Nv + jx] +=
              fx * ey * std::exp(-g.vc2[static_cast<std::size_t>(jx)]);
      }
    }
  }
  return out;
}

}  // namespace bgk
