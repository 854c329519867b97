// SPDX-License-Identifier: MIT
//
// Phase-space grid geometry, discrete moments against an independent oracle,
// the moment-matched discrete equilibrium (exact conservation, overflow and
// correction guards), norms, and snapshot round trips.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bgk/equilibrium.hpp"
#include "bgk/errors.hpp"
#include "bgk/phase_grid.hpp"
#include "bgk/regime.hpp"
#include "bgk/rng.hpp"
#include "doctest.h"

using bgk::DistributionField;
using bgk::Error;
using bgk::ErrorCode;
using bgk::GammaRegime;
using bgk::MacroFieldSet;
using bgk::PhaseGrid;

namespace {

MacroFieldSet empty_macro(const PhaseGrid& grid) {
  MacroFieldSet m;
  m.d = grid.d;
  const auto n = static_cast<std::size_t>(grid.nxc);
  m.rho.assign(n, 0.0);
  m.mom_x.assign(n, 0.0);
  if (grid.d == 2) m.mom_y.assign(n, 0.0);
  m.energy2.assign(n, 0.0);
  return m;
}

DistributionField random_field(const PhaseGrid& grid, std::uint64_t seed,
                               double lo = 0.0, double hi = 1.0) {
  DistributionField f = bgk::make_field(grid);
  bgk::Rng rng(seed);
  for (double& v : f.f) v = rng.uniform(lo, hi);
  return f;
}

std::string temp_file(const char* stem) {
  return (std::filesystem::temp_directory_path() / (std::string(stem) + ".bin"))
      .string();
}

}  // namespace

TEST_CASE("make_grid validates its arguments") {
  CHECK_NOTHROW(bgk::make_grid(1, 1.0, 4, 2.0, 4));
  CHECK_THROWS_AS(bgk::make_grid(3, 1.0, 4, 2.0, 4), Error);     // d
  CHECK_THROWS_AS(bgk::make_grid(1, 0.0, 4, 2.0, 4), Error);     // L
  CHECK_THROWS_AS(bgk::make_grid(1, 1.0, 5, 2.0, 4), Error);     // odd Nx
  CHECK_THROWS_AS(bgk::make_grid(1, 1.0, 2, 2.0, 4), Error);     // Nx < 4
  CHECK_THROWS_AS(bgk::make_grid(1, 1.0, 4, -1.0, 4), Error);  // Vmax
  CHECK_THROWS_AS(bgk::make_grid(1, 1.0, 4, 2.0, 7), Error);   // odd Nv
  try {
    bgk::make_grid(1, 1.0, 4, 2.0, 2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadBounds);
  }
}

TEST_CASE("grid geometry: frozen 1d example") {
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 4);
  CHECK(g.dx == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.dv == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.nxc == 4);
  CHECK(g.nvc == 4);
  const double xs[] = {0.125, 0.375, 0.625, 0.875};
  const double vs[] = {-1.5, -0.5, 0.5, 1.5};
  for (int i = 0; i < 4; ++i) {
    CHECK(g.x_center(i) == doctest::Approx(xs[i]).epsilon(1e-15));
    CHECK(g.v_center(i) == doctest::Approx(vs[i]).epsilon(1e-15));
    CHECK(g.vc2[static_cast<std::size_t>(i)] ==
          doctest::Approx(vs[i] * vs[i]).epsilon(1e-15));
  }
  CHECK(g.dvol() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.xvol() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("grid geometry: 2d cell counts and volumes") {
  const PhaseGrid g = bgk::make_grid(2, 2.0, 6, 1.5, 4);
  CHECK(g.nxc == 36);
  CHECK(g.nvc == 16);
  CHECK(g.dx == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
  CHECK(g.dv == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(g.dvol() == doctest::Approx(0.75 * 0.75).epsilon(1e-15));
  CHECK(g.xvol() == doctest::Approx((2.0 / 6.0) * (2.0 / 6.0)).epsilon(1e-15));
}

TEST_CASE("discrete moments match an independent reimplementation") {
  // d = 1.
  {
    const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 16);
    const DistributionField f = random_field(g, 77u, 0.0, 2.0);
    const MacroFieldSet m = bgk::discrete_moments(f);
    REQUIRE(static_cast<int>(m.rho.size()) == g.nxc);
    for (int x = 0; x < g.nxc; ++x) {
      double rho = 0.0, mom = 0.0, e2 = 0.0;
      for (int j = 0; j < g.Nv; ++j) {
        const double val = f.f[static_cast<std::size_t>(x * g.nvc + j)];
        const double v = g.v_center(j);
        rho += val * g.dv;
        mom += v * val * g.dv;
        e2 += v * v * val * g.dv;
      }
      const auto xi = static_cast<std::size_t>(x);
      CHECK(m.rho[xi] == doctest::Approx(rho).epsilon(1e-13));
      CHECK(m.mom_x[xi] == doctest::Approx(mom).epsilon(1e-13));
      CHECK(m.energy2[xi] == doctest::Approx(e2).epsilon(1e-13));
    }
  }
  // d = 2 with the documented layout f[x*nvc + jy*Nv + jx].
  {
    const PhaseGrid g = bgk::make_grid(2, 1.0, 4, 1.5, 6);
    const DistributionField f = random_field(g, 78u, 0.0, 2.0);
    const MacroFieldSet m = bgk::discrete_moments(f);
    const double vol = g.dvol();
    for (int x = 0; x < g.nxc; ++x) {
      double rho = 0.0, mx = 0.0, my = 0.0, e2 = 0.0;
      for (int jy = 0; jy < g.Nv; ++jy)
        for (int jx = 0; jx < g.Nv; ++jx) {
          const double val =
              f.f[static_cast<std::size_t>(x * g.nvc + jy * g.Nv + jx)];
          const double vx = g.v_center(jx), vy = g.v_center(jy);
          rho += val * vol;
          mx += vx * val * vol;
          my += vy * val * vol;
          e2 += (vx * vx + vy * vy) * val * vol;
        }
      const auto xi = static_cast<std::size_t>(x);
      CHECK(m.rho[xi] == doctest::Approx(rho).epsilon(1e-13));
      CHECK(m.mom_x[xi] == doctest::Approx(mx).epsilon(1e-13));
      CHECK(m.mom_y[xi] == doctest::Approx(my).epsilon(1e-13));
      CHECK(m.energy2[xi] == doctest::Approx(e2).epsilon(1e-13));
    }
  }
}

TEST_CASE("vacuum cells report zero momentum and velocity") {
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 8);
  DistributionField f = bgk::make_field(g);
  // Cell 2 carries mass moving at v = vc[6]; everything else is vacuum.
  f.f[static_cast<std::size_t>(2 * g.nvc + 6)] = 3.0;
  const MacroFieldSet m = bgk::discrete_moments(f);
  for (int x = 0; x < g.nxc; ++x) {
    const auto xi = static_cast<std::size_t>(x);
    if (x == 2) {
      CHECK(m.rho[xi] == doctest::Approx(3.0 * g.dv).epsilon(1e-15));
      CHECK(bgk::cell_velocity(m, x)[0] ==
            doctest::Approx(g.v_center(6)).epsilon(1e-14));
    } else {
      CHECK(m.rho[xi] == 0.0);
      CHECK(m.mom_x[xi] == 0.0);
      CHECK(bgk::cell_velocity(m, x)[0] == 0.0);
    }
  }
}

TEST_CASE("discrete equilibrium reproduces its target moments exactly") {
  struct Case {
    int d;
    double gamma;
    int nx, nv;
    double vmax;
  };
  // Velocity resolutions keep the support at >= 5 cells per radius: the
  // affine correction stays far from its 50% refusal threshold there.
  const Case cases[] = {{1, 3.0, 8, 128, 2.5},
                        {1, 5.0 / 3.0, 8, 64, 4.5},
                        {2, 2.0, 4, 48, 2.0},
                        {2, 1.4, 4, 32, 4.0}};
  for (const Case& c : cases) {
    CAPTURE(c.d);
    CAPTURE(c.gamma);
    const GammaRegime regime = bgk::make_regime(c.d, c.gamma);
    const PhaseGrid g = bgk::make_grid(c.d, 1.0, c.nx, c.vmax, c.nv);
    MacroFieldSet target = empty_macro(g);
    bgk::Rng rng(5150u + c.nx);
    for (int i = 0; i < g.nxc; ++i) {
      const auto xi = static_cast<std::size_t>(i);
      target.rho[xi] = rng.uniform(0.7, 1.3);
      target.mom_x[xi] = target.rho[xi] * rng.uniform(-0.2, 0.2);
      if (c.d == 2) target.mom_y[xi] = target.rho[xi] * rng.uniform(-0.2, 0.2);
    }
    bgk::EquilibriumBuildStats stats;
    const DistributionField M = bgk::discrete_equilibrium(regime, target, g, &stats);
    CHECK(stats.max_correction >= stats.mean_correction);
    CHECK(stats.mean_correction >= 0.0);
    CHECK(stats.max_correction < 0.5);
    for (double v : M.f) CHECK(v >= 0.0);
    const MacroFieldSet got = bgk::discrete_moments(M);
    for (int i = 0; i < g.nxc; ++i) {
      const auto xi = static_cast<std::size_t>(i);
      CHECK(got.rho[xi] == doctest::Approx(target.rho[xi]).epsilon(1e-12));
      CHECK(got.mom_x[xi] ==
            doctest::Approx(target.mom_x[xi]).scale(1.0).epsilon(1e-12));
      if (c.d == 2)
        CHECK(got.mom_y[xi] ==
              doctest::Approx(target.mom_y[xi]).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("equilibrium with a separate shape state: frozen correction size") {
  // Shape (rho = 2, u = 0) on the coarse box Vmax = 2, Nv = 4 samples mass 2
  // at the two inner centers (q0 = 2, second moment 0.5).  Matching target
  // momentum 0.1 then needs beta = 0.1/0.5 = 0.2 and the conservative
  // correction estimate is beta * (r + dv) = 0.2 * 2 = 0.4.
  const GammaRegime regime = bgk::make_regime(1, 3.0);
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 4);
  MacroFieldSet shape = empty_macro(g);
  MacroFieldSet target = empty_macro(g);
  for (int i = 0; i < g.nxc; ++i) {
    const auto xi = static_cast<std::size_t>(i);
    shape.rho[xi] = 2.0;
    target.rho[xi] = 2.0;
    target.mom_x[xi] = 0.1;
  }
  bgk::EquilibriumBuildStats stats;
  const DistributionField M =
      bgk::discrete_equilibrium_with_target(regime, shape, target, g, &stats);
  CHECK(stats.max_correction == doctest::Approx(0.4).epsilon(1e-12));
  const MacroFieldSet got = bgk::discrete_moments(M);
  for (int i = 0; i < g.nxc; ++i) {
    const auto xi = static_cast<std::size_t>(i);
    CHECK(got.rho[xi] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(got.mom_x[xi] == doctest::Approx(0.1).epsilon(1e-12));
  }
  for (double v : M.f) CHECK(v >= 0.0);
}

TEST_CASE("equilibrium correction beyond 50% is refused") {
  const GammaRegime regime = bgk::make_regime(1, 3.0);
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 4);
  MacroFieldSet shape = empty_macro(g);
  MacroFieldSet target = empty_macro(g);
  for (int i = 0; i < g.nxc; ++i) {
    const auto xi = static_cast<std::size_t>(i);
    shape.rho[xi] = 2.0;
    target.rho[xi] = 2.0;
    target.mom_x[xi] = 2.0;  // u = 1 against a shape centered at 0
  }
  try {
    bgk::discrete_equilibrium_with_target(regime, shape, target, g, nullptr);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CorrectionFailure);
    CHECK(std::string(e.what()).find("50%") != std::string::npos);
  }
}

TEST_CASE("vacuum target with nonzero momentum is refused") {
  const GammaRegime regime = bgk::make_regime(1, 3.0);
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 8);
  MacroFieldSet macro = empty_macro(g);
  macro.mom_x[0] = 0.5;  // rho[0] stays 0
  try {
    bgk::discrete_equilibrium(regime, macro, g, nullptr);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CorrectionFailure);
    CHECK(std::string(e.what()).find("vacuum") != std::string::npos);
  }
}

TEST_CASE("support poking out of the velocity box is refused") {
  const GammaRegime regime = bgk::make_regime(1, 3.0);
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 8);
  MacroFieldSet macro = empty_macro(g);
  for (int i = 0; i < g.nxc; ++i) {
    const auto xi = static_cast<std::size_t>(i);
    macro.rho[xi] = 1.0;            // support radius 0.5
    macro.mom_x[xi] = 1.0 * 1.8;    // |u| + r = 2.3 > Vmax = 2
  }
  try {
    bgk::discrete_equilibrium(regime, macro, g, nullptr);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SupportOverflow);
    CHECK(std::string(e.what()).find("Vmax") != std::string::npos);
  }
}

TEST_CASE("support thinner than a cell falls back to an exact deposit") {
  // rho = 0.5 has support radius 0.25 < dv = 1; the sampled shape misses
  // every center, so the builder deposits the moments conservatively.
  const GammaRegime regime = bgk::make_regime(1, 3.0);
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 4);
  MacroFieldSet macro = empty_macro(g);
  for (int i = 0; i < g.nxc; ++i) {
    const auto xi = static_cast<std::size_t>(i);
    macro.rho[xi] = 0.5;
    macro.mom_x[xi] = 0.5 * 0.3;
  }
  const DistributionField M = bgk::discrete_equilibrium(regime, macro, g, nullptr);
  for (double v : M.f) CHECK(v >= 0.0);
  const MacroFieldSet got = bgk::discrete_moments(M);
  for (int i = 0; i < g.nxc; ++i) {
    const auto xi = static_cast<std::size_t>(i);
    CHECK(got.rho[xi] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(got.mom_x[xi] == doctest::Approx(0.15).epsilon(1e-13));
  }
}

TEST_CASE("field norms: frozen constant-field values") {
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 4);
  DistributionField f = bgk::make_field(g);
  for (double& v : f.f) v = 0.3;
  // vc2 = {2.25, 0.25, 0.25, 2.25}; sum(1 + v^2) dv dx = 4 + 5 = 9.
  const GammaRegime ind = bgk::make_regime(1, 3.0);
  const bgk::FieldNorms n_ind = bgk::field_norms(f, ind);
  CHECK(n_ind.l1 == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(n_ind.l1_2 == doctest::Approx(2.7).epsilon(1e-14));
  CHECK(n_ind.l_infty == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(!n_ind.l_1p2n.has_value());

  // gamma = 5/3 has n = 2, so the extra norm is plain L2:
  // (0.09 * 4)^(1/2) = 0.6.
  const GammaRegime pp = bgk::make_regime(1, 5.0 / 3.0);
  const bgk::FieldNorms n_pp = bgk::field_norms(f, pp);
  REQUIRE(n_pp.l_1p2n.has_value());
  CHECK(*n_pp.l_1p2n == doctest::Approx(0.6).epsilon(1e-13));
}

TEST_CASE("field norms: homogeneity and domination") {
  const GammaRegime pp = bgk::make_regime(1, 5.0 / 3.0);
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 16);
  const DistributionField f = random_field(g, 99u, -1.0, 1.0);
  DistributionField f3 = f;
  for (double& v : f3.f) v *= 3.0;
  const bgk::FieldNorms a = bgk::field_norms(f, pp);
  const bgk::FieldNorms b = bgk::field_norms(f3, pp);
  CHECK(b.l1 == doctest::Approx(3.0 * a.l1).epsilon(1e-13));
  CHECK(b.l1_2 == doctest::Approx(3.0 * a.l1_2).epsilon(1e-13));
  CHECK(b.l_infty == doctest::Approx(3.0 * a.l_infty).epsilon(1e-13));
  CHECK(*b.l_1p2n == doctest::Approx(3.0 * *a.l_1p2n).epsilon(1e-13));
  // The (1 + |v|^2) weight dominates the plain L1 weight.
  CHECK(a.l1_2 >= a.l1);
  // And l1 is bounded by l_infty times the phase-space volume (here 4).
  CHECK(a.l1 <= a.l_infty * 4.0 + 1e-14);
}

TEST_CASE("snapshot roundtrip is bit exact") {
  const PhaseGrid g = bgk::make_grid(2, 1.5, 4, 2.0, 4);
  DistributionField f = random_field(g, 4242u, 0.0, 3.0);
  f.time = 0.375;
  const std::string path = temp_file("bgk_snapshot_roundtrip");
  bgk::write_snapshot(path, f, 1.4);
  const bgk::Snapshot snap = bgk::read_snapshot(path);
  std::filesystem::remove(path);
  CHECK(snap.gamma == 1.4);
  CHECK(snap.field.time == 0.375);
  CHECK(snap.field.grid.d == 2);
  CHECK(snap.field.grid.L == 1.5);
  CHECK(snap.field.grid.Nx == 4);
  CHECK(snap.field.grid.Vmax == 2.0);
  CHECK(snap.field.grid.Nv == 4);
  REQUIRE(snap.field.f.size() == f.f.size());
  for (std::size_t i = 0; i < f.f.size(); ++i) CHECK(snap.field.f[i] == f.f[i]);
}

TEST_CASE("snapshot reader rejects malformed files") {
  try {
    bgk::read_snapshot("/nonexistent/dir/snapshot.bin");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }

  const std::string bad_magic = temp_file("bgk_snapshot_bad_magic");
  {
    std::ofstream os(bad_magic);
    os << "not a snapshot\n";
  }
  try {
    bgk::read_snapshot(bad_magic);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("magic") != std::string::npos);
  }
  std::filesystem::remove(bad_magic);

  // Truncate a valid snapshot's payload.
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 4);
  const DistributionField f = random_field(g, 7u);
  const std::string trunc = temp_file("bgk_snapshot_trunc");
  bgk::write_snapshot(trunc, f, 3.0);
  const auto full = std::filesystem::file_size(trunc);
  std::filesystem::resize_file(trunc, full - 8);
  try {
    bgk::read_snapshot(trunc);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("truncated") != std::string::npos);
  }
  std::filesystem::remove(trunc);
}

TEST_CASE("macro csv layout") {
  const PhaseGrid g = bgk::make_grid(1, 1.0, 4, 2.0, 8);
  DistributionField f = bgk::make_field(g);
  for (double& v : f.f) v = 0.25;
  const MacroFieldSet m = bgk::discrete_moments(f);
  const std::string path = temp_file("bgk_macro_csv");
  bgk::write_macro_csv(path, g, m);
  std::ifstream is(path);
  REQUIRE(is.good());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "x,rho,mom_x,u_x,energy2");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == g.nxc);
  is.close();
  std::filesystem::remove(path);

  const PhaseGrid g2 = bgk::make_grid(2, 1.0, 4, 2.0, 4);
  DistributionField f2 = bgk::make_field(g2);
  const MacroFieldSet m2 = bgk::discrete_moments(f2);
  const std::string path2 = temp_file("bgk_macro_csv_2d");
  bgk::write_macro_csv(path2, g2, m2);
  std::ifstream is2(path2);
  REQUIRE(std::getline(is2, line));
  CHECK(line == "x,y,rho,mom_x,mom_y,u_x,u_y,energy2");
  is2.close();
  std::filesystem::remove(path2);
}
