// SPDX-License-Identifier: MIT
//
// Barotropic Euler reference solver: pointwise fluxes against the kinetic
// second moments, conservation, entropy decay, CFL guard, and first-order
// self convergence.
#include <cmath>
#include <vector>

#include "bgk/equilibrium.hpp"
#include "bgk/errors.hpp"
#include "bgk/euler.hpp"
#include "bgk/phase_grid.hpp"
#include "bgk/regime.hpp"
#include "bgk/rng.hpp"
#include "doctest.h"

using bgk::Error;
using bgk::ErrorCode;
using bgk::EulerState;
using bgk::GammaRegime;

namespace {

EulerState sine_state(int nx, double L, double rho0, double amp, double u_amp) {
  EulerState s;
  s.d = 1;
  s.Nx = nx;
  s.L = L;
  s.rho.resize(static_cast<std::size_t>(nx));
  s.mx.resize(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    const double x = (i + 0.5) * L / nx;
    const double rho = rho0 * (1.0 + amp * std::sin(2.0 * M_PI * x / L));
    s.rho[static_cast<std::size_t>(i)] = rho;
    s.mx[static_cast<std::size_t>(i)] =
        rho * u_amp * std::cos(2.0 * M_PI * x / L);
  }
  return s;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("euler flux: frozen values") {
  // d = 1, gamma = 3: pressure rho^3/12.  At rest with rho = 1 the only
  // nonzero entry is the momentum flux 1/12.
  const GammaRegime g3 = bgk::make_regime(1, 3.0);
  {
    const double m = 0.0;
    const bgk::EulerFlux fl = bgk::euler_flux(g3, 1.0, &m, 1);
    CHECK(fl.mass[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(fl.mom[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  }
  // Moving state: mass flux m, momentum flux rho u^2 + P.
  {
    const double m = 0.6;  // rho = 1.5, u = 0.4
    const bgk::EulerFlux fl = bgk::euler_flux(g3, 1.5, &m, 1);
    CHECK(fl.mass[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(fl.mom[0] ==
          doctest::Approx(1.5 * 0.16 + std::pow(1.5, 3.0) / 12.0).epsilon(1e-14));
  }
  // gamma = 5/3 has C_d = 1 exactly: P(2) = 2^(5/3).
  const GammaRegime g53 = bgk::make_regime(1, 5.0 / 3.0);
  {
    const double m = 0.0;
    const bgk::EulerFlux fl = bgk::euler_flux(g53, 2.0, &m, 1);
    CHECK(fl.mom[0] == doctest::Approx(std::pow(2.0, 5.0 / 3.0)).epsilon(1e-14));
  }
  // d = 2 indicator (gamma = 2): P = rho^2/(4 pi); full tensor layout.
  const GammaRegime g2 = bgk::make_regime(2, 2.0);
  {
    const double m[2] = {0.3, -0.8};  // rho = 2: u = (0.15, -0.4)
    const bgk::EulerFlux fl = bgk::euler_flux(g2, 2.0, m, 2);
    const double P = 4.0 / (4.0 * M_PI);
    CHECK(fl.mass[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(fl.mass[1] == doctest::Approx(-0.8).epsilon(1e-15));
    CHECK(fl.mom[0] == doctest::Approx(2.0 * 0.15 * 0.15 + P).epsilon(1e-14));
    CHECK(fl.mom[1] == doctest::Approx(2.0 * 0.15 * -0.4).epsilon(1e-14));
    CHECK(fl.mom[2] == doctest::Approx(2.0 * -0.4 * 0.15).epsilon(1e-14));
    CHECK(fl.mom[3] == doctest::Approx(2.0 * 0.4 * 0.4 + P).epsilon(1e-14));
  }
}

TEST_CASE("euler momentum flux equals the kinetic second moment") {
  // Dual route: integral v^2 M dv = rho u^2 + P for every admissible state,
  // so the fluid flux and the kinetic closure must agree exactly.
  bgk::Rng rng(321u);
  for (double gamma : {3.0, 5.0 / 3.0, 1.4}) {
    const GammaRegime regime = bgk::make_regime(1, gamma);
    for (int i = 0; i < 50; ++i) {
      const double rho = rng.uniform(0.05, 4.0);
      const double u = rng.uniform(-2.0, 2.0);
      bgk::MacroState st;
      st.rho = rho;
      st.u = bgk::vec1(u);
      const bgk::MomentTriple mom = bgk::closed_form_moments(regime, st);
      const double m = rho * u;
      const bgk::EulerFlux fl = bgk::euler_flux(regime, rho, &m, 1);
      CHECK(fl.mom[0] == doctest::Approx(mom.m2).epsilon(1e-12));
    }
  }
}

TEST_CASE("max_wavespeed: frozen value") {
  // gamma = 3: c = sqrt(3 rho^2 / 12) = rho/2, so |u| + c = 0.3 + 0.5.
  const GammaRegime regime = bgk::make_regime(1, 3.0);
  EulerState s;
  s.d = 1;
  s.Nx = 4;
  s.L = 1.0;
  s.rho = {1.0, 1.0, 1.0, 1.0};
  s.mx = {0.3, 0.3, 0.3, 0.3};
  CHECK(bgk::max_wavespeed(regime, s) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("euler run conserves mass and momentum, dissipates entropy") {
  const GammaRegime regime = bgk::make_regime(1, 3.0);
  const EulerState s0 = sine_state(128, 1.0, 1.0, 0.2, 0.1);
  const bgk::EulerRunResult run = bgk::run_euler(s0, regime, 0.2);
  CHECK(run.state.t == doctest::Approx(0.2).epsilon(1e-12));
  REQUIRE(run.steps.size() >= 2);
  const bgk::EulerStepRecord& first = run.steps.front();
  for (const bgk::EulerStepRecord& r : run.steps) {
    CHECK(r.mass == doctest::Approx(first.mass).epsilon(1e-12));
    CHECK(r.mom_x == doctest::Approx(first.mom_x).scale(1.0).epsilon(1e-12));
  }
  // Rusanov dissipates the convex entropy up to rounding.
  for (std::size_t j = 1; j < run.steps.size(); ++j)
    CHECK(run.steps[j].eta_total <= run.steps[j - 1].eta_total + 1e-10);
  // Slope tracking: a smooth subsonic wave this short must not shock.
  CHECK(run.max_slope_initial > 0.0);
  CHECK(run.max_slope_peak < 10.0 * run.max_slope_initial);
  CHECK(run.u_max_peak >= 0.0);
}

TEST_CASE("fv_step rejects CFL violations") {
  const GammaRegime regime = bgk::make_regime(1, 3.0);
  EulerState s = sine_state(64, 1.0, 1.0, 0.2, 0.1);
  try {
    bgk::fv_step(s, regime, 1.0);  // dx = 1/64, wavespeed ~ 0.7
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CFLViolation);
  }
  CHECK_NOTHROW(bgk::fv_step(s, regime, 1e-4));
}

TEST_CASE("euler self convergence is at least first order") {
  const GammaRegime regime = bgk::make_regime(1, 3.0);
  const double T = 0.05;
  auto run_at = [&](int nx) {
    return bgk::run_euler(sine_state(nx, 1.0, 1.0, 0.2, 0.1), regime, T).state;
  };
  const EulerState c = run_at(64);
  const EulerState m = run_at(128);
  const EulerState f = run_at(256);
  auto coarse_l1 = [](const EulerState& fine, const EulerState& coarse) {
    // Average fine cell pairs down to the coarse grid, L1 in rho.
    double acc = 0.0;
    for (int i = 0; i < coarse.Nx; ++i) {
      const double avg = 0.5 * (fine.rho[static_cast<std::size_t>(2 * i)] +
                                fine.rho[static_cast<std::size_t>(2 * i + 1)]);
      acc += std::fabs(avg - coarse.rho[static_cast<std::size_t>(i)]);
    }
    return acc * coarse.dx();
  };
  const double d1 = coarse_l1(m, c);
  const double d2 = coarse_l1(f, m);
  CHECK(d1 > 1e-8);
  const double order = std::log2(d1 / d2);
  CHECK(order >= 0.7);
}

TEST_CASE("macro_distance: frozen value and grid mismatch") {
  const bgk::PhaseGrid grid = bgk::make_grid(1, 1.0, 8, 2.0, 8);
  bgk::MacroFieldSet m;
  m.d = 1;
  m.rho.assign(8, 1.1);
  m.mom_x.assign(8, 0.25);
  m.energy2.assign(8, 0.0);
  EulerState s;
  s.d = 1;
  s.Nx = 8;
  s.L = 1.0;
  s.rho.assign(8, 1.0);
  s.mx.assign(8, 0.2);
  const bgk::MacroDistance dist = bgk::macro_distance(m, grid, s);
  CHECK(dist.l1_rho == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(dist.l1_momentum == doctest::Approx(0.05).epsilon(1e-13));

  EulerState wrong = s;
  wrong.Nx = 16;
  wrong.rho.assign(16, 1.0);
  wrong.mx.assign(16, 0.2);
  try {
    bgk::macro_distance(m, grid, wrong);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("euler total mass matches the cell sum times dx") {
  const EulerState s = sine_state(32, 2.0, 1.3, 0.1, 0.0);
  CHECK(s.dx() == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(s.cells() == 32);
  // Mean of rho0 (1 + amp sin) over a full period is rho0.
  CHECK(sum(s.rho) * s.dx() == doctest::Approx(1.3 * 2.0).epsilon(1e-12));
}
