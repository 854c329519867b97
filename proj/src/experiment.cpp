// SPDX-License-Identifier: MIT

#include "bgk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "bgk/equilibrium.hpp"
#include "bgk/io.hpp"
#include "bgk/kernels.hpp"

namespace bgk {

namespace {

double u0_component(const ExperimentConfig& cfg, int k) {
  if (cfg.u0.size() == 1) return k == 0 ? cfg.u0[0] : 0.0;
  return cfg.u0[static_cast<std::size_t>(k)];
}

/// rho(x) at position-cell index c for the configured profile.
double density_profile(const ExperimentConfig& cfg, const PhaseGrid& g, int c) {
  const double x1 = g.xc[static_cast<std::size_t>(g.d == 1 ? c : c % g.Nx)];
  switch (cfg.profile()) {
    case ICProfile::Equilibrium:
      return cfg.rho0;
    case ICProfile::SineDensity:
    case ICProfile::TwoBump:
      return cfg.rho0 * (1.0 + cfg.amp * std::sin(2.0 * M_PI * x1 / cfg.L));
    case ICProfile::Riemann:
      return x1 < 0.5 * cfg.L ? cfg.rhoL : cfg.rhoR;
  }
  return cfg.rho0;
}

MacroFieldSet macro_profile(const ExperimentConfig& cfg, const PhaseGrid& g,
                            double u_shift_x) {
  MacroFieldSet m;
  m.d = g.d;
  const auto n = static_cast<std::size_t>(g.nxc);
  m.rho.resize(n);
  m.mom_x.resize(n);
  if (g.d == 2) m.mom_y.resize(n);
  m.energy2.assign(n, 0.0);
  const double ux = u0_component(cfg, 0) + u_shift_x;
  const double uy = g.d == 2 ? u0_component(cfg, 1) : 0.0;
  for (int c = 0; c < g.nxc; ++c) {
    const double rho = density_profile(cfg, g, c);
    m.rho[static_cast<std::size_t>(c)] = rho;
    m.mom_x[static_cast<std::size_t>(c)] = rho * ux;
    if (g.d == 2) m.mom_y[static_cast<std::size_t>(c)] = rho * uy;
  }
  return m;
}

nlohmann::json margins_json(const ExperimentConfig& cfg,
                            const SimulateOutcome& out,
                            const GammaRegime& regime, const PhaseGrid& g) {
  nlohmann::json j;
  j["d"] = cfg.d;
  j["gamma"] = cfg.gamma;
  j["relax_eps"] = cfg.relax_eps;
  j["reg_eps"] = cfg.reg_eps;
  j["dt"] = out.run.report.dt;
  j["dv"] = g.dv;
  j["dx"] = g.dx;
  j["tol"] = margin_tol(g.dv, out.run.report.dt, cfg.tol_c1, cfg.tol_c2);
  j["entropy_plain"] = out.entropy.plain;
  j["entropy_reg"] = out.entropy.reg;
  j["energy_monotone"] = out.energy.monotone;
  j["energy_plain"] = out.energy.plain;
  j["energy_reg"] = out.energy.reg;
  j["minimization"] = out.minimization_margin;
  j["xmom2_max_violation"] = out.growth.max_violation;
  j["xmom2_satisfied"] = out.growth.satisfied;
  if (regime.branch == Branch::PositivePart)
    j["l1p2n_margin"] = check_l1p2n_bound(out.run.report, regime);
  return j;
}

RunReport thin_report(const RunReport& full, int every) {
  if (every <= 1 || full.steps.size() < 3) return full;
  RunReport t = full;
  t.steps.clear();
  for (std::size_t i = 0; i < full.steps.size(); ++i)
    if (i % static_cast<std::size_t>(every) == 0 || i + 1 == full.steps.size())
      t.steps.push_back(full.steps[i]);
  return t;
}

}  // namespace

PhaseGrid grid_of(const ExperimentConfig& cfg) {
  return make_grid(cfg.d, cfg.L, cfg.Nx, cfg.Vmax, cfg.Nv);
}

GammaRegime regime_of(const ExperimentConfig& cfg) {
  return make_regime(cfg.d, cfg.gamma);
}

DistributionField initial_kinetic_raw(const ExperimentConfig& cfg) {
  const PhaseGrid g = grid_of(cfg);
  const GammaRegime regime = regime_of(cfg);
  switch (cfg.profile()) {
    case ICProfile::Equilibrium:
    case ICProfile::SineDensity:
      return discrete_equilibrium(regime, macro_profile(cfg, g, 0.0), g);
    case ICProfile::TwoBump: {
      const DistributionField a = discrete_equilibrium(
          regime, macro_profile(cfg, g, -0.5 * cfg.bump_sep), g);
      const DistributionField b = discrete_equilibrium(
          regime, macro_profile(cfg, g, +0.5 * cfg.bump_sep), g);
      DistributionField out = a;
      kern::axpby(0.5, a.f.data(), 0.5, b.f.data(), out.f.data(), out.f.size());
      return out;
    }
    case ICProfile::Riemann:
      throw Error(ErrorCode::ValidationError,
                  "the riemann profile is for the Euler reference solver only; "
                  "kinetic runs need a velocity-supported initial datum");
  }
  throw Error(ErrorCode::ValidationError, "unreachable ic profile");
}

DistributionField initial_kinetic(const ExperimentConfig& cfg) {
  const double q = cfg.q > 0.0 ? cfg.q : cfg.d + 2.0;
  return regularize_initial(initial_kinetic_raw(cfg), cfg.reg_eps, q);
}

EulerState initial_euler_profile(const ExperimentConfig& cfg,
                                 std::optional<int> nx_override) {
  const int nx = nx_override.value_or(cfg.Nx);
  EulerState s;
  s.d = cfg.d;
  s.Nx = nx;
  s.L = cfg.L;
  const int cells = s.cells();
  s.rho.resize(static_cast<std::size_t>(cells));
  s.mx.resize(static_cast<std::size_t>(cells));
  if (cfg.d == 2) s.my.resize(static_cast<std::size_t>(cells));
  const double dx = cfg.L / nx;
  const double ux = u0_component(cfg, 0);
  const double uy = cfg.d == 2 ? u0_component(cfg, 1) : 0.0;
  for (int c = 0; c < cells; ++c) {
    const int ix = cfg.d == 1 ? c : c % nx;
    const double x1 = (ix + 0.5) * dx;
    double rho, u1 = ux;
    switch (cfg.profile()) {
      case ICProfile::Equilibrium:
        rho = cfg.rho0;
        break;
      case ICProfile::SineDensity:
      case ICProfile::TwoBump:
        rho = cfg.rho0 * (1.0 + cfg.amp * std::sin(2.0 * M_PI * x1 / cfg.L));
        break;
      case ICProfile::Riemann:
        rho = x1 < 0.5 * cfg.L ? cfg.rhoL : cfg.rhoR;
        u1 = x1 < 0.5 * cfg.L ? cfg.uL : cfg.uR;
        break;
      default:
        rho = cfg.rho0;
    }
    s.rho[static_cast<std::size_t>(c)] = rho;
    s.mx[static_cast<std::size_t>(c)] = rho * u1;
    if (cfg.d == 2) s.my[static_cast<std::size_t>(c)] = rho * uy;
  }
  return s;
}

EulerState euler_from_kinetic(const DistributionField& field) {
  const PhaseGrid& g = field.grid;
  const MacroFieldSet m = discrete_moments(field);
  EulerState s;
  s.d = g.d;
  s.Nx = g.Nx;
  s.L = g.L;
  s.t = field.time;
  s.rho = m.rho;
  s.mx = m.mom_x;
  s.my = m.mom_y;
  return s;
}

SimulateOutcome run_simulate(const ExperimentConfig& cfg,
                             const std::optional<std::string>& out_dir) {
  const PhaseGrid g = grid_of(cfg);
  const GammaRegime regime = regime_of(cfg);
  const DistributionField f0 = initial_kinetic(cfg);

  SolverConfig scfg = cfg.solver();
  if (out_dir && cfg.snapshot_every > 0) {
    io::ensure_dir(*out_dir);
    const std::string dir = *out_dir;
    const double gamma = cfg.gamma;
    const int every = cfg.snapshot_every;
    scfg.on_step = [dir, gamma, every](long step, const DistributionField& F) {
      if (step % every != 0) return;
      std::ostringstream os;
      os << dir << "/snap_" << step << ".bin";
      write_snapshot(os.str(), F, gamma);
    };
  }

  SimulateOutcome out;
  if (scfg.scheme == Scheme::PicardMild) {
    PicardResult pr = picard_solve(f0, regime, scfg);
    out.run.field = std::move(pr.field);
    out.run.report = std::move(pr.report);
  } else {
    out.run = run_splitting(f0, regime, scfg);
  }

  if (out.run.report.steps.size() >= 2) {
    out.entropy = check_entropy_inequality(out.run.report);
    out.energy = check_energy_decay(out.run.report);
    out.growth = check_spatial_moment(
        out.run.report,
        margin_tol(g.dv, out.run.report.dt, cfg.tol_c1, cfg.tol_c2));
  } else {
    out.growth.satisfied = true;
  }
  out.minimization_margin = check_minimization(out.run.field, regime);

  if (out_dir) {
    io::ensure_dir(*out_dir);
    write_run_csv(*out_dir + "/run.csv",
                  thin_report(out.run.report, cfg.csv_every));
    write_macro_csv(*out_dir + "/macro.csv", g,
                    discrete_moments(out.run.field));
    io::write_file(*out_dir + "/margins.json",
                   margins_json(cfg, out, regime, g).dump(2) + "\n");
    if (cfg.snapshot_every > 0)
      write_snapshot(*out_dir + "/snap_final.bin", out.run.field, cfg.gamma);
  }
  return out;
}

LimitStudyResult run_limit_study(const ExperimentConfig& cfg,
                                 const std::vector<double>& eps_list,
                                 const std::optional<std::string>& out_dir) {
  if (eps_list.empty())
    throw Error(ErrorCode::BadBounds, "limit study needs at least one eps");
  const PhaseGrid g = grid_of(cfg);
  const GammaRegime regime = regime_of(cfg);
  if (cfg.profile() == ICProfile::Riemann)
    throw Error(ErrorCode::ValidationError,
                "the riemann profile is for the Euler reference solver only; "
                "the limit study needs a smooth kinetic-compatible profile");

  // Reference: Euler launched once from the clean macroscopic profile, plus a
  // double-resolution run for the discretization floor.
  const EulerRunResult ref =
      run_euler(initial_euler_profile(cfg), regime, cfg.T);
  const EulerRunResult ref_fine =
      run_euler(initial_euler_profile(cfg, 2 * cfg.Nx), regime, cfg.T);

  // Shock heuristic: refuse when velocity slopes steepen far beyond both the
  // initial slope and the largest smooth-wave slope scale (2 pi / L) |u|.
  {
    const double scale =
        std::max({ref.max_slope_initial,
                  2.0 * M_PI / cfg.L * ref.u_max_peak, 1e-8});
    if (ref.max_slope_peak > 10.0 * scale) {
      std::ostringstream os;
      os << "the Euler reference steepens into a shock (max |du/dx| grew from "
         << ref.max_slope_initial << " to " << ref.max_slope_peak
         << "); the hydrodynamic-limit comparison assumes a smooth solution";
      throw Error(ErrorCode::ValidationError, os.str());
    }
  }

  // Floor: coarsen the fine Euler solution by cell averaging and measure the
  // same distance the kinetic runs are measured with.
  LimitStudyResult out;
  {
    MacroFieldSet coarse;
    coarse.d = cfg.d;
    const auto n = static_cast<std::size_t>(g.nxc);
    coarse.rho.resize(n);
    coarse.mom_x.resize(n);
    if (cfg.d == 2) coarse.mom_y.resize(n);
    coarse.energy2.assign(n, 0.0);
    const EulerState& fs = ref_fine.state;
    if (cfg.d == 1) {
      for (int i = 0; i < g.Nx; ++i) {
        coarse.rho[static_cast<std::size_t>(i)] =
            0.5 * (fs.rho[static_cast<std::size_t>(2 * i)] +
                   fs.rho[static_cast<std::size_t>(2 * i + 1)]);
        coarse.mom_x[static_cast<std::size_t>(i)] =
            0.5 * (fs.mx[static_cast<std::size_t>(2 * i)] +
                   fs.mx[static_cast<std::size_t>(2 * i + 1)]);
      }
    } else {
      const int n2 = fs.Nx;
      for (int iy = 0; iy < g.Nx; ++iy)
        for (int ix = 0; ix < g.Nx; ++ix) {
          double sr = 0.0, sx = 0.0, sy = 0.0;
          for (int oy = 0; oy < 2; ++oy)
            for (int ox = 0; ox < 2; ++ox) {
              const std::size_t c = static_cast<std::size_t>(
                  (2 * iy + oy) * n2 + (2 * ix + ox));
              sr += fs.rho[c];
              sx += fs.mx[c];
              sy += fs.my[c];
            }
          const std::size_t c = static_cast<std::size_t>(iy * g.Nx + ix);
          coarse.rho[c] = 0.25 * sr;
          coarse.mom_x[c] = 0.25 * sx;
          coarse.mom_y[c] = 0.25 * sy;
        }
    }
    out.floor = macro_distance(coarse, g, ref.state);
  }

  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    // Single scaling parameter: the initial-data regularization shrinks with
    // the relaxation time, so the prepared data converge to the profile.
    ExperimentConfig cfg_eps = cfg;
    cfg_eps.relax_eps = eps_list[i];
    cfg_eps.reg_eps = eps_list[i];
    const DistributionField f0 = initial_kinetic(cfg_eps);
    SolverConfig scfg = cfg_eps.solver();
    const RunResult run = run_splitting(f0, regime, scfg);
    const MacroDistance dist =
        macro_distance(discrete_moments(run.field), g, ref.state);
    LimitRow row;
    row.eps = eps_list[i];
    row.l1_rho = dist.l1_rho;
    row.l1_momentum = dist.l1_momentum;
    row.order_rho = std::numeric_limits<double>::quiet_NaN();
    row.order_momentum = std::numeric_limits<double>::quiet_NaN();
    if (i > 0) {
      const LimitRow& prev = out.rows.back();
      const double le = std::log(prev.eps / row.eps);
      if (le != 0.0 && prev.l1_rho > 0.0 && row.l1_rho > 0.0)
        row.order_rho = std::log(prev.l1_rho / row.l1_rho) / le;
      if (le != 0.0 && prev.l1_momentum > 0.0 && row.l1_momentum > 0.0)
        row.order_momentum =
            std::log(prev.l1_momentum / row.l1_momentum) / le;
    }
    out.rows.push_back(row);
  }

  {
    const bool with_orders = out.rows.size() >= 2;
    io::Csv csv(with_orders ? "eps,l1_rho,l1_momentum,order_rho,order_momentum"
                            : "eps,l1_rho,l1_momentum");
    for (const LimitRow& r : out.rows) {
      if (with_orders)
        csv.row({r.eps, r.l1_rho, r.l1_momentum, r.order_rho, r.order_momentum});
      else
        csv.row({r.eps, r.l1_rho, r.l1_momentum});
    }
    out.csv_text = csv.text();
  }

  if (out_dir) {
    io::ensure_dir(*out_dir);
    io::write_file(*out_dir + "/limit_study.csv", out.csv_text);
    write_euler_csv(*out_dir + "/euler.csv", ref);
    nlohmann::json j;
    j["floor_l1_rho"] = out.floor.l1_rho;
    j["floor_l1_momentum"] = out.floor.l1_momentum;
    j["euler_max_slope_initial"] = ref.max_slope_initial;
    j["euler_max_slope_peak"] = ref.max_slope_peak;
    io::write_file(*out_dir + "/limit_floor.json", j.dump(2) + "\n");
  }
  return out;
}

}  // namespace bgk
