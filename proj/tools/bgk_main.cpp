// SPDX-License-Identifier: MIT
//
// bgk: simulate | euler | limit-study | verify {moments|lipschitz|entropy|
// interpolation}.  Every failure path emits a one-line JSON error record on
// stderr; configuration problems exit 2, runtime failures exit 1.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bgk/diagnostics.hpp"
#include "bgk/experiment.hpp"
#include "bgk/io.hpp"
#include "bgk/verify.hpp"

namespace {

using bgk::ExperimentConfig;

void print_error_record(const std::string& code, const std::string& message,
                        const std::vector<bgk::Violation>* violations) {
  nlohmann::json j;
  j["error"] = code;
  j["message"] = message;
  if (violations) {
    nlohmann::json arr = nlohmann::json::array();
    for (const bgk::Violation& v : *violations)
      arr.push_back({{"key", v.key}, {"message", v.message}});
    j["violations"] = arr;
  }
  std::cerr << j.dump() << "\n";
}

int cmd_simulate(const ExperimentConfig& cfg) {
  const bgk::SimulateOutcome out = bgk::run_simulate(cfg, cfg.out_dir);
  const bgk::RunReport& rep = out.run.report;
  const bgk::StepRecord& first = rep.steps.front();
  const bgk::StepRecord& last = rep.steps.back();
  const double tol = bgk::margin_tol(rep.dv, rep.dt, cfg.tol_c1, cfg.tol_c2);
  std::printf("simulate: %zu steps to t = %.6g (dt = %.6g)\n",
              rep.steps.size() - 1, last.t, rep.dt);
  std::printf("  mass drift      %.3e\n", std::fabs(last.mass - first.mass));
  std::printf("  mom_x drift     %.3e\n", std::fabs(last.mom_x - first.mom_x));
  if (cfg.d == 2)
    std::printf("  mom_y drift     %.3e\n", std::fabs(last.mom_y - first.mom_y));
  std::printf("  entropy margin  %.3e (plain) %.3e (reg), tol %.3e\n",
              out.entropy.plain, out.entropy.reg, tol);
  std::printf("  energy margin   %.3e (mono) %.3e (plain) %.3e (reg)\n",
              out.energy.monotone, out.energy.plain, out.energy.reg);
  std::printf("  minimization    %.3e\n", out.minimization_margin);
  std::printf("  x-moment growth %s (worst %.3e)\n",
              out.growth.satisfied ? "within envelope" : "VIOLATED",
              out.growth.max_violation);
  std::printf("  wrote %s/run.csv, macro.csv, margins.json\n",
              cfg.out_dir.c_str());
  return 0;
}

int cmd_euler(const ExperimentConfig& cfg) {
  const bgk::GammaRegime regime = bgk::regime_of(cfg);
  const bgk::EulerState s0 = bgk::initial_euler_profile(cfg);
  const bgk::EulerRunResult run = bgk::run_euler(s0, regime, cfg.T);
  bgk::io::ensure_dir(cfg.out_dir);
  bgk::write_euler_csv(cfg.out_dir + "/euler.csv", run);
  {
    bgk::io::Csv csv(cfg.d == 2 ? "x,y,rho,mom_x,mom_y" : "x,rho,mom_x");
    const bgk::EulerState& s = run.state;
    const double dx = s.dx();
    for (int c = 0; c < s.cells(); ++c) {
      if (cfg.d == 1) {
        csv.row({(c + 0.5) * dx, s.rho[static_cast<std::size_t>(c)],
                 s.mx[static_cast<std::size_t>(c)]});
      } else {
        csv.row({(c % s.Nx + 0.5) * dx, (c / s.Nx + 0.5) * dx,
                 s.rho[static_cast<std::size_t>(c)],
                 s.mx[static_cast<std::size_t>(c)],
                 s.my[static_cast<std::size_t>(c)]});
      }
    }
    csv.save(cfg.out_dir + "/euler_final.csv");
  }
  const bgk::EulerStepRecord& a = run.steps.front();
  const bgk::EulerStepRecord& b = run.steps.back();
  std::printf("euler: %zu steps to t = %.6g\n", run.steps.size() - 1, b.t);
  std::printf("  mass drift  %.3e, eta change %.3e\n",
              std::fabs(b.mass - a.mass), b.eta_total - a.eta_total);
  std::printf("  max |du/dx| %.4g initial, %.4g peak\n",
              run.max_slope_initial, run.max_slope_peak);
  std::printf("  wrote %s/euler.csv, euler_final.csv\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_limit_study(const ExperimentConfig& cfg) {
  const bgk::LimitStudyResult res =
      bgk::run_limit_study(cfg, cfg.parsed_eps_list(), cfg.out_dir);
  std::printf("%s", res.csv_text.c_str());
  std::printf("# discretization floor: l1_rho %.6e, l1_momentum %.6e\n",
              res.floor.l1_rho, res.floor.l1_momentum);
  std::printf("# wrote %s/limit_study.csv, euler.csv, limit_floor.json\n",
              cfg.out_dir.c_str());
  return 0;
}

int verify_moments(const ExperimentConfig& cfg) {
  const bgk::GammaRegime regime = bgk::regime_of(cfg);
  const bgk::MomentStudyResult res =
      bgk::moment_order_study(regime, cfg.samples, cfg.seed, {64, 128, 256});
  bgk::io::ensure_dir(cfg.out_dir);
  bgk::io::write_file(cfg.out_dir + "/moments_verify.csv", res.csv_text);
  const double want = regime.branch == bgk::Branch::Indicator ? 1.0 : 2.0;
  const double slack = 0.05 * want;
  const double worst =
      std::min({res.order_m0, res.order_m1, res.order_m2});
  std::printf("verify moments: orders m0 %.3f, m1 %.3f, m2 %.3f (want >= %g)\n",
              res.order_m0, res.order_m1, res.order_m2, want);
  if (worst < want - slack) {
    std::printf("[FAIL] worst order %.3f below %g\n", worst, want - slack);
    return 1;
  }
  std::printf("[PASS] moment identity refinement orders\n");
  return 0;
}

int verify_lipschitz(const ExperimentConfig& cfg) {
  const bgk::GammaRegime regime = bgk::regime_of(cfg);
  bgk::SurveyParams params;
  params.rho_lo = cfg.survey_c0 >= 0.0
                      ? cfg.survey_c0
                      : (regime.branch == bgk::Branch::Indicator ? 0.0 : 0.2);
  params.rho_hi = cfg.survey_c1;
  params.u_max = cfg.survey_c2;
  params.samples = cfg.samples;
  params.seed = cfg.seed;
  params.quad.vmax =
      bgk::support_radius(regime, params.rho_hi) + params.u_max + 0.5;
  params.quad.nv = 64;

  std::vector<bgk::SurveySample> trace;
  const bgk::SurveyStability stab =
      bgk::survey_stability(regime, params, &trace);

  bgk::io::ensure_dir(cfg.out_dir);
  bgk::io::Csv csv("sample_index,rho_f,rho_g,du,case_id,distance,ratio");
  for (const bgk::SurveySample& s : trace)
    csv.row({static_cast<double>(s.index), s.rho_f, s.rho_g, s.du,
             static_cast<double>(static_cast<int>(s.case_id)), s.distance,
             s.ratio});
  csv.save(cfg.out_dir + "/lipschitz_verify.csv");

  std::printf(
      "verify lipschitz: sup ratio %.6g at %d samples -> %.6g at %d "
      "(change %.2f%%)\n",
      stab.sup_at_half, params.samples, stab.sup_at_full, 2 * params.samples,
      100.0 * stab.rel_change);
  std::printf("  case counts D1 %d, D2 %d, D3 %d, D4 %d; skipped %d\n",
              stab.full.case_counts[0], stab.full.case_counts[1],
              stab.full.case_counts[2], stab.full.case_counts[3],
              stab.full.skipped);
  if (!std::isfinite(stab.sup_at_full) || stab.full.evaluated == 0 ||
      stab.rel_change > 0.10) {
    std::printf("[FAIL] sup ratio unstable or not finite\n");
    return 1;
  }
  std::printf("[PASS] bounded Lipschitz ratio\n");
  return 0;
}

int verify_entropy(const ExperimentConfig& cfg) {
  const bgk::SimulateOutcome out = bgk::run_simulate(cfg, cfg.out_dir);
  const bgk::GammaRegime regime = bgk::regime_of(cfg);
  const double tol = bgk::margin_tol(out.run.report.dv, out.run.report.dt,
                                     cfg.tol_c1, cfg.tol_c2);
  struct Entry {
    const char* name;
    double value;
    bool checked;
  };
  const bool indicator = regime.branch == bgk::Branch::Indicator;
  const Entry entries[] = {
      {"entropy_plain", out.entropy.plain, true},
      {"entropy_reg", out.entropy.reg, true},
      {"energy_plain", out.energy.plain, true},
      {"energy_reg", out.energy.reg, true},
      {"energy_monotone", out.energy.monotone, indicator},
      {"minimization", out.minimization_margin, true},
      {"xmom2", out.growth.max_violation, true},
  };
  bgk::io::ensure_dir(cfg.out_dir);
  bgk::io::Csv csv("margin,value,tol,checked,ok");
  const Entry* worst = nullptr;
  bool ok = true;
  for (const Entry& e : entries) {
    const bool pass = !e.checked || e.value <= tol;
    csv.raw_row({e.name, bgk::io::fmt(e.value), bgk::io::fmt(tol),
                 e.checked ? "1" : "0", pass ? "1" : "0"});
    if (e.checked && (!worst || e.value > worst->value)) worst = &e;
    ok = ok && pass;
    std::printf("  %-16s %+.6e (tol %.3e)%s%s\n", e.name, e.value, tol,
                e.checked ? "" : " [recorded only]",
                pass ? "" : "  <-- VIOLATED");
  }
  csv.save(cfg.out_dir + "/entropy_verify.csv");
  if (!ok) {
    std::printf("[FAIL] worst margin: %s = %.6e > tol %.3e\n", worst->name,
                worst->value, tol);
    return 1;
  }
  std::printf("[PASS] entropy/energy margins within tol %.3e\n", tol);
  return 0;
}

int verify_interpolation(const ExperimentConfig& cfg) {
  const bgk::DistributionField f0 = bgk::initial_kinetic(cfg);
  bgk::SimulateOutcome out = bgk::run_simulate(cfg, std::nullopt);

  bgk::io::ensure_dir(cfg.out_dir);
  bgk::io::Csv csv("stage,lambda,ratio_rho,ratio_mom");
  bool ok = true;
  double worst_dev = 0.0;
  const double lambdas[] = {0.5, 1.0, 2.0};
  const bgk::DistributionField* fields[] = {&f0, &out.run.field};
  for (int stage = 0; stage < 2; ++stage) {
    bgk::InterpolationRatios base;
    for (double lam : lambdas) {
      bgk::DistributionField scaled = *fields[stage];
      for (double& v : scaled.f) v *= lam;
      const bgk::InterpolationRatios r = bgk::check_interpolation(scaled);
      csv.row({static_cast<double>(stage), lam, r.ratio_rho, r.ratio_mom});
      if (lam == 0.5) {
        base = r;
      } else {
        // Homogeneity: the ratios are scale-invariant in f.
        const double dev =
            std::max(std::fabs(r.ratio_rho - base.ratio_rho) / base.ratio_rho,
                     std::fabs(r.ratio_mom - base.ratio_mom) / base.ratio_mom);
        worst_dev = std::max(worst_dev, dev);
        ok = ok && dev <= 1e-12;
      }
      ok = ok && std::isfinite(r.ratio_rho) && std::isfinite(r.ratio_mom);
      std::printf("  stage %s lambda %.1f: ratio_rho %.6f, ratio_mom %.6f\n",
                  stage == 0 ? "initial" : "final  ", lam, r.ratio_rho,
                  r.ratio_mom);
    }
  }
  csv.save(cfg.out_dir + "/interpolation_verify.csv");
  if (!ok) {
    std::printf("[FAIL] scale invariance broken (worst relative deviation "
                "%.3e > 1e-12) or ratio not finite\n", worst_dev);
    return 1;
  }
  std::printf("[PASS] interpolation ratios finite and scale-invariant\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barotropic BGK kinetic solver and verification toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::string eps_override;
  std::uint64_t seed_override = 0;
  app.add_option("--config", config_path, "path to a key = value config file")
      ->required();
  auto* out_opt =
      app.add_option("--out", out_override, "output directory override");
  auto* seed_opt =
      app.add_option("--seed", seed_override, "RNG seed override");
  auto* eps_opt = app.add_option("--eps-list", eps_override,
                                 "relax_eps list override, e.g. 0.2,0.1,0.05");

  CLI::App* sim = app.add_subcommand("simulate", "run the kinetic solver");
  CLI::App* eul =
      app.add_subcommand("euler", "run the finite-volume Euler reference");
  CLI::App* lim = app.add_subcommand(
      "limit-study", "kinetic-to-Euler distance sweep over relax_eps");
  CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  ver->add_option("suite", suite, "moments | lipschitz | entropy | interpolation")
      ->required()
      ->check(CLI::IsMember({"moments", "lipschitz", "entropy", "interpolation"}));

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = bgk::load_config(config_path);
    if (out_opt->count() > 0) cfg.out_dir = out_override;
    if (seed_opt->count() > 0) cfg.seed = seed_override;
    if (eps_opt->count() > 0) cfg.eps_list = eps_override;
    cfg = bgk::finalize_config(cfg);

    if (sim->parsed()) return cmd_simulate(cfg);
    if (eul->parsed()) return cmd_euler(cfg);
    if (lim->parsed()) return cmd_limit_study(cfg);
    if (ver->parsed()) {
      if (suite == "moments") return verify_moments(cfg);
      if (suite == "lipschitz") return verify_lipschitz(cfg);
      if (suite == "entropy") return verify_entropy(cfg);
      return verify_interpolation(cfg);
    }
    return 0;
  } catch (const bgk::ConfigError& e) {
    print_error_record(bgk::error_code_name(e.code()), e.what(),
                       &e.violations());
    return 2;
  } catch (const bgk::Error& e) {
    print_error_record(bgk::error_code_name(e.code()), e.what(), nullptr);
    return e.code() == bgk::ErrorCode::ParseError ||
                   e.code() == bgk::ErrorCode::ValidationError ||
                   e.code() == bgk::ErrorCode::SupportOverflow
               ? 2
               : 1;
  } catch (const std::exception& e) {
    print_error_record("Unexpected", e.what(), nullptr);
    return 1;
  }
}
