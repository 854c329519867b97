// SPDX-License-Identifier: MIT
//
// Drivers shared by the CLI and the acceptance suite, so both run the exact
// same code paths (and therefore produce identical CSV bytes).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bgk/config.hpp"
#include "bgk/diagnostics.hpp"
#include "bgk/euler.hpp"
#include "bgk/solver.hpp"

namespace bgk {

PhaseGrid grid_of(const ExperimentConfig& cfg);
GammaRegime regime_of(const ExperimentConfig& cfg);

/// Raw (unregularized) kinetic initial datum for the configured profile.
/// riemann is refused here (Error(ValidationError)): it is Euler-only.
DistributionField initial_kinetic_raw(const ExperimentConfig& cfg);

/// Regularized initial datum: regularize_initial(raw, reg_eps, q).
DistributionField initial_kinetic(const ExperimentConfig& cfg);

/// Euler initial state straight from the macroscopic profile, at an optional
/// resolution override (used for the double-resolution floor estimate).
EulerState initial_euler_profile(const ExperimentConfig& cfg,
                                 std::optional<int> nx_override = {});

/// Euler initial state holding the discrete moments of a kinetic field.
EulerState euler_from_kinetic(const DistributionField& field);

struct SimulateOutcome {
  RunResult run;
  EntropyMargins entropy;
  EnergyMargins energy;
  double minimization_margin = 0.0;
  MomentGrowthCertificate growth;
};

/// Full simulate pipeline: build, run, evaluate diagnostics; when out_dir is
/// given, writes run.csv, final macro.csv, margins.json, and snapshots.
SimulateOutcome run_simulate(const ExperimentConfig& cfg,
                             const std::optional<std::string>& out_dir);

struct LimitRow {
  double eps = 0.0;
  double l1_rho = 0.0;
  double l1_momentum = 0.0;
  /// log2 ratio against the previous row; NaN on the first row.
  double order_rho = 0.0;
  double order_momentum = 0.0;
};

struct LimitStudyResult {
  std::vector<LimitRow> rows;
  MacroDistance floor;  ///< Euler self-distance at doubled resolution
  std::string csv_text;
};

/// Hydrodynamic-limit study: one Euler reference started from the clean
/// macroscopic profile (plus a double-resolution run for the discretization
/// floor), then one kinetic run per eps.  Each kinetic run uses the single
/// scaling parameter of the fluid limit: relax_eps AND the initial-data
/// regularization both equal eps, so the preparation error (mollification
/// bias, strict-positivity floor) vanishes with eps instead of polluting the
/// order fit.  Distances are reported raw; the floor is alongside so callers
/// can subtract it when fitting orders.  Refuses configurations whose Euler
/// run steepens into a shock (max |du/dx| growing beyond 10x its initial
/// scale).
LimitStudyResult run_limit_study(const ExperimentConfig& cfg,
                                 const std::vector<double>& eps_list,
                                 const std::optional<std::string>& out_dir);

}  // namespace bgk
