// SPDX-License-Identifier: MIT
//
// Experiment configuration: flat "key = value" files, BGK_* environment
// overrides, and a collect-everything validation pass that rejects unknown
// keys and reports all violations at once.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bgk/errors.hpp"
#include "bgk/solver.hpp"

namespace bgk {

enum class ICProfile { Equilibrium, SineDensity, TwoBump, Riemann };

struct ExperimentConfig {
  // discretization
  int d = 1;
  double gamma = 3.0;
  double L = 1.0;
  int Nx = 64;
  double Vmax = 2.5;
  int Nv = 64;

  // time stepping; dt = 0 selects 0.5 * dx / Vmax at finalize time
  double dt = 0.0;
  double T = 0.1;

  // physics / scheme
  double reg_eps = 0.2;
  double relax_eps = 1.0;
  double picard_tol = 1e-8;
  int picard_max_iter = 50;
  std::string scheme = "splitting";     // splitting | picard
  std::string splitting = "lie";        // lie | strang
  double q = 0.0;                       // 0 selects d + 2

  // initial condition
  std::string ic = "equilibrium";  // equilibrium | sine-density | two-bump | riemann
  double rho0 = 1.0;
  std::vector<double> u0 = {0.0};
  double amp = 0.2;
  double bump_sep = 1.0;
  double rhoL = 1.0, uL = 0.0, rhoR = 0.5, uR = 0.0;

  // diagnostics / output
  double tol_c1 = 1.0;
  double tol_c2 = 1.0;
  std::uint64_t seed = 12345;
  std::string out_dir = "out";
  int snapshot_every = 0;  // 0 disables snapshots
  int csv_every = 1;

  // verify / survey parameters (negative survey_c0 = branch default)
  int samples = 10000;
  double survey_c0 = -1.0;
  double survey_c1 = 2.0;
  double survey_c2 = 1.0;

  // limit study
  std::string eps_list = "0.2,0.1,0.05";

  ICProfile profile() const;
  SolverConfig solver() const;
  std::vector<double> parsed_eps_list() const;
};

/// Parses config text.  Unknown keys, malformed lines, and unparseable
/// values are all collected; if any exist a ConfigError(ParseError) carrying
/// the full list is thrown.  A missing '=' or duplicate key is a parse
/// violation, comments start with '#'.
ExperimentConfig parse_config_text(const std::string& text);

/// parse_config_text on a file, then environment overrides: for every known
/// key K, BGK_<K uppercased> replaces the file value.
ExperimentConfig load_config(const std::string& path);

/// Full validation of every module precondition reachable from the config:
/// admissible gamma, grid sanity, the transport CFL bound dt <= dx/Vmax,
/// mollifier resolvability (eps in (0,1], eps >= 2dx, eps >= 2dv), q > d,
/// IC parameter sanity, and the velocity-box support pre-check for the
/// configured initial data (support radius + |u| + reg_eps <= Vmax, so a
/// too-small box surfaces as SupportOverflow at validation, not mid-run).
/// Returns all violations; empty means valid.
std::vector<Violation> validate_config(const ExperimentConfig& cfg);

/// validate_config + finalization of auto values (dt, q).  Throws
/// ConfigError(ValidationError) when validation fails, except that a failed
/// support pre-check raises ConfigError(SupportOverflow) so callers can tell
/// "box too small" apart from other configuration mistakes.
ExperimentConfig finalize_config(ExperimentConfig cfg);

}  // namespace bgk
