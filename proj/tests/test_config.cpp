// SPDX-License-Identifier: MIT
//
// Config parsing (collect-all violations), environment overrides, validation
// of every reachable module precondition, and finalization of auto values.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bgk/config.hpp"
#include "bgk/errors.hpp"
#include "bgk/experiment.hpp"
#include "doctest.h"

using bgk::ConfigError;
using bgk::Error;
using bgk::ErrorCode;
using bgk::ExperimentConfig;
using bgk::Violation;

namespace {

bool has_key(const std::vector<Violation>& vs, const std::string& key) {
  for (const Violation& v : vs)
    if (v.key == key) return true;
  return false;
}

std::string write_temp_config(const std::string& text) {
  const std::string path =
      (std::filesystem::temp_directory_path() / "bgk_config_test.cfg").string();
  std::ofstream os(path);
  os << text;
  return path;
}

struct EnvGuard {
  std::string name;
  EnvGuard(const std::string& n, const std::string& value) : name(n) {
    ::setenv(n.c_str(), value.c_str(), 1);
  }
  ~EnvGuard() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("defaults parse, validate, and finalize") {
  const ExperimentConfig cfg = bgk::parse_config_text("");
  CHECK(cfg.d == 1);
  CHECK(cfg.gamma == 3.0);
  CHECK(cfg.Nx == 64);
  CHECK(cfg.reg_eps == 0.2);
  CHECK(bgk::validate_config(cfg).empty());

  const ExperimentConfig fin = bgk::finalize_config(cfg);
  // dt auto = 0.5 dx / Vmax = 0.5 * (1/64) / 2.5.
  CHECK(fin.dt == doctest::Approx(0.003125).epsilon(1e-15));
  // q auto = d + 2.
  CHECK(fin.q == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("comments, whitespace, and known keys parse") {
  const ExperimentConfig cfg = bgk::parse_config_text(
      "# a comment\n"
      "\n"
      "  gamma = 1.4  \n"
      "ic = two-bump\n"
      "u0 = 0.1, -0.2\n"
      "seed = 999\n");
  CHECK(cfg.gamma == 1.4);
  CHECK(cfg.ic == "two-bump");
  REQUIRE(cfg.u0.size() == 2);
  CHECK(cfg.u0[0] == 0.1);
  CHECK(cfg.u0[1] == -0.2);
  CHECK(cfg.seed == 999);
}

TEST_CASE("parse violations are collected, not thrown one by one") {
  try {
    bgk::parse_config_text(
        "nonsense = 1\n"
        "gamma\n"           // missing '='
        "Nx = notanint\n"
        "T = 0.1\n"
        "T = 0.2\n");       // duplicate
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.violations().size() == 4);
    CHECK(has_key(e.violations(), "nonsense"));
    CHECK(has_key(e.violations(), "line 2"));
    CHECK(has_key(e.violations(), "Nx"));
    CHECK(has_key(e.violations(), "T"));
  }
}

TEST_CASE("validation collects every violation at once") {
  ExperimentConfig cfg;
  cfg.gamma = 0.5;   // inadmissible everywhere
  cfg.Nx = 7;        // odd
  cfg.Vmax = -1.0;   // nonpositive
  cfg.amp = 1.5;     // |amp| >= 1
  cfg.csv_every = 0;
  const std::vector<Violation> vs = bgk::validate_config(cfg);
  CHECK(vs.size() >= 5);
  CHECK(has_key(vs, "gamma"));
  CHECK(has_key(vs, "Nx"));
  CHECK(has_key(vs, "Vmax"));
  CHECK(has_key(vs, "amp"));
  CHECK(has_key(vs, "csv_every"));
}

TEST_CASE("inadmissible exponent names the admissible set") {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.gamma = 3.0;  // only 1d admits gamma = 3
  const std::vector<Violation> vs = bgk::validate_config(cfg);
  REQUIRE(has_key(vs, "gamma"));
  bool mentions_set = false;
  for (const Violation& v : vs)
    if (v.key == "gamma" &&
        v.message.find("admissible") != std::string::npos)
      mentions_set = true;
  CHECK(mentions_set);
  try {
    bgk::finalize_config(cfg);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
  }
}

TEST_CASE("time step and mollifier resolvability are validated") {
  ExperimentConfig cfg;
  cfg.dt = 0.05;  // dx/Vmax = (1/64)/2.5 = 0.00625
  std::vector<Violation> vs = bgk::validate_config(cfg);
  CHECK(has_key(vs, "dt"));

  cfg = ExperimentConfig{};
  cfg.reg_eps = 0.05;  // 2 dv = 0.15625 on the default grid
  vs = bgk::validate_config(cfg);
  REQUIRE(has_key(vs, "reg_eps"));
  bool unresolvable = false;
  for (const Violation& v : vs)
    if (v.key == "reg_eps" &&
        v.message.find("unresolvable") != std::string::npos)
      unresolvable = true;
  CHECK(unresolvable);

  cfg = ExperimentConfig{};
  cfg.q = 1.0;  // must exceed d = 1
  vs = bgk::validate_config(cfg);
  CHECK(has_key(vs, "q"));

  cfg = ExperimentConfig{};
  cfg.u0 = {0.1, 0.2};  // d = 1 wants one entry (or d)
  vs = bgk::validate_config(cfg);
  CHECK(has_key(vs, "u0"));
}

TEST_CASE("a velocity box too small for the initial data is SupportOverflow") {
  ExperimentConfig cfg;
  cfg.u0 = {2.4};  // support radius 0.5 + |u| 2.4 + reg_eps 0.2 > Vmax 2.5
  const std::vector<Violation> vs = bgk::validate_config(cfg);
  REQUIRE(has_key(vs, "Vmax"));
  try {
    bgk::finalize_config(cfg);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.code() == ErrorCode::SupportOverflow);
    CHECK(std::string(e.what()).find("support overflow") != std::string::npos);
  }
}

TEST_CASE("eps_list parses and is validated") {
  ExperimentConfig cfg = bgk::parse_config_text("eps_list = 0.4, 0.2 ,0.1\n");
  const std::vector<double> eps = cfg.parsed_eps_list();
  REQUIRE(eps.size() == 3);
  CHECK(eps[0] == 0.4);
  CHECK(eps[1] == 0.2);
  CHECK(eps[2] == 0.1);

  cfg.eps_list = "0.2,zero";
  CHECK_THROWS_AS(cfg.parsed_eps_list(), Error);
  CHECK(has_key(bgk::validate_config(cfg), "eps_list"));

  cfg.eps_list = "0.2,-0.1";
  CHECK(has_key(bgk::validate_config(cfg), "eps_list"));
}

TEST_CASE("profile and solver mappings") {
  ExperimentConfig cfg;
  cfg.ic = "sine-density";
  CHECK(cfg.profile() == bgk::ICProfile::SineDensity);
  cfg.ic = "riemann";
  CHECK(cfg.profile() == bgk::ICProfile::Riemann);
  cfg.ic = "unknown-thing";
  CHECK_THROWS_AS(cfg.profile(), Error);

  cfg = ExperimentConfig{};
  cfg.scheme = "picard";
  cfg.splitting = "strang";
  cfg.dt = 0.005;
  cfg.T = 0.25;
  const bgk::SolverConfig s = cfg.solver();
  CHECK(s.scheme == bgk::Scheme::PicardMild);
  CHECK(s.splitting == bgk::SplitOrder::Strang);
  CHECK(s.dt == 0.005);
  CHECK(s.T == 0.25);
  CHECK(s.reg_eps == cfg.reg_eps);
}

TEST_CASE("environment variables override file values") {
  const std::string path = write_temp_config(
      "gamma = 3.0\n"
      "seed = 1\n"
      "ic = equilibrium\n");
  {
    EnvGuard g1("BGK_GAMMA", "2.5");
    EnvGuard g2("BGK_SEED", "424242");
    EnvGuard g3("BGK_IC", "two-bump");
    const ExperimentConfig cfg = bgk::load_config(path);
    CHECK(cfg.gamma == 2.5);
    CHECK(cfg.seed == 424242);
    CHECK(cfg.ic == "two-bump");
  }
  // Without the overrides the file wins again.
  const ExperimentConfig plain = bgk::load_config(path);
  CHECK(plain.gamma == 3.0);
  CHECK(plain.seed == 1);
  std::filesystem::remove(path);
}

TEST_CASE("malformed environment overrides carry the variable name") {
  const std::string path = write_temp_config("gamma = 3.0\n");
  EnvGuard g("BGK_NX", "five");
  try {
    bgk::load_config(path);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(has_key(e.violations(), "BGK_NX"));
  }
  std::filesystem::remove(path);
}

TEST_CASE("the riemann profile is for the Euler reference only") {
  ExperimentConfig cfg;
  cfg.ic = "riemann";
  try {
    bgk::initial_kinetic_raw(bgk::finalize_config(cfg));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(std::string(e.what()).find("riemann") != std::string::npos);
  }
}
