// SPDX-License-Identifier: MIT

#include "bgk/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "bgk/equilibrium.hpp"
#include "bgk/io.hpp"
#include "bgk/regime.hpp"

namespace bgk {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_double(const std::string& s, double* out) {
  try {
    std::size_t pos = 0;
    *out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, int* out) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) return false;
    *out = static_cast<int>(v);
    return static_cast<long>(*out) == v;
  } catch (...) {
    return false;
  }
}

bool parse_u64(const std::string& s, std::uint64_t* out) {
  try {
    std::size_t pos = 0;
    *out = std::stoull(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_vec(const std::string& s, std::vector<double>* out) {
  out->clear();
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    double v;
    if (!parse_double(trim(part), &v)) return false;
    out->push_back(v);
  }
  return !out->empty();
}

/// Assigns one key.  Returns an error message, or empty on success.
std::string set_key(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  auto bad = [&](const char* want) {
    return "value '" + value + "' is not a valid " + want;
  };
  if (key == "d") return parse_int(value, &cfg.d) ? "" : bad("integer");
  if (key == "gamma") return parse_double(value, &cfg.gamma) ? "" : bad("real");
  if (key == "L") return parse_double(value, &cfg.L) ? "" : bad("real");
  if (key == "Nx") return parse_int(value, &cfg.Nx) ? "" : bad("integer");
  if (key == "Vmax") return parse_double(value, &cfg.Vmax) ? "" : bad("real");
  if (key == "Nv") return parse_int(value, &cfg.Nv) ? "" : bad("integer");
  if (key == "dt") return parse_double(value, &cfg.dt) ? "" : bad("real");
  if (key == "T") return parse_double(value, &cfg.T) ? "" : bad("real");
  if (key == "reg_eps")
    return parse_double(value, &cfg.reg_eps) ? "" : bad("real");
  if (key == "relax_eps")
    return parse_double(value, &cfg.relax_eps) ? "" : bad("real");
  if (key == "picard_tol")
    return parse_double(value, &cfg.picard_tol) ? "" : bad("real");
  if (key == "picard_max_iter")
    return parse_int(value, &cfg.picard_max_iter) ? "" : bad("integer");
  if (key == "scheme") { cfg.scheme = value; return ""; }
  if (key == "splitting") { cfg.splitting = value; return ""; }
  if (key == "q") return parse_double(value, &cfg.q) ? "" : bad("real");
  if (key == "ic") { cfg.ic = value; return ""; }
  if (key == "rho0") return parse_double(value, &cfg.rho0) ? "" : bad("real");
  if (key == "u0")
    return parse_vec(value, &cfg.u0) ? "" : bad("comma-separated real list");
  if (key == "amp") return parse_double(value, &cfg.amp) ? "" : bad("real");
  if (key == "bump_sep")
    return parse_double(value, &cfg.bump_sep) ? "" : bad("real");
  if (key == "rhoL") return parse_double(value, &cfg.rhoL) ? "" : bad("real");
  if (key == "uL") return parse_double(value, &cfg.uL) ? "" : bad("real");
  if (key == "rhoR") return parse_double(value, &cfg.rhoR) ? "" : bad("real");
  if (key == "uR") return parse_double(value, &cfg.uR) ? "" : bad("real");
  if (key == "tol_c1")
    return parse_double(value, &cfg.tol_c1) ? "" : bad("real");
  if (key == "tol_c2")
    return parse_double(value, &cfg.tol_c2) ? "" : bad("real");
  if (key == "seed") return parse_u64(value, &cfg.seed) ? "" : bad("integer");
  if (key == "out_dir") { cfg.out_dir = value; return ""; }
  if (key == "snapshot_every")
    return parse_int(value, &cfg.snapshot_every) ? "" : bad("integer");
  if (key == "csv_every")
    return parse_int(value, &cfg.csv_every) ? "" : bad("integer");
  if (key == "samples")
    return parse_int(value, &cfg.samples) ? "" : bad("integer");
  if (key == "survey_c0")
    return parse_double(value, &cfg.survey_c0) ? "" : bad("real");
  if (key == "survey_c1")
    return parse_double(value, &cfg.survey_c1) ? "" : bad("real");
  if (key == "survey_c2")
    return parse_double(value, &cfg.survey_c2) ? "" : bad("real");
  if (key == "eps_list") { cfg.eps_list = value; return ""; }
  return "unknown key";
}

}  // namespace

ICProfile ExperimentConfig::profile() const {
  if (ic == "equilibrium") return ICProfile::Equilibrium;
  if (ic == "sine-density") return ICProfile::SineDensity;
  if (ic == "two-bump") return ICProfile::TwoBump;
  if (ic == "riemann") return ICProfile::Riemann;
  throw Error(ErrorCode::ValidationError, "unknown ic profile '" + ic + "'");
}

SolverConfig ExperimentConfig::solver() const {
  SolverConfig s;
  s.dt = dt;
  s.T = T;
  s.reg_eps = reg_eps;
  s.relax_eps = relax_eps;
  s.picard_tol = picard_tol;
  s.picard_max_iter = picard_max_iter;
  s.scheme = scheme == "picard" ? Scheme::PicardMild : Scheme::Splitting;
  s.splitting = splitting == "strang" ? SplitOrder::Strang : SplitOrder::Lie;
  return s;
}

std::vector<double> ExperimentConfig::parsed_eps_list() const {
  std::vector<double> out;
  if (!parse_vec(eps_list, &out))
    throw Error(ErrorCode::ParseError,
                "eps_list '" + eps_list + "' is not a comma-separated real list");
  return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::vector<Violation> violations;
  std::vector<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      violations.push_back(
          {"line " + std::to_string(lineno), "missing '=' in '" + t + "'"});
      continue;
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      violations.push_back({"line " + std::to_string(lineno), "empty key"});
      continue;
    }
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      violations.push_back({key, "duplicate key"});
      continue;
    }
    seen.push_back(key);
    const std::string err = set_key(cfg, key, value);
    if (!err.empty()) violations.push_back({key, err});
  }
  if (!violations.empty())
    throw ConfigError(ErrorCode::ParseError, violations);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg = parse_config_text(io::read_file(path));
  static const char* const keys[] = {
      "d",        "gamma",    "L",         "Nx",       "Vmax",
      "Nv",       "dt",       "T",         "reg_eps",  "relax_eps",
      "picard_tol", "picard_max_iter",     "scheme",   "splitting",
      "q",        "ic",       "rho0",      "u0",       "amp",
      "bump_sep", "rhoL",     "uL",        "rhoR",     "uR",
      "tol_c1",   "tol_c2",   "seed",      "out_dir",  "snapshot_every",
      "csv_every", "samples", "survey_c0", "survey_c1", "survey_c2",
      "eps_list"};
  std::vector<Violation> violations;
  for (const char* key : keys) {
    std::string env_name = "BGK_";
    for (const char* p = key; *p; ++p)
      env_name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    if (const char* v = std::getenv(env_name.c_str())) {
      const std::string err = set_key(cfg, key, v);
      if (!err.empty()) violations.push_back({env_name, err});
    }
  }
  if (!violations.empty())
    throw ConfigError(ErrorCode::ParseError, violations);
  return cfg;
}

std::vector<Violation> validate_config(const ExperimentConfig& cfg) {
  std::vector<Violation> v;
  auto add = [&](const std::string& key, const std::string& msg) {
    v.push_back({key, msg});
  };

  if (cfg.d != 1 && cfg.d != 2) add("d", "dimension must be 1 or 2");

  bool regime_ok = false;
  GammaRegime regime;
  if (cfg.d == 1 || cfg.d == 2) {
    try {
      regime = make_regime(cfg.d, cfg.gamma);
      regime_ok = true;
    } catch (const Error& e) {
      add("gamma", e.what());
    }
  }

  if (!(cfg.L > 0.0)) add("L", "domain length must be positive");
  if (cfg.Nx < 4 || cfg.Nx % 2 != 0)
    add("Nx", "position cells per axis must be even and at least 4");
  if (!(cfg.Vmax > 0.0)) add("Vmax", "velocity box half-width must be positive");
  if (cfg.Nv < 4 || cfg.Nv % 2 != 0)
    add("Nv", "velocity cells per axis must be even and at least 4");

  const bool grid_ok = cfg.L > 0.0 && cfg.Nx >= 4 && cfg.Vmax > 0.0 && cfg.Nv >= 4;
  const double dx = grid_ok ? cfg.L / cfg.Nx : 0.0;
  const double dv = grid_ok ? 2.0 * cfg.Vmax / cfg.Nv : 0.0;

  if (cfg.dt < 0.0) add("dt", "dt must be nonnegative (0 = auto)");
  if (grid_ok && cfg.dt > 0.0 && cfg.dt > dx / cfg.Vmax * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt = " << cfg.dt << " violates the transport bound dx/Vmax = "
       << dx / cfg.Vmax;
    add("dt", os.str());
  }
  if (cfg.T < 0.0) add("T", "T must be nonnegative");

  if (!(cfg.reg_eps > 0.0) || cfg.reg_eps > 1.0)
    add("reg_eps", "regularization scale must lie in (0, 1]");
  else if (grid_ok) {
    if (cfg.reg_eps < 2.0 * dx) {
      std::ostringstream os;
      os << "reg_eps = " << cfg.reg_eps
         << " is unresolvable: needs at least 2 dx = " << 2.0 * dx;
      add("reg_eps", os.str());
    }
    if (cfg.reg_eps < 2.0 * dv) {
      std::ostringstream os;
      os << "reg_eps = " << cfg.reg_eps
         << " is unresolvable: needs at least 2 dv = " << 2.0 * dv;
      add("reg_eps", os.str());
    }
  }

  if (!(cfg.relax_eps > 0.0)) add("relax_eps", "relax_eps must be positive");
  if (!(cfg.picard_tol > 0.0)) add("picard_tol", "picard_tol must be positive");
  if (cfg.picard_max_iter < 1)
    add("picard_max_iter", "picard_max_iter must be at least 1");
  if (cfg.scheme != "splitting" && cfg.scheme != "picard")
    add("scheme", "scheme must be 'splitting' or 'picard'");
  if (cfg.splitting != "lie" && cfg.splitting != "strang")
    add("splitting", "splitting must be 'lie' or 'strang'");
  if (cfg.q != 0.0 && cfg.q <= cfg.d)
    add("q", "floor decay exponent must exceed the dimension (0 = auto)");

  bool ic_ok = true;
  if (cfg.ic != "equilibrium" && cfg.ic != "sine-density" &&
      cfg.ic != "two-bump" && cfg.ic != "riemann") {
    add("ic", "unknown initial condition profile '" + cfg.ic + "'");
    ic_ok = false;
  }
  if (!(cfg.rho0 > 0.0)) add("rho0", "reference density must be positive");
  if (std::fabs(cfg.amp) >= 1.0)
    add("amp", "modulation amplitude must satisfy |amp| < 1");
  if (cfg.bump_sep < 0.0) add("bump_sep", "bump separation must be nonnegative");
  if (cfg.ic == "riemann" && (!(cfg.rhoL > 0.0) || !(cfg.rhoR > 0.0)))
    add("rhoL", "riemann densities must be positive");
  if (static_cast<int>(cfg.u0.size()) != 1 &&
      static_cast<int>(cfg.u0.size()) != cfg.d)
    add("u0", "u0 must have 1 entry (broadcast) or d entries");

  if (cfg.tol_c1 < 0.0) add("tol_c1", "tolerance coefficient must be nonnegative");
  if (cfg.tol_c2 < 0.0) add("tol_c2", "tolerance coefficient must be nonnegative");
  if (cfg.snapshot_every < 0) add("snapshot_every", "must be nonnegative");
  if (cfg.csv_every < 1) add("csv_every", "must be at least 1");
  if (cfg.samples < 1) add("samples", "must be at least 1");
  if (cfg.survey_c0 >= 0.0 && !(cfg.survey_c1 > cfg.survey_c0))
    add("survey_c1", "density upper bound must exceed the lower bound");
  if (!(cfg.survey_c2 > 0.0)) add("survey_c2", "velocity bound must be positive");
  try {
    for (double e : cfg.parsed_eps_list())
      if (!(e > 0.0)) add("eps_list", "entries must be positive");
  } catch (const Error& e) {
    add("eps_list", e.what());
  }

  // Support pre-check: the velocity box must hold the regularized initial
  // data, support radius + bulk speed + reg_eps per axis.
  if (regime_ok && grid_ok && ic_ok && cfg.ic != "riemann" && cfg.rho0 > 0.0) {
    double rho_max = cfg.rho0;
    if (cfg.ic == "sine-density" || cfg.ic == "two-bump")
      rho_max = cfg.rho0 * (1.0 + std::fabs(cfg.amp));
    const double r = support_radius(regime, rho_max);
    for (int k = 0; k < cfg.d; ++k) {
      const double uk =
          cfg.u0.size() == 1 ? (k == 0 ? cfg.u0[0] : 0.0)
                             : cfg.u0[static_cast<std::size_t>(k)];
      double need = std::fabs(uk) + r + cfg.reg_eps;
      if (cfg.ic == "two-bump" && k == 0) need += 0.5 * cfg.bump_sep;
      if (need > cfg.Vmax) {
        std::ostringstream os;
        os << "support overflow: axis " << k << " needs Vmax >= " << need
           << " (support radius " << r << ", bulk speed " << std::fabs(uk)
           << ", reg_eps " << cfg.reg_eps << ") but Vmax = " << cfg.Vmax;
        add("Vmax", os.str());
      }
    }
  }
  return v;
}

ExperimentConfig finalize_config(ExperimentConfig cfg) {
  if (cfg.dt == 0.0 && cfg.L > 0.0 && cfg.Nx > 0 && cfg.Vmax > 0.0)
    cfg.dt = 0.5 * (cfg.L / cfg.Nx) / cfg.Vmax;
  if (cfg.q == 0.0) cfg.q = cfg.d + 2.0;
  const std::vector<Violation> v = validate_config(cfg);
  if (!v.empty()) {
    const bool support = std::any_of(v.begin(), v.end(), [](const Violation& w) {
      return w.message.rfind("support overflow", 0) == 0;
    });
    throw ConfigError(support ? ErrorCode::SupportOverflow
                              : ErrorCode::ValidationError,
                      v);
  }
  return cfg;
}

}  // namespace bgk
