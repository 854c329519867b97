// SPDX-License-Identifier: MIT
//
// Error taxonomy shared by every module.  Each failure carries a stable
// machine-readable code next to the human-readable message so the CLI can
// emit structured error records without string matching.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bgk {

enum class ErrorCode {
  GammaOutOfRange,
  NegativeDensity,
  NegativeValue,
  BadAngle,
  ZeroVector,
  GridTooSmall,
  BadBounds,
  EmptySurvey,
  OutsideIntersection,
  SupportOverflow,
  CorrectionFailure,
  EpsUnresolvable,
  BoundViolation,
  BadQ,
  NoConvergence,
  CFLViolation,
  VacuumBreakdown,
  GridMismatch,
  ZeroField,
  WrongBranch,
  ParseError,
  ValidationError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  const char* code_name() const noexcept { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

/// One entry of a collect-all validation pass: the offending key (or dotted
/// path) plus what is wrong with it.
struct Violation {
  std::string key;
  std::string message;
};

/// Thrown by config parsing/validation after the full file has been checked;
/// holds every violation found, not just the first.
class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, std::vector<Violation> violations)
      : Error(code, join(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<Violation>& vs) {
    std::string out;
    for (const auto& v : vs) {
      if (!out.empty()) out += "; ";
      out += v.key + ": " + v.message;
    }
    return out;
  }
  std::vector<Violation> violations_;
};

}  // namespace bgk
