// SPDX-License-Identifier: MIT

#include "bgk/errors.hpp"

namespace bgk {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::BadAngle: return "BadAngle";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::BadBounds: return "BadBounds";
    case ErrorCode::EmptySurvey: return "EmptySurvey";
    case ErrorCode::OutsideIntersection: return "OutsideIntersection";
    case ErrorCode::SupportOverflow: return "SupportOverflow";
    case ErrorCode::CorrectionFailure: return "CorrectionFailure";
    case ErrorCode::EpsUnresolvable: return "EpsUnresolvable";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::BadQ: return "BadQ";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::VacuumBreakdown: return "VacuumBreakdown";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::WrongBranch: return "WrongBranch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "UnknownError";
}

}  // namespace bgk
