// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include "psmm/errors.hpp"

namespace psmm {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kConventionMismatch: return "ConventionMismatch";
    case ErrorCode::kSpectrumViolation: return "SpectrumViolation";
    case ErrorCode::kSpectraOverlap: return "SpectraOverlap";
    case ErrorCode::kDefectiveMatrix: return "DefectiveMatrix";
    case ErrorCode::kRankDeficientOmega: return "RankDeficientOmega";
    case ErrorCode::kRankDeficientXi: return "RankDeficientXi";
    case ErrorCode::kWlRankDeficient: return "WlRankDeficient";
    case ErrorCode::kCapacity: return "CapacityError";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kDiverged: return "Diverged";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kPrecondition: return "PreconditionViolation";
    case ErrorCode::kNumeric: return "NumericFailure";
  }
  return "UnknownError";
}

}  // namespace psmm
