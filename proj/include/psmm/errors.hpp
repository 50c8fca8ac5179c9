// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace psmm {

/// Error categories surfaced by the library. Each maps 1:1 onto a
/// machine-readable code emitted by the CLI.
enum class ErrorCode {
  kSchema,               // model file shape/field violation
  kConventionMismatch,   // file written under a different multiset ordering
  kSpectrumViolation,    // generator S_1 not semi-simple imaginary
  kSpectraOverlap,       // Sylvester solvability assumption violated
  kDefectiveMatrix,      // diagonalization failed the residual check
  kRankDeficientOmega,   // Method I: [X_1; U_1] lost column rank
  kRankDeficientXi,      // Method II: Xi lost row rank (Assumption on (W_l, S^<l>))
  kWlRankDeficient,      // Method I degree step: W_l lost column rank
  kCapacity,             // tuple enumeration would exceed the configured cap
  kIllConditioned,       // regression Gramian beyond conditioning threshold
  kDiverged,             // simulation state escaped the guard radius
  kGridMismatch,         // trajectories on different time grids
  kPrecondition,         // named precondition violated
  kNumeric,              // internal numeric failure
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int degree = -1)
      : std::runtime_error(message), code_(code), degree_(degree) {}

  ErrorCode code() const { return code_; }
  /// Power-series degree the failure is attached to, or -1.
  int degree() const { return degree_; }

 private:
  ErrorCode code_;
  int degree_;
};

}  // namespace psmm
