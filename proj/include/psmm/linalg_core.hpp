// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "psmm/errors.hpp"

namespace psmm::linalg {

/// Singular-value rank threshold: max(dim) * ||M||_2 * 1e-12.
double rank_threshold(const Eigen::MatrixXd& M, double sigma_max);

struct PinvResult {
  Eigen::MatrixXd solution;
  Eigen::Index rank = 0;
  double threshold = 0.0;
  Eigen::VectorXd singular_values;
};

/// Minimum-norm least-squares solve via SVD (Moore-Penrose convention).
/// Full row rank input gives residual 0; full column rank gives the unique
/// solution. Never errors; rank is reported for diagnostics.
PinvResult min_norm_solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& rhs);

/// Moore-Penrose pseudo-inverse with the shared rank threshold.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& M);

/// Basic solution via column-pivoted QR: at most rank(M) nonzero entries,
/// the convention of MATLAB's mldivide for underdetermined systems.
Eigen::MatrixXd basic_solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& rhs);

Eigen::Index numeric_rank(const Eigen::MatrixXd& M);

/// Solves the Sylvester equation X S = A X + Q by vectorization
/// ((S^T (x) I) - (I (x) A)) vec X = vec Q with dense LU.
/// Throws kSpectraOverlap when the spectra of A and S nearly intersect.
Eigen::MatrixXd solve_sylvester(const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& S,
                                const Eigen::MatrixXd& Q);

struct Diagonalization {
  Eigen::MatrixXcd P;  // eigenvector matrix, deterministic order/phase
  Eigen::VectorXcd eigenvalues;
  double conditioning = 0.0;  // cond_2(P)
};

/// Complex diagonalization with eigenvalues sorted by (imag, real) and
/// eigenvector phase fixed; throws kDefectiveMatrix when P^-1 S P fails to
/// reproduce S within tolerance.
Diagonalization diagonalize(const Eigen::MatrixXd& S);

std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXd& A);

bool is_hurwitz(const Eigen::MatrixXd& A, double margin = 0.0);

struct StructuralDiagnostics {
  bool hurwitz = false;
  double max_real_part = 0.0;
  bool controllable = false;
  Eigen::Index controllability_rank = 0;
  bool observable = false;
  Eigen::Index observability_rank = 0;
  Eigen::Index rank_U1 = 0;
  bool U1_full_rank = false;
  int observability_index = -1;  // mu of (U1, S1); -1 when unobservable
  bool index_minimal = false;    // mu == ceil(sigma / m)
  double sv_threshold = 0.0;
};

/// Assumption checks backing Methods I/II: Hurwitz A, controllability of
/// (A,B), observability of (C,A), rank of U1, observability index of (U1,S1).
StructuralDiagnostics structural_checks(const Eigen::MatrixXd& A,
                                        const Eigen::MatrixXd& B,
                                        const Eigen::MatrixXd& C,
                                        const Eigen::MatrixXd& U1,
                                        const Eigen::MatrixXd& S1);

/// Observability index of (U, S): smallest mu with rank [U; US; ...; US^(mu-1)]
/// equal to cols(S). Returns -1 when the pair is unobservable.
int observability_index(const Eigen::MatrixXd& U, const Eigen::MatrixXd& S);

}  // namespace psmm::linalg
