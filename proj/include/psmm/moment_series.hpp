// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "psmm/kron_algebra.hpp"
#include "psmm/poly_system.hpp"

namespace psmm::series {

struct Options {
  std::int64_t tuple_capacity = kron::kDefaultTupleCapacity;
  bool keep_X = true;
  bool keep_audit = false;  // retain W_l, E_l, G_l per degree
};

/// Row layout of the stacked degree-l objects F_l = [F_{l,0} ... F_{0,l}],
/// H_l, W_l: blocks in (i, r) order from (l, 0) down to (0, l).
struct DegreeLayout {
  int l = 0;
  std::vector<std::pair<int, int>> blocks;
  std::vector<Eigen::Index> offsets;  // blocks.size() + 1 entries
  Eigen::Index m_l = 0;               // sum of C(n-1+i,i) * C(m-1+r,r)
};

DegreeLayout degree_layout(int n, int m, int l);

/// Stacked horizontal concatenation of the degree-l F (or H) blocks of a
/// system, in layout order; absent blocks are zero.
Eigen::MatrixXd stacked_F(const PolySystem& sys, int l);
Eigen::MatrixXd stacked_H(const PolySystem& sys, int l);

/// W_l: vertical stack of W_{i,r} = (X_1^[i] (x) U_1^[r]) N_l^sigma over
/// (i, r) = (l, 0), ..., (0, l). Shape m_l x C(sigma-1+l, l).
Eigen::MatrixXd compute_coupling_W(
    const Eigen::MatrixXd& X1, const Eigen::MatrixXd& U1, int l,
    std::int64_t cap = kron::kDefaultTupleCapacity);

struct Corrections {
  Eigen::MatrixXd E;  // n x C(sigma-1+l, l)
  Eigen::MatrixXd G;  // p x C(sigma-1+l, l)
};

/// E_l and G_l of the recursive Sylvester equations. `X` holds the lower
/// degrees: X[0] = X_1, ..., X[l-2] = X_{l-1}. Degree-(i+r) >= 2 coefficient
/// blocks of `sys` with i+r < l feed the delta/gamma convolution terms; the
/// generator contributes the higher-degree S_l, U_l pieces.
Corrections compute_corrections(const std::vector<Eigen::MatrixXd>& X,
                                const PolySystem& sys,
                                const SignalGenerator& gen, int l,
                                std::int64_t cap = kron::kDefaultTupleCapacity);

/// Power-series solution of the center-manifold PDE up to degree kappa:
/// degree 1 solves X_1 S_1 = A X_1 + B U_1, higher degrees the recursive
/// Sylvester equations with E_l, G_l, W_l corrections.
MomentSeries moment_recursion(const PolySystem& sys, const SignalGenerator& gen,
                              int kappa, const Options& opts = {});

struct FrequencyData {
  int l = 0;
  Eigen::VectorXcd eigenvalues;  // of S_1^<l>, sorted (imag, real)
  Eigen::MatrixXcd P;
  Eigen::MatrixXcd Y_tilde;      // Y_l P
  Eigen::MatrixXcd GU_tilde;     // column-wise G_1(lambda) * (U_l P)
  Eigen::MatrixXcd H_script;     // column-wise C(sI-A)^-1 E~ + G~ (l >= 2)
  Eigen::MatrixXd Y_prime;       // real [Y'~] P^-1, l >= 2; empty for l = 1
  double max_imag = 0.0;         // imaginary residue before taking real part
};

/// Frequency-domain form of the degree-l equations. For l = 1 the columns
/// satisfy Y~ = G_1(lambda) U~; for l >= 2 returns Y'_l, the output deficit
/// to be produced through (F_l, H_l).
FrequencyData frequency_transform_raw(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
    const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
    const Eigen::MatrixXd& S1, const Eigen::MatrixXd& Y_l,
    const Eigen::MatrixXd& U_l, const Eigen::MatrixXd& E_l,
    const Eigen::MatrixXd& G_l, int l);

/// Convenience overload on a computed series of `sys` (recomputes E, G).
FrequencyData frequency_transform(const MomentSeries& series,
                                  const PolySystem& sys,
                                  const SignalGenerator& gen, int l,
                                  std::int64_t cap = kron::kDefaultTupleCapacity);

/// Truncated moment evaluation sum_l Y_l v^[l].
Eigen::VectorXd evaluate_series(const MomentSeries& series,
                                const Eigen::VectorXd& v);

/// Relative residual of the degree-l Sylvester equation for a computed
/// series, ||X_l S^<l> - A X_l - B U_l - E_l - F_l W_l|| / scale.
double degree_residual(const MomentSeries& series, const PolySystem& sys,
                       const SignalGenerator& gen, int l,
                       std::int64_t cap = kron::kDefaultTupleCapacity);

}  // namespace psmm::series
