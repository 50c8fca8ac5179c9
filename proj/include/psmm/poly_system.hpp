// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "psmm/errors.hpp"
#include "psmm/kron_algebra.hpp"

namespace psmm {

/// Polynomial state-space model
///   xdot = sum_{1<=i+r<=L} F_{i,r} (x^[i] (x) u^[r]),
///   y    = sum_{1<=i+r<=L} H_{i,r} (x^[i] (x) u^[r]),
/// with blocks stored in the reduced-Kronecker (multiset) column convention.
/// Absent blocks are zero; f(0,0)=0 and h(0,0)=0 by construction.
class PolySystem {
 public:
  PolySystem(int n, int m, int p, int max_degree);

  int n() const { return n_; }
  int m() const { return m_; }
  int p() const { return p_; }
  int max_degree() const { return L_; }

  /// Column count of block (i, r): C(n-1+i,i) * C(m-1+r,r).
  Eigen::Index block_cols(int i, int r) const;

  void set_F(int i, int r, Eigen::MatrixXd block);
  void set_H(int i, int r, Eigen::MatrixXd block);

  const Eigen::MatrixXd* F_ptr(int i, int r) const;
  const Eigen::MatrixXd* H_ptr(int i, int r) const;
  /// Zero-materializing accessors.
  Eigen::MatrixXd F_block(int i, int r) const;
  Eigen::MatrixXd H_block(int i, int r) const;

  // Linear-part aliases: A = F_{1,0}, B = F_{0,1}, C = H_{1,0}, D = H_{0,1}.
  Eigen::MatrixXd A() const { return F_block(1, 0); }
  Eigen::MatrixXd B() const { return F_block(0, 1); }
  Eigen::MatrixXd C() const { return H_block(1, 0); }
  Eigen::MatrixXd D() const { return H_block(0, 1); }

  bool linear_state_equation() const;   // F_{i,r} = 0 for i + r >= 2
  bool linear_output_equation() const;  // H_{i,r} = 0 for i + r >= 2

  /// All stored (i, r, block) triples, for serialization.
  const std::map<std::pair<int, int>, Eigen::MatrixXd>& F_blocks() const {
    return F_;
  }
  const std::map<std::pair<int, int>, Eigen::MatrixXd>& H_blocks() const {
    return H_;
  }

  /// f(x, u) and h(x, u) evaluated through reduced power vectors.
  Eigen::VectorXd eval_f(const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u) const;
  Eigen::VectorXd eval_h(const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u) const;

 private:
  void check_block(int i, int r, const Eigen::MatrixXd& blk,
                   Eigen::Index rows, const char* what) const;
  int n_, m_, p_, L_;
  std::map<std::pair<int, int>, Eigen::MatrixXd> F_;
  std::map<std::pair<int, int>, Eigen::MatrixXd> H_;
};

/// Polynomial exosystem vdot = sum S_l v^[l], u = sum U_l v^[l].
/// S_1 must have semi-simple, purely imaginary spectrum (checked).
class SignalGenerator {
 public:
  SignalGenerator(int sigma, int m, int max_degree);

  int sigma() const { return sigma_; }
  int m() const { return m_; }
  int max_degree() const { return L_; }

  void set_S(int l, Eigen::MatrixXd block);
  void set_U(int l, Eigen::MatrixXd block);

  const Eigen::MatrixXd* S_ptr(int l) const;
  const Eigen::MatrixXd* U_ptr(int l) const;
  Eigen::MatrixXd S_block(int l) const;
  Eigen::MatrixXd U_block(int l) const;
  Eigen::MatrixXd S1() const { return S_block(1); }
  Eigen::MatrixXd U1() const { return U_block(1); }

  const std::map<int, Eigen::MatrixXd>& S_blocks() const { return S_; }
  const std::map<int, Eigen::MatrixXd>& U_blocks() const { return U_; }

  bool linear() const;  // S_l = 0, U_l = 0 for l >= 2

  /// Verifies the neutral-stability assumption on S_1: eigenvalues on the
  /// imaginary axis within 1e-9 * max(1, ||S_1||) and diagonalizable.
  /// Throws kSpectrumViolation / kDefectiveMatrix.
  void validate_spectrum() const;

  Eigen::VectorXd eval_s(const Eigen::VectorXd& v) const;
  Eigen::VectorXd eval_u(const Eigen::VectorXd& v) const;

 private:
  int sigma_, m_, L_;
  std::map<int, Eigen::MatrixXd> S_;
  std::map<int, Eigen::MatrixXd> U_;
};

/// Power-series coefficients of the steady-state maps: y(v) = sum Y_l v^[l]
/// and optionally x(v) = sum X_l v^[l], plus per-degree audit intermediates.
struct MomentSeries {
  int sigma = 0;
  int kappa = 0;
  std::vector<Eigen::MatrixXd> Y;  // index l-1, size p x C(sigma-1+l,l)
  std::vector<Eigen::MatrixXd> X;  // may be empty when moments are external
  std::vector<Eigen::MatrixXd> W;  // audit, index l-2 (degrees 2..kappa)
  std::vector<Eigen::MatrixXd> E;
  std::vector<Eigen::MatrixXd> G;

  const Eigen::MatrixXd& Y_at(int l) const { return Y.at(l - 1); }
  const Eigen::MatrixXd& X_at(int l) const { return X.at(l - 1); }
  bool has_X() const { return !X.empty(); }
};

}  // namespace psmm
