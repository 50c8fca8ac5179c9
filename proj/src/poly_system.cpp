// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include "psmm/poly_system.hpp"

#include <cmath>

#include "psmm/linalg_core.hpp"

namespace psmm {

PolySystem::PolySystem(int n, int m, int p, int max_degree)
    : n_(n), m_(m), p_(p), L_(max_degree) {
  if (n < 1 || m < 1 || p < 1 || max_degree < 1) {
    throw Error(ErrorCode::kPrecondition, "PolySystem: dimensions must be >= 1");
  }
}

Eigen::Index PolySystem::block_cols(int i, int r) const {
  return static_cast<Eigen::Index>(kron::reduced_dim(n_, i) *
                                   kron::reduced_dim(m_, r));
}

void PolySystem::check_block(int i, int r, const Eigen::MatrixXd& blk,
                             Eigen::Index rows, const char* what) const {
  if (i < 0 || r < 0 || i + r < 1 || i + r > L_) {
    throw Error(ErrorCode::kSchema,
                std::string(what) + ": degree (" + std::to_string(i) + "," +
                    std::to_string(r) + ") outside 1.." + std::to_string(L_));
  }
  if (blk.rows() != rows || blk.cols() != block_cols(i, r)) {
    throw Error(ErrorCode::kSchema,
                std::string(what) + "_" + std::to_string(i) + "_" +
                    std::to_string(r) + ": expected " + std::to_string(rows) +
                    "x" + std::to_string(block_cols(i, r)) + ", got " +
                    std::to_string(blk.rows()) + "x" +
                    std::to_string(blk.cols()));
  }
}

void PolySystem::set_F(int i, int r, Eigen::MatrixXd block) {
  check_block(i, r, block, n_, "F");
  F_[{i, r}] = std::move(block);
}

void PolySystem::set_H(int i, int r, Eigen::MatrixXd block) {
  check_block(i, r, block, p_, "H");
  H_[{i, r}] = std::move(block);
}

const Eigen::MatrixXd* PolySystem::F_ptr(int i, int r) const {
  auto it = F_.find({i, r});
  return it == F_.end() ? nullptr : &it->second;
}

const Eigen::MatrixXd* PolySystem::H_ptr(int i, int r) const {
  auto it = H_.find({i, r});
  return it == H_.end() ? nullptr : &it->second;
}

Eigen::MatrixXd PolySystem::F_block(int i, int r) const {
  if (const auto* b = F_ptr(i, r)) return *b;
  return Eigen::MatrixXd::Zero(n_, block_cols(i, r));
}

Eigen::MatrixXd PolySystem::H_block(int i, int r) const {
  if (const auto* b = H_ptr(i, r)) return *b;
  return Eigen::MatrixXd::Zero(p_, block_cols(i, r));
}

bool PolySystem::linear_state_equation() const {
  for (const auto& [key, blk] : F_) {
    if (key.first + key.second >= 2 && blk.cwiseAbs().maxCoeff() != 0.0) {
      return false;
    }
  }
  return true;
}

bool PolySystem::linear_output_equation() const {
  for (const auto& [key, blk] : H_) {
    if (key.first + key.second >= 2 && blk.cwiseAbs().maxCoeff() != 0.0) {
      return false;
    }
  }
  return true;
}

Eigen::VectorXd PolySystem::eval_f(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
  for (const auto& [key, blk] : F_) {
    const auto xi = kron::reduced_power_vector(x, key.first);
    const auto ur = kron::reduced_power_vector(u, key.second);
    Eigen::VectorXd mono(xi.size() * ur.size());
    for (Eigen::Index a = 0; a < xi.size(); ++a) {
      mono.segment(a * ur.size(), ur.size()) = xi[a] * ur;
    }
    out += blk * mono;
  }
  return out;
}

Eigen::VectorXd PolySystem::eval_h(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p_);
  for (const auto& [key, blk] : H_) {
    const auto xi = kron::reduced_power_vector(x, key.first);
    const auto ur = kron::reduced_power_vector(u, key.second);
    Eigen::VectorXd mono(xi.size() * ur.size());
    for (Eigen::Index a = 0; a < xi.size(); ++a) {
      mono.segment(a * ur.size(), ur.size()) = xi[a] * ur;
    }
    out += blk * mono;
  }
  return out;
}

SignalGenerator::SignalGenerator(int sigma, int m, int max_degree)
    : sigma_(sigma), m_(m), L_(max_degree) {
  if (sigma < 1 || m < 1 || max_degree < 1) {
    throw Error(ErrorCode::kPrecondition,
                "SignalGenerator: dimensions must be >= 1");
  }
}

void SignalGenerator::set_S(int l, Eigen::MatrixXd block) {
  if (l < 1 || l > L_) {
    throw Error(ErrorCode::kSchema, "S_l degree outside 1..L");
  }
  const Eigen::Index cols = kron::reduced_dim(sigma_, l);
  if (block.rows() != sigma_ || block.cols() != cols) {
    throw Error(ErrorCode::kSchema,
                "S_" + std::to_string(l) + ": expected " +
                    std::to_string(sigma_) + "x" + std::to_string(cols));
  }
  S_[l] = std::move(block);
}

void SignalGenerator::set_U(int l, Eigen::MatrixXd block) {
  if (l < 1 || l > L_) {
    throw Error(ErrorCode::kSchema, "U_l degree outside 1..L");
  }
  const Eigen::Index cols = kron::reduced_dim(sigma_, l);
  if (block.rows() != m_ || block.cols() != cols) {
    throw Error(ErrorCode::kSchema,
                "U_" + std::to_string(l) + ": expected " + std::to_string(m_) +
                    "x" + std::to_string(cols));
  }
  U_[l] = std::move(block);
}

const Eigen::MatrixXd* SignalGenerator::S_ptr(int l) const {
  auto it = S_.find(l);
  return it == S_.end() ? nullptr : &it->second;
}

const Eigen::MatrixXd* SignalGenerator::U_ptr(int l) const {
  auto it = U_.find(l);
  return it == U_.end() ? nullptr : &it->second;
}

Eigen::MatrixXd SignalGenerator::S_block(int l) const {
  if (const auto* b = S_ptr(l)) return *b;
  return Eigen::MatrixXd::Zero(sigma_, kron::reduced_dim(sigma_, l));
}

Eigen::MatrixXd SignalGenerator::U_block(int l) const {
  if (const auto* b = U_ptr(l)) return *b;
  return Eigen::MatrixXd::Zero(m_, kron::reduced_dim(sigma_, l));
}

bool SignalGenerator::linear() const {
  for (const auto& [l, blk] : S_) {
    if (l >= 2 && blk.cwiseAbs().maxCoeff() != 0.0) return false;
  }
  for (const auto& [l, blk] : U_) {
    if (l >= 2 && blk.cwiseAbs().maxCoeff() != 0.0) return false;
  }
  return true;
}

void SignalGenerator::validate_spectrum() const {
  const Eigen::MatrixXd S1m = S_block(1);
  const double tol = 1e-9 * std::max(1.0, S1m.norm());
  for (const auto& l : linalg::eigenvalues_of(S1m)) {
    if (std::abs(l.real()) > tol) {
      throw Error(ErrorCode::kSpectrumViolation,
                  "S_1 eigenvalue " + std::to_string(l.real()) + "+" +
                      std::to_string(l.imag()) + "j is off the imaginary axis");
    }
  }
  // Semi-simplicity: diagonalize() throws kDefectiveMatrix on failure.
  (void)linalg::diagonalize(S1m);
}

Eigen::VectorXd SignalGenerator::eval_s(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sigma_);
  for (const auto& [l, blk] : S_) {
    out += blk * kron::reduced_power_vector(v, l);
  }
  return out;
}

Eigen::VectorXd SignalGenerator::eval_u(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
  for (const auto& [l, blk] : U_) {
    out += blk * kron::reduced_power_vector(v, l);
  }
  return out;
}

}  // namespace psmm
