// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "psmm/errors.hpp"

namespace psmm::kron {

/// Identifier for the multiset ordering used throughout: multisets of a given
/// degree appear in the order of first occurrence when tuples are enumerated
/// lexicographically, which is the lex order of their nondecreasing
/// representative tuples. Model files must declare this string.
inline constexpr const char* kOrderingConvention = "lex-first-occurrence-v1";

/// Default cap on full tuple enumerations (sigma^l and friends).
inline constexpr std::int64_t kDefaultTupleCapacity = 2'000'000;

/// Exact binomial C(n, k) in 64-bit, throws kCapacity on overflow.
std::int64_t binomial(std::int64_t n, std::int64_t k);

/// C(n-1+i, i): dimension of the reduced Kronecker power v^[i] for v of size n.
std::int64_t reduced_dim(int n, int i);

/// base^exp with a cap; throws kCapacity when the result would exceed it.
std::int64_t pow_checked(std::int64_t base, int exp,
                         std::int64_t cap = kDefaultTupleCapacity);

/// Enumeration of degree-i multisets over n symbols (0-based), stored as
/// nondecreasing tuples in lexicographic order. Row r of the table is the
/// column index of the r-th entry of v^[i]; ranking a sorted tuple recovers
/// the row of any tuple of v^(i) under the projection.
class MultisetIndexTable {
 public:
  static MultisetIndexTable build(int n, int i);

  int symbols() const { return n_; }
  int degree() const { return i_; }
  Eigen::Index row_count() const { return static_cast<Eigen::Index>(count_); }

  /// The nondecreasing tuple of row r (degree() entries in [0, symbols())).
  std::span<const int> row(Eigen::Index r) const {
    return {rows_.data() + static_cast<std::size_t>(r) * i_,
            static_cast<std::size_t>(i_)};
  }

  /// Row index of an arbitrary tuple (sorts a copy, then ranks).
  Eigen::Index row_of_tuple(std::span<const int> tuple) const;

  /// Row index of an already-nondecreasing tuple; O(i*n) combinatorial rank.
  Eigen::Index row_of_sorted(std::span<const int> sorted) const;

  /// Flat column index of a tuple within v^(i) (row-major tuple encoding,
  /// i.e. the standard Kronecker-product ordering).
  std::int64_t tuple_flat_index(std::span<const int> tuple) const;

 private:
  MultisetIndexTable(int n, int i);
  int n_;
  int i_;
  std::int64_t count_;
  std::vector<int> rows_;  // count_ * i_ entries
};

/// Dense 0/1 projection (M) and lifting (N) matrices with M*N = I. Test-scale
/// only: the production paths work through MultisetIndexTable instead of
/// materializing n^i columns.
struct ProjectionPair {
  Eigen::MatrixXd M;  // C(n-1+i,i) x n^i
  Eigen::MatrixXd N;  // n^i x C(n-1+i,i)
};

ProjectionPair build_MN(const MultisetIndexTable& table,
                        std::int64_t cap = kDefaultTupleCapacity);

/// v^[i] computed directly as multiset monomials; equals M * v^(i).
Eigen::VectorXd reduced_power_vector(const Eigen::VectorXd& v, int i);

/// A^[i] = M_i^q * (A (x) ... (x) A), computed row-selectively: row r is
/// indexed by the sorted tuple of multiset r, entry (r, s) = prod_j A(t_j, s_j).
Eigen::MatrixXd reduced_power_matrix(const Eigen::MatrixXd& A, int i,
                                     std::int64_t cap = kDefaultTupleCapacity);

/// Successive Kronecker sum for a (possibly non-square) q x t matrix:
///   A^{i} = sum_{r=1..i} I_q^(r-1) (x) A (x) I_q^(i-r),
/// of shape q^i x (q^(i-1) * t). Identity factors use the row dimension.
Eigen::MatrixXd successive_kron_sum(const Eigen::MatrixXd& A, int i,
                                    std::int64_t cap = kDefaultTupleCapacity);

/// Reduced Kronecker sum A^<i> = M A^{i} N for square A, computed without the
/// n^i intermediate. Carries the i-fold eigenvalue sums of A.
Eigen::MatrixXd reduced_kron_sum(const Eigen::MatrixXd& A, int i);

/// Plain Kronecker product helper (dense).
Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace psmm::kron
