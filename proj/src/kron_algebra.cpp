// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include "psmm/kron_algebra.hpp"

#include <algorithm>
#include <limits>

namespace psmm::kron {

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t out = 1;
  for (std::int64_t j = 1; j <= k; ++j) {
    if (out > std::numeric_limits<std::int64_t>::max() / (n - k + j)) {
      throw Error(ErrorCode::kCapacity, "binomial overflow");
    }
    out = out * (n - k + j) / j;
  }
  return out;
}

std::int64_t reduced_dim(int n, int i) { return binomial(n - 1 + i, i); }

std::int64_t pow_checked(std::int64_t base, int exp, std::int64_t cap) {
  std::int64_t out = 1;
  for (int j = 0; j < exp; ++j) {
    if (base != 0 && out > cap / base) {
      throw Error(ErrorCode::kCapacity,
                  "tuple enumeration " + std::to_string(base) + "^" +
                      std::to_string(exp) + " exceeds capacity " +
                      std::to_string(cap));
    }
    out *= base;
  }
  return out;
}

MultisetIndexTable::MultisetIndexTable(int n, int i)
    : n_(n), i_(i), count_(reduced_dim(n, i)) {}

MultisetIndexTable MultisetIndexTable::build(int n, int i) {
  if (n < 1 || i < 0) {
    throw Error(ErrorCode::kPrecondition, "multiset table needs n >= 1, i >= 0");
  }
  MultisetIndexTable t(n, i);
  t.rows_.reserve(static_cast<std::size_t>(t.count_) * i);
  // Enumerate nondecreasing tuples in lex order.
  if (i == 0) return t;  // single empty row
  std::vector<int> cur(i, 0);
  while (true) {
    t.rows_.insert(t.rows_.end(), cur.begin(), cur.end());
    int pos = i - 1;
    while (pos >= 0 && cur[pos] == n - 1) --pos;
    if (pos < 0) break;
    int v = cur[pos] + 1;
    for (int j = pos; j < i; ++j) cur[j] = v;
  }
  return t;
}

Eigen::Index MultisetIndexTable::row_of_sorted(std::span<const int> s) const {
  // Rank of a nondecreasing tuple in lex order: count tuples ordered before it.
  std::int64_t rank = 0;
  int prev = 0;
  for (int j = 0; j < i_; ++j) {
    for (int c = prev; c < s[j]; ++c) {
      rank += binomial(n_ - c + i_ - j - 2, i_ - j - 1);
    }
    prev = s[j];
  }
  return static_cast<Eigen::Index>(rank);
}

Eigen::Index MultisetIndexTable::row_of_tuple(std::span<const int> tuple) const {
  std::vector<int> s(tuple.begin(), tuple.end());
  std::sort(s.begin(), s.end());
  return row_of_sorted(s);
}

std::int64_t MultisetIndexTable::tuple_flat_index(
    std::span<const int> tuple) const {
  std::int64_t idx = 0;
  for (int j = 0; j < i_; ++j) idx = idx * n_ + tuple[j];
  return idx;
}

ProjectionPair build_MN(const MultisetIndexTable& t, std::int64_t cap) {
  const int n = t.symbols();
  const int i = t.degree();
  const std::int64_t full = pow_checked(n, i, cap);
  ProjectionPair out;
  out.M = Eigen::MatrixXd::Zero(t.row_count(), full);
  out.N = Eigen::MatrixXd::Zero(full, t.row_count());
  for (Eigen::Index r = 0; r < t.row_count(); ++r) {
    out.M(r, t.tuple_flat_index(t.row(r))) = 1.0;
  }
  std::vector<int> tup(i, 0);
  for (std::int64_t col = 0; col < full; ++col) {
    out.N(col, t.row_of_tuple(tup)) = 1.0;
    for (int j = i - 1; j >= 0; --j) {
      if (++tup[j] < n) break;
      tup[j] = 0;
    }
  }
  return out;
}

Eigen::VectorXd reduced_power_vector(const Eigen::VectorXd& v, int i) {
  const int n = static_cast<int>(v.size());
  auto t = MultisetIndexTable::build(n, i);
  Eigen::VectorXd out(t.row_count());
  for (Eigen::Index r = 0; r < t.row_count(); ++r) {
    double prod = 1.0;
    for (int s : t.row(r)) prod *= v[s];
    out[r] = prod;
  }
  return out;
}

Eigen::MatrixXd reduced_power_matrix(const Eigen::MatrixXd& A, int i,
                                     std::int64_t cap) {
  const int q = static_cast<int>(A.rows());
  const int t = static_cast<int>(A.cols());
  if (i == 0) return Eigen::MatrixXd::Ones(1, 1);
  auto rows = MultisetIndexTable::build(q, i);
  const std::int64_t cols = pow_checked(t, i, cap);
  Eigen::MatrixXd out(rows.row_count(), cols);
  std::vector<int> tup(i, 0);
  for (std::int64_t c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows.row_count(); ++r) {
      auto sel = rows.row(r);
      double prod = 1.0;
      for (int j = 0; j < i; ++j) prod *= A(sel[j], tup[j]);
      out(r, c) = prod;
    }
    for (int j = i - 1; j >= 0; --j) {
      if (++tup[j] < t) break;
      tup[j] = 0;
    }
  }
  return out;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return out;
}

Eigen::MatrixXd successive_kron_sum(const Eigen::MatrixXd& A, int i,
                                    std::int64_t cap) {
  const auto q = A.rows();
  const std::int64_t rows = pow_checked(q, i, cap);
  const std::int64_t cols = pow_checked(q, i - 1, cap) * A.cols();
  if (cols > cap) throw Error(ErrorCode::kCapacity, "kron sum exceeds capacity");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(q, q);
  for (int r = 1; r <= i; ++r) {
    Eigen::MatrixXd term = Eigen::MatrixXd::Ones(1, 1);
    for (int j = 1; j < r; ++j) term = kron(term, I);
    term = kron(term, A);
    for (int j = r; j < i; ++j) term = kron(term, I);
    out += term;
  }
  return out;
}

Eigen::MatrixXd reduced_kron_sum(const Eigen::MatrixXd& A, int i) {
  const int n = static_cast<int>(A.rows());
  auto t = MultisetIndexTable::build(n, i);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(t.row_count(), t.row_count());
  std::vector<int> tup(i);
  for (Eigen::Index r = 0; r < t.row_count(); ++r) {
    auto sel = t.row(r);
    // Row r of M A^{i}: tuples differing from sel in one position.
    for (int pos = 0; pos < i; ++pos) {
      std::copy(sel.begin(), sel.end(), tup.begin());
      for (int c = 0; c < n; ++c) {
        tup[pos] = c;
        out(r, t.row_of_tuple(tup)) += A(sel[pos], c);
      }
    }
  }
  return out;
}

}  // namespace psmm::kron
