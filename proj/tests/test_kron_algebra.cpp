// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "psmm/kron_algebra.hpp"
#include "psmm/linalg_core.hpp"

using namespace psmm;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("kron_algebra") {

TEST_CASE("multiset table enumeration and ranking") {
  auto t = kron::MultisetIndexTable::build(2, 2);
  REQUIRE(t.row_count() == 3);
  CHECK(std::vector<int>(t.row(0).begin(), t.row(0).end()) ==
        std::vector<int>{0, 0});
  CHECK(std::vector<int>(t.row(1).begin(), t.row(1).end()) ==
        std::vector<int>{0, 1});
  CHECK(std::vector<int>(t.row(2).begin(), t.row(2).end()) ==
        std::vector<int>{1, 1});

  CHECK(kron::MultisetIndexTable::build(3, 2).row_count() == 6);

  auto single = kron::MultisetIndexTable::build(1, 5);
  REQUIRE(single.row_count() == 1);
  CHECK(std::vector<int>(single.row(0).begin(), single.row(0).end()) ==
        std::vector<int>(5, 0));

  CHECK(kron::MultisetIndexTable::build(4, 0).row_count() == 1);

  // Ranking agrees with the enumeration order for every stored row, and
  // every tuple maps to the row of its sorted form.
  for (int n = 1; n <= 5; ++n) {
    for (int i = 0; i <= 4; ++i) {
      auto table = kron::MultisetIndexTable::build(n, i);
      CHECK(table.row_count() == kron::binomial(n - 1 + i, i));
      for (Eigen::Index r = 0; r < table.row_count(); ++r) {
        CHECK(table.row_of_sorted(table.row(r)) == r);
      }
    }
  }
  auto t32 = kron::MultisetIndexTable::build(3, 3);
  const int tup[3] = {2, 0, 1};
  CHECK(t32.row_of_tuple(tup) == t32.row_of_sorted(std::vector<int>{0, 1, 2}));
}

TEST_CASE("projection pair M, N") {
  auto t = kron::MultisetIndexTable::build(2, 2);
  auto mn = kron::build_MN(t);
  MatrixXd Mexp(3, 4);
  Mexp << 1, 0, 0, 0,
          0, 1, 0, 0,
          0, 0, 0, 1;
  MatrixXd Nexp(4, 3);
  Nexp << 1, 0, 0,
          0, 1, 0,
          0, 1, 0,
          0, 0, 1;
  CHECK((mn.M - Mexp).cwiseAbs().maxCoeff() == 0.0);
  CHECK((mn.N - Nexp).cwiseAbs().maxCoeff() == 0.0);

  VectorXd v(2);
  v << 2, 3;
  const VectorXd v2 = oracle::dense_kron_power_vec(v, 2);
  VectorXd expect(3);
  expect << 4, 6, 9;
  CHECK((mn.M * v2 - expect).cwiseAbs().maxCoeff() == 0.0);

  // M N = I exactly, M row sums 1, N row sums 1, for all n <= 5, i <= 4.
  for (int n = 1; n <= 5; ++n) {
    for (int i = 0; i <= 4; ++i) {
      if (kron::pow_checked(n, i) > 4000) continue;
      auto table = kron::MultisetIndexTable::build(n, i);
      auto pair = kron::build_MN(table);
      const MatrixXd prod = pair.M * pair.N;
      CHECK((prod - MatrixXd::Identity(prod.rows(), prod.cols()))
                .cwiseAbs()
                .maxCoeff() == 0.0);
      for (Eigen::Index r = 0; r < pair.M.rows(); ++r) {
        CHECK(pair.M.row(r).sum() == 1.0);
      }
      for (Eigen::Index r = 0; r < pair.N.rows(); ++r) {
        CHECK(pair.N.row(r).sum() == 1.0);
      }
    }
  }
}

TEST_CASE("reduced power vector") {
  VectorXd v(2);
  v << 2, 3;
  VectorXd expect(3);
  expect << 4, 6, 9;
  CHECK((kron::reduced_power_vector(v, 2) - expect).norm() == 0.0);

  CHECK(kron::reduced_power_vector(v, 0).size() == 1);
  CHECK(kron::reduced_power_vector(v, 0)[0] == 1.0);

  VectorXd w(3);
  w << 1, 2, 3;
  VectorXd expect3(6);
  expect3 << 1, 2, 3, 4, 6, 9;
  CHECK((kron::reduced_power_vector(w, 2) - expect3).norm() == 0.0);

  // Equals M v^(i) for random vectors.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int i = 1 + static_cast<int>(rng() % 3);
    const VectorXd vv = oracle::randn(n, 1, rng);
    auto table = kron::MultisetIndexTable::build(n, i);
    auto mn = kron::build_MN(table);
    const VectorXd lhs = kron::reduced_power_vector(vv, i);
    const VectorXd rhs = mn.M * oracle::dense_kron_power_vec(vv, i);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * (1 + rhs.norm()));
  }
}

TEST_CASE("reduced power matrix") {
  MatrixXd a(1, 1);
  a << 2;
  CHECK(kron::reduced_power_matrix(a, 3)(0, 0) == 8.0);

  const MatrixXd I2 = MatrixXd::Identity(2, 2);
  auto mn = kron::build_MN(kron::MultisetIndexTable::build(2, 2));
  CHECK((kron::reduced_power_matrix(I2, 2) - mn.M).cwiseAbs().maxCoeff() ==
        0.0);

  std::mt19937_64 rng(5);
  const MatrixXd A = oracle::randn(2, 2, rng);
  const MatrixXd dense = mn.M * oracle::dense_kron_power(A, 2);
  CHECK((kron::reduced_power_matrix(A, 2) - dense).cwiseAbs().maxCoeff() <
        1e-14);

  // Rectangular case against the dense projection.
  const MatrixXd R = oracle::randn(3, 2, rng);
  auto mn3 = kron::build_MN(kron::MultisetIndexTable::build(3, 2));
  CHECK((kron::reduced_power_matrix(R, 2) -
         mn3.M * oracle::dense_kron_power(R, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("successive kron sum") {
  MatrixXd a(1, 1);
  a << 2;
  CHECK(kron::successive_kron_sum(a, 3)(0, 0) == 6.0);

  MatrixXd d = Eigen::Vector2d(1, 2).asDiagonal();
  const MatrixXd s2 = kron::successive_kron_sum(d, 2);
  MatrixXd expect = Eigen::Vector4d(2, 3, 3, 4).asDiagonal();
  CHECK((s2 - expect).cwiseAbs().maxCoeff() == 0.0);

  // Non-square 1x2: identity factors take the row dimension (1), so
  // A^{2} = A (x) I_1 + I_1 (x) A = 2 A.
  MatrixXd ab(1, 2);
  ab << 3.0, -4.0;
  const MatrixXd s = kron::successive_kron_sum(ab, 2);
  CHECK(s.rows() == 1);
  CHECK(s.cols() == 2);
  CHECK((s - 2.0 * ab).cwiseAbs().maxCoeff() == 0.0);

  // Against the dense definition for a random rectangular block.
  std::mt19937_64 rng(17);
  const MatrixXd K = oracle::randn(2, 3, rng);
  MatrixXd manual = MatrixXd::Zero(4, 6);
  const MatrixXd I = MatrixXd::Identity(2, 2);
  manual = kron::kron(K, I) + kron::kron(I, K);
  CHECK((kron::successive_kron_sum(K, 2) - manual).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("reduced kron sum and Kronecker-sum spectrum") {
  MatrixXd d = Eigen::Vector2d(1, 2).asDiagonal();
  const MatrixXd rk = kron::reduced_kron_sum(d, 2);
  auto eig = linalg::eigenvalues_of(rk);
  std::vector<double> re;
  for (auto& l : eig) re.push_back(l.real());
  std::sort(re.begin(), re.end());
  CHECK(re == std::vector<double>{2, 3, 4});

  MatrixXd z(1, 1);
  z << 0;
  CHECK(kron::reduced_kron_sum(z, 3)(0, 0) == 0.0);

  const double w = 0.7;
  MatrixXd rot(2, 2);
  rot << 0, w, -w, 0;
  auto er = linalg::eigenvalues_of(kron::reduced_kron_sum(rot, 2));
  std::vector<double> im;
  for (auto& l : er) im.push_back(l.imag());
  std::sort(im.begin(), im.end());
  CHECK(std::abs(im[0] + 2 * w) < 1e-12);
  CHECK(std::abs(im[1]) < 1e-12);
  CHECK(std::abs(im[2] - 2 * w) < 1e-12);

  // Spectrum property: eigenvalues are the i-fold eigenvalue sums, as a
  // multiset (Hausdorff distance below 1e-8), for random matrices.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int i = 2 + static_cast<int>(rng() % 2);
    const MatrixXd A = oracle::randn(n, n, rng);
    auto base = linalg::eigenvalues_of(A);
    auto table = kron::MultisetIndexTable::build(n, i);
    std::vector<std::complex<double>> sums;
    for (Eigen::Index r = 0; r < table.row_count(); ++r) {
      std::complex<double> acc = 0.0;
      for (int s : table.row(r)) acc += base[static_cast<std::size_t>(s)];
      sums.push_back(acc);
    }
    auto got = linalg::eigenvalues_of(kron::reduced_kron_sum(A, i));
    double hausdorff = 0.0;
    for (const auto& g : got) {
      double best = 1e300;
      for (const auto& s : sums) best = std::min(best, std::abs(g - s));
      hausdorff = std::max(hausdorff, best);
    }
    for (const auto& s : sums) {
      double best = 1e300;
      for (const auto& g : got) best = std::min(best, std::abs(g - s));
      hausdorff = std::max(hausdorff, best);
    }
    CHECK(hausdorff < 1e-8);
  }

  // Cross-check against the dense M A^{i} N assembly.
  {
    std::mt19937_64 r2(29);
    const MatrixXd A = oracle::randn(3, 3, r2);
    auto mn = kron::build_MN(kron::MultisetIndexTable::build(3, 2));
    const MatrixXd dense = mn.M * kron::successive_kron_sum(A, 2) * mn.N;
    CHECK((kron::reduced_kron_sum(A, 2) - dense).cwiseAbs().maxCoeff() <
          1e-13);
  }
}

TEST_CASE("binomial identities") {
  // Pascal chain C(s+t, t) = sum_k C(s-1+k, k), exact in integers.
  for (int s = 1; s <= 12; ++s) {
    for (int t = 1; t <= 12; ++t) {
      std::int64_t sum = 0;
      for (int k = 0; k <= t; ++k) sum += kron::binomial(s - 1 + k, k);
      CHECK(sum == kron::binomial(s + t, t));
    }
  }
  // Vandermonde form backing the degree-l channel count.
  for (int n = 1; n <= 5; ++n) {
    for (int m = 1; m <= 5; ++m) {
      for (int l = 2; l <= 6; ++l) {
        std::int64_t ml = 0;
        for (int i = 0; i <= l; ++i) {
          ml += kron::binomial(n - 1 + i, i) * kron::binomial(m - 1 + l - i, l - i);
        }
        CHECK(ml == kron::binomial(n + m - 1 + l, l));
      }
    }
  }
}

TEST_CASE("capacity guard") {
  CHECK_THROWS_AS((void)kron::pow_checked(100, 5, 2'000'000), Error);
  MatrixXd wide(1, 100);
  wide.setOnes();
  bool threw = false;
  try {
    (void)kron::reduced_power_matrix(wide, 4, 2'000'000);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::kCapacity;
  }
  CHECK(threw);
}

}  // TEST_SUITE
