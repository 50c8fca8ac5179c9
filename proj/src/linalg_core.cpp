// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include "psmm/linalg_core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "psmm/kron_algebra.hpp"

namespace psmm::linalg {

double rank_threshold(const Eigen::MatrixXd& M, double sigma_max) {
  return static_cast<double>(std::max(M.rows(), M.cols())) * sigma_max * 1e-12;
}

PinvResult min_norm_solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& rhs) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  PinvResult out;
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() ? out.singular_values[0] : 0.0;
  out.threshold = rank_threshold(M, smax);
  Eigen::MatrixXd ut_rhs = svd.matrixU().transpose() * rhs;
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
    if (out.singular_values[k] > out.threshold) {
      ut_rhs.row(k) /= out.singular_values[k];
      ++out.rank;
    } else {
      ut_rhs.row(k).setZero();
    }
  }
  out.solution = svd.matrixV() * ut_rhs;
  return out;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& M) {
  return min_norm_solve(M, Eigen::MatrixXd::Identity(M.rows(), M.rows()))
      .solution;
}

Eigen::MatrixXd basic_solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& rhs) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  const Eigen::Index rank =
      (svd.singularValues().array() > rank_threshold(M, smax)).count();
  // Solve on the first `rank` pivot columns, zero elsewhere.
  Eigen::MatrixXd qt_rhs = qr.householderQ().transpose() * rhs;
  Eigen::MatrixXd R = qr.matrixQR().topLeftCorner(rank, rank)
                          .triangularView<Eigen::Upper>();
  Eigen::MatrixXd y = R.triangularView<Eigen::Upper>().solve(
      qt_rhs.topRows(rank));
  Eigen::MatrixXd sol = Eigen::MatrixXd::Zero(M.cols(), rhs.cols());
  const auto& perm = qr.colsPermutation();
  for (Eigen::Index k = 0; k < rank; ++k) {
    sol.row(perm.indices()[k]) = y.row(k);
  }
  return sol;
}

Eigen::Index numeric_rank(const Eigen::MatrixXd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  const double smax = svd.singularValues()[0];
  return (svd.singularValues().array() > rank_threshold(M, smax)).count();
}

std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> out(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    out[static_cast<std::size_t>(k)] = es.eigenvalues()[k];
  }
  return out;
}

bool is_hurwitz(const Eigen::MatrixXd& A, double margin) {
  for (const auto& l : eigenvalues_of(A)) {
    if (l.real() >= -margin) return false;
  }
  return true;
}

Eigen::MatrixXd solve_sylvester(const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& S,
                                const Eigen::MatrixXd& Q) {
  const auto n = A.rows();
  const auto sp = S.rows();
  if (A.cols() != n || S.cols() != sp || Q.rows() != n || Q.cols() != sp) {
    throw Error(ErrorCode::kPrecondition, "sylvester: nonconformable shapes");
  }
  const auto la = eigenvalues_of(A);
  const auto ls = eigenvalues_of(S);
  double scale = 1.0;
  for (const auto& l : la) scale = std::max(scale, std::abs(l));
  for (const auto& l : ls) scale = std::max(scale, std::abs(l));
  for (const auto& a : la) {
    for (const auto& s : ls) {
      if (std::abs(a - s) < 1e-9 * scale) {
        throw Error(ErrorCode::kSpectraOverlap,
                    "sylvester: spectra of A and S intersect near " +
                        std::to_string(s.real()) + "+" +
                        std::to_string(s.imag()) + "j");
      }
    }
  }
  if (n * sp > 20000) {
    throw Error(ErrorCode::kCapacity, "sylvester: vectorized system too large");
  }
  Eigen::MatrixXd K = kron::kron(S.transpose(), Eigen::MatrixXd::Identity(n, n)) -
                      kron::kron(Eigen::MatrixXd::Identity(sp, sp), A);
  Eigen::Map<const Eigen::VectorXd> q(Q.data(), Q.size());
  Eigen::VectorXd x = K.partialPivLu().solve(q);
  Eigen::MatrixXd X = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, sp);
#ifndef NDEBUG
  const double res = (X * S - A * X - Q).norm();
  const double ref = 1.0 + A.norm() * X.norm() + X.norm() * S.norm() + Q.norm();
  if (res > 1e-9 * ref) {
    throw Error(ErrorCode::kNumeric, "sylvester: residual check failed");
  }
#endif
  return X;
}

Diagonalization diagonalize(const Eigen::MatrixXd& S) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(
      S.cast<std::complex<double>>());
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kDefectiveMatrix, "eigendecomposition failed");
  }
  const auto n = S.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (ev[a].imag() != ev[b].imag()) return ev[a].imag() < ev[b].imag();
    return ev[a].real() < ev[b].real();
  });
  Diagonalization out;
  out.P.resize(n, n);
  out.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = ev[order[static_cast<std::size_t>(k)]];
    Eigen::VectorXcd v = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    // Fix scale and phase: unit norm, largest-magnitude entry real positive.
    v /= v.norm();
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(v[j]) > best + 1e-14) {
        best = std::abs(v[j]);
        imax = j;
      }
    }
    std::complex<double> ph = v[imax] / std::abs(v[imax]);
    out.P.col(k) = v / ph;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.P);
  const double smin = svd.singularValues()[n - 1];
  out.conditioning = smin > 0 ? svd.singularValues()[0] / smin
                              : std::numeric_limits<double>::infinity();
  const Eigen::MatrixXcd recon =
      out.P * out.eigenvalues.asDiagonal() * out.P.inverse();
  const double tol = 1e-9 * std::max(1.0, S.norm());
  if (!recon.allFinite() ||
      (recon - S.cast<std::complex<double>>()).norm() > tol) {
    throw Error(ErrorCode::kDefectiveMatrix,
                "matrix is numerically defective (reconstruction residual)");
  }
  return out;
}

int observability_index(const Eigen::MatrixXd& U, const Eigen::MatrixXd& S) {
  const auto sigma = S.rows();
  Eigen::MatrixXd stacked = U;
  Eigen::MatrixXd row = U;
  for (int mu = 1; mu <= sigma; ++mu) {
    if (numeric_rank(stacked) == sigma) return mu;
    row = row * S;
    Eigen::MatrixXd next(stacked.rows() + row.rows(), sigma);
    next << stacked, row;
    stacked = std::move(next);
  }
  return numeric_rank(stacked) == sigma ? static_cast<int>(sigma) : -1;
}

StructuralDiagnostics structural_checks(const Eigen::MatrixXd& A,
                                        const Eigen::MatrixXd& B,
                                        const Eigen::MatrixXd& C,
                                        const Eigen::MatrixXd& U1,
                                        const Eigen::MatrixXd& S1) {
  StructuralDiagnostics d;
  const auto n = A.rows();
  d.max_real_part = -std::numeric_limits<double>::infinity();
  for (const auto& l : eigenvalues_of(A)) {
    d.max_real_part = std::max(d.max_real_part, l.real());
  }
  d.hurwitz = d.max_real_part < 0.0;

  Eigen::MatrixXd ctrb(n, n * B.cols());
  Eigen::MatrixXd blk = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * B.cols(), B.cols()) = blk;
    blk = A * blk;
  }
  d.controllability_rank = numeric_rank(ctrb);
  d.controllable = d.controllability_rank == n;

  Eigen::MatrixXd obsv(n * C.rows(), n);
  Eigen::MatrixXd rowblk = C;
  for (Eigen::Index k = 0; k < n; ++k) {
    obsv.middleRows(k * C.rows(), C.rows()) = rowblk;
    rowblk = rowblk * A;
  }
  d.observability_rank = numeric_rank(obsv);
  d.observable = d.observability_rank == n;

  d.rank_U1 = numeric_rank(U1);
  d.U1_full_rank = d.rank_U1 == std::min(U1.rows(), U1.cols());
  d.observability_index = observability_index(U1, S1);
  const auto sigma = S1.rows();
  const auto m = U1.rows();
  d.index_minimal = d.observability_index ==
                    static_cast<int>((sigma + m - 1) / m);
  {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(U1);
    d.sv_threshold =
        rank_threshold(U1, svd.singularValues().size() ? svd.singularValues()[0]
                                                       : 0.0);
  }
  return d;
}

}  // namespace psmm::linalg
