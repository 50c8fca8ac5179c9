// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include "psmm/linear_matching.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "psmm/moment_series.hpp"

namespace psmm::matching {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

MatrixXd random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixXd out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = dist(rng);
  }
  return out;
}

std::vector<std::complex<double>> default_eigenvalues(int n) {
  std::vector<std::complex<double>> out;
  for (int k = 0; k < n; ++k) {
    out.emplace_back(-0.5 - 1.0 * (k + 1) / n, 0.0);
  }
  return out;
}

/// Solves Z * M = R for Z with the min-norm convention (Z = R M^+).
MatrixXd solve_right(const MatrixXd& M, const MatrixXd& R) {
  return linalg::min_norm_solve(M.transpose(), R.transpose())
      .solution.transpose();
}

PolySystem degree1_system(const MatrixXd& A, const MatrixXd& B,
                          const MatrixXd& C, const MatrixXd& D) {
  PolySystem sys(static_cast<int>(A.rows()), static_cast<int>(B.cols()),
                 static_cast<int>(C.rows()), 1);
  sys.set_F(1, 0, A);
  sys.set_F(0, 1, B);
  sys.set_H(1, 0, C);
  sys.set_H(0, 1, D);
  return sys;
}

int ceil_div(std::int64_t a, std::int64_t b) {
  return static_cast<int>((a + b - 1) / b);
}

}  // namespace

Eigen::MatrixXd block_diag_from_eigenvalues(
    const std::vector<std::complex<double>>& eigenvalues) {
  std::vector<std::complex<double>> pending(eigenvalues);
  std::vector<MatrixXd> blocks;
  const double tol = 1e-12;
  while (!pending.empty()) {
    const auto l = pending.front();
    pending.erase(pending.begin());
    if (std::abs(l.imag()) <= tol) {
      blocks.push_back(MatrixXd::Constant(1, 1, l.real()));
      continue;
    }
    auto conj_it = std::find_if(pending.begin(), pending.end(), [&](auto c) {
      return std::abs(c.real() - l.real()) <= tol &&
             std::abs(c.imag() + l.imag()) <= tol;
    });
    if (conj_it == pending.end()) {
      throw Error(ErrorCode::kPrecondition,
                  "eigenvalue list is not closed under conjugation");
    }
    pending.erase(conj_it);
    MatrixXd blk(2, 2);
    const double b = std::abs(l.imag());
    blk << l.real(), b, -b, l.real();
    blocks.push_back(blk);
  }
  Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  MatrixXd out = MatrixXd::Zero(n, n);
  Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

Eigen::MatrixXd stacked_identity_B(int n, int m) {
  MatrixXd B = MatrixXd::Zero(n, m);
  for (int k = 0; k < n; ++k) B(k, k % m) = 1.0;
  return B;
}

Eigen::MatrixXd stacked_identity_C(int p, int n) {
  MatrixXd C = MatrixXd::Zero(p, n);
  for (int k = 0; k < n; ++k) C(k % p, k) = 1.0;
  return C;
}

Adjugate faddeev_leverrier(const Eigen::MatrixXd& A) {
  const Index n = A.rows();
  Adjugate out;
  out.char_poly = VectorXd::Zero(n + 1);
  out.char_poly[n] = 1.0;
  MatrixXd Ak = MatrixXd::Identity(n, n);
  out.A_coeffs.push_back(Ak);
  for (Index k = 1; k <= n; ++k) {
    const MatrixXd AAk = A * Ak;
    const double ak = -AAk.trace() / static_cast<double>(k);
    out.char_poly[n - k] = ak;
    if (k < n) {
      Ak = AAk + ak * MatrixXd::Identity(n, n);
      out.A_coeffs.push_back(Ak);
    }
  }
  return out;
}

Eigen::VectorXd minimal_polynomial(const Eigen::MatrixXd& A) {
  const Index n = A.rows();
  MatrixXd krylov(n * n, n + 1);
  MatrixXd Ak = MatrixXd::Identity(n, n);
  for (Index k = 0; k <= n; ++k) {
    krylov.col(k) = Eigen::Map<const VectorXd>(Ak.data(), n * n);
    Ak = A * Ak;
  }
  for (Index k = 1; k <= n; ++k) {
    const MatrixXd lead = krylov.leftCols(k);
    auto fit = linalg::min_norm_solve(lead, krylov.col(k));
    const double res = (lead * fit.solution - krylov.col(k)).norm();
    if (res <= 1e-9 * (1.0 + krylov.col(k).norm())) {
      VectorXd d = VectorXd::Zero(k + 1);
      d[k] = 1.0;
      d.head(k) = -fit.solution.col(0);
      return d;
    }
  }
  // Full degree: the characteristic polynomial.
  return faddeev_leverrier(A).char_poly;
}

OrderBound order_bound(int sigma, int m, int p, Method method, bool D_zero,
                       int kappa) {
  if (m >= sigma) {
    throw Error(ErrorCode::kPrecondition,
                "order_bound: requires m < sigma (see the sigma <= m fit)");
  }
  OrderBound out;
  const int ceil_sm = ceil_div(sigma, m);
  out.bound_method1 = D_zero ? sigma : sigma - m;
  out.bound_method2 = D_zero ? p * ceil_sm : p * (ceil_sm - 1);
  if (p < m) {
    const double threshold = D_zero
                                 ? static_cast<double>(m) * p / (m - p)
                                 : static_cast<double>(m) * m / (m - p);
    out.table_subcondition = sigma >= threshold;
  }
  if (out.bound_method1 < out.bound_method2) {
    out.table_verdict = 1;
  } else if (out.bound_method2 < out.bound_method1) {
    out.table_verdict = 2;
  }

  out.degree1_bound =
      method == Method::kI ? out.bound_method1 : out.bound_method2;
  out.n_min = std::max(out.degree1_bound, 1);

  if (method == Method::kII && kappa >= 2) {
    const std::int64_t cs = kron::binomial(sigma - 1 + kappa, kappa);
    auto inductive_ok = [&](int n) {
      const std::int64_t cm = kron::binomial(m + n - 1 + kappa, kappa);
      const int rhs = D_zero ? p * ceil_div(cs, cm)
                             : p * (ceil_div(cs, cm) - 1);
      return n >= rhs;
    };
    int n = out.n_min;
    while (!inductive_ok(n)) ++n;
    out.kappa_bound = n;
    out.n_min = std::max(out.n_min, n);

    auto corollary_ok = [&](int n) {
      const double ratio = std::pow(static_cast<double>(sigma) / (m + n),
                                    static_cast<double>(kappa));
      const int rhs = p * (static_cast<int>(std::ceil(ratio)) - 1);
      return n >= rhs;
    };
    int nc = out.degree1_bound;
    while (!corollary_ok(nc)) ++nc;
    out.corollary_bound = nc;
  }
  return out;
}

LinearFit method1_fit(const MatchSpec& spec) {
  const int sigma = static_cast<int>(spec.S1.rows());
  const int m = static_cast<int>(spec.U1.rows());
  const int p = static_cast<int>(spec.Y1o.rows());
  if (m >= sigma) {
    throw Error(ErrorCode::kPrecondition,
                "method1_fit: m < sigma required (use small_sigma_fit)");
  }
  const auto bound = order_bound(sigma, m, p, Method::kI, spec.force_D_zero, 1);
  const int n = spec.order >= 1 ? spec.order : bound.n_min;
  if (n < bound.degree1_bound) {
    throw Error(ErrorCode::kPrecondition,
                "method1_fit: order " + std::to_string(n) +
                    " below the admissible bound " +
                    std::to_string(bound.degree1_bound));
  }

  std::mt19937_64 rng(spec.seed);
  const bool constructive_D0 = spec.force_D_zero && !spec.preselected_A &&
                               !spec.preselected_B && spec.eigenvalues.empty();
  if (constructive_D0) {
    // A = S_1 - B U_1 with X_1 = I (padded to order n when n > sigma).
    MatrixXd B0 = spec.U1.transpose();
    for (int attempt = 0;; ++attempt) {
      const MatrixXd A0 = spec.S1 - B0 * spec.U1;
      if (linalg::is_hurwitz(A0)) break;
      if (attempt >= spec.max_reseed) {
        throw Error(ErrorCode::kRankDeficientOmega,
                    "method1_fit: no Hurwitz S_1 - B U_1 found; (U_1, S_1) "
                    "likely unobservable");
      }
      B0 = random_matrix(sigma, m, rng);
    }
    MatrixXd A = MatrixXd::Zero(n, n);
    A.topLeftCorner(sigma, sigma) = spec.S1 - B0 * spec.U1;
    for (int k = sigma; k < n; ++k) A(k, k) = -1.0 - (k - sigma);
    MatrixXd B = MatrixXd::Zero(n, m);
    B.topRows(sigma) = B0;
    MatrixXd X1 = MatrixXd::Zero(n, sigma);
    X1.topLeftCorner(sigma, sigma).setIdentity();
    MatrixXd C = MatrixXd::Zero(p, n);
    C.leftCols(sigma) = spec.Y1o;
    const MatrixXd D = MatrixXd::Zero(p, m);
    LinearFit fit{degree1_system(A, B, C, D), X1, 0.0, 0, 0, 0, {}};
    fit.omega_rank = sigma;
    fit.diagnostics = linalg::structural_checks(A, B, C, spec.U1, spec.S1);
    return fit;
  }

  MatrixXd A;
  if (spec.preselected_A) {
    A = *spec.preselected_A;
  } else {
    auto eigs = spec.eigenvalues.empty() ? default_eigenvalues(n)
                                         : spec.eigenvalues;
    A = block_diag_from_eigenvalues(eigs);
    if (A.rows() != n) {
      throw Error(ErrorCode::kPrecondition,
                  "method1_fit: eigenvalue count does not match order");
    }
    if (!linalg::is_hurwitz(A)) {
      throw Error(ErrorCode::kPrecondition,
                  "method1_fit: requested eigenvalues are not Hurwitz");
    }
  }
  MatrixXd B = spec.preselected_B ? *spec.preselected_B
                                  : stacked_identity_B(n, m);
  const bool b_pinned = spec.preselected_B.has_value();

  for (int attempt = 0;; ++attempt) {
    const MatrixXd X1 = linalg::solve_sylvester(A, spec.S1, B * spec.U1);
    MatrixXd C, D;
    Index omega_rank = 0;
    bool ok = false;
    if (spec.force_D_zero) {
      omega_rank = linalg::numeric_rank(X1);
      if (omega_rank == sigma) {
        C = solve_right(X1, spec.Y1o);
        D = MatrixXd::Zero(p, m);
        ok = true;
      }
    } else {
      MatrixXd Omega(n + m, sigma);
      Omega << X1, spec.U1;
      omega_rank = linalg::numeric_rank(Omega);
      if (omega_rank == sigma) {
        const MatrixXd CD = solve_right(Omega, spec.Y1o);
        C = CD.leftCols(n);
        D = CD.rightCols(m);
        ok = true;
      }
    }
    if (ok) {
      LinearFit fit{degree1_system(A, B, C, D), X1, 0.0, 0, 0, 0, {}};
      fit.omega_rank = omega_rank;
      fit.residual = (C * X1 + D * spec.U1 - spec.Y1o).norm() /
                     (1.0 + spec.Y1o.norm());
      fit.reseeds_used = attempt;
      fit.diagnostics = linalg::structural_checks(A, B, C, spec.U1, spec.S1);
      return fit;
    }
    if (b_pinned || attempt >= spec.max_reseed) {
      throw Error(ErrorCode::kRankDeficientOmega,
                  spec.force_D_zero
                      ? "method1_fit: X_1 lost column rank (D = 0 path)"
                      : "method1_fit: Omega_1 = [X_1; U_1] lost column rank");
    }
    B = random_matrix(n, m, rng);
  }
}

LinearFit method2_fit(const MatchSpec& spec) {
  const int sigma = static_cast<int>(spec.S1.rows());
  const int m = static_cast<int>(spec.U1.rows());
  const int p = static_cast<int>(spec.Y1o.rows());
  if (m >= sigma) {
    throw Error(ErrorCode::kPrecondition,
                "method2_fit: m < sigma required (use small_sigma_fit)");
  }
  const auto bound = order_bound(sigma, m, p, Method::kII, spec.force_D_zero, 1);
  const int n = spec.order >= 1 ? spec.order : bound.n_min;
  if (n < bound.degree1_bound) {
    throw Error(ErrorCode::kPrecondition,
                "method2_fit: order " + std::to_string(n) +
                    " below the admissible bound " +
                    std::to_string(bound.degree1_bound));
  }

  std::mt19937_64 rng(spec.seed);
  MatrixXd A;
  if (spec.preselected_A) {
    A = *spec.preselected_A;
  } else {
    auto eigs = spec.eigenvalues.empty() ? default_eigenvalues(n)
                                         : spec.eigenvalues;
    A = block_diag_from_eigenvalues(eigs);
    if (A.rows() != n) {
      throw Error(ErrorCode::kPrecondition,
                  "method2_fit: eigenvalue count does not match order");
    }
    if (!linalg::is_hurwitz(A)) {
      throw Error(ErrorCode::kPrecondition,
                  "method2_fit: requested eigenvalues are not Hurwitz");
    }
  }
  MatrixXd C = spec.preselected_C ? *spec.preselected_C
                                  : stacked_identity_C(p, n);
  const bool c_pinned = spec.preselected_C.has_value();

  const MatrixXd In = MatrixXd::Identity(n, n);
  for (int attempt = 0;; ++attempt) {
    // Xi'_1 = (I sigma (x) C) [(-A) (+) S1^T]^-1 (U1^T (x) I_n).
    MatrixXd K = kron::kron(MatrixXd::Identity(sigma, sigma), -A) +
                 kron::kron(spec.S1.transpose(), In);
    Eigen::PartialPivLU<MatrixXd> lu(K);
    const MatrixXd Z = lu.solve(kron::kron(spec.U1.transpose(), In));
    MatrixXd XiP(p * sigma, Z.cols());
    for (int blk = 0; blk < sigma; ++blk) {
      XiP.middleRows(blk * p, p) = C * Z.middleRows(blk * n, n);
    }
    MatrixXd Xi;
    if (spec.force_D_zero) {
      Xi = XiP;
    } else {
      Xi.resize(p * sigma, Z.cols() + p * m);
      Xi << XiP, kron::kron(spec.U1.transpose(),
                            MatrixXd::Identity(p, p));
    }
    const Index xi_rank = linalg::numeric_rank(Xi);
    if (xi_rank == p * sigma) {
      const Eigen::Map<const VectorXd> y1(spec.Y1o.data(), spec.Y1o.size());
      const VectorXd sol = linalg::min_norm_solve(Xi, y1).solution;
      const MatrixXd B =
          Eigen::Map<const MatrixXd>(sol.data(), n, m);
      MatrixXd D = MatrixXd::Zero(p, m);
      if (!spec.force_D_zero) {
        D = Eigen::Map<const MatrixXd>(sol.data() + n * m, p, m);
      }
      const MatrixXd X1 = linalg::solve_sylvester(A, spec.S1, B * spec.U1);
      LinearFit fit{degree1_system(A, B, C, D), X1, 0.0, 0, 0, 0, {}};
      fit.xi_rank = xi_rank;
      fit.residual = (C * X1 + D * spec.U1 - spec.Y1o).norm() /
                     (1.0 + spec.Y1o.norm());
      fit.reseeds_used = attempt;
      fit.diagnostics = linalg::structural_checks(A, B, C, spec.U1, spec.S1);
      return fit;
    }
    if (c_pinned || attempt >= spec.max_reseed) {
      throw Error(ErrorCode::kRankDeficientXi,
                  "method2_fit: Xi_1 lost row rank (observability index of "
                  "(U_1, S_1) likely exceeds ceil(sigma/m))");
    }
    C = random_matrix(p, n, rng);
  }
}

LinearFit small_sigma_fit(const MatchSpec& spec, SmallSigmaMode mode,
                          const std::optional<Eigen::MatrixXd>& X1_preset) {
  const int sigma = static_cast<int>(spec.S1.rows());
  const int m = static_cast<int>(spec.U1.rows());
  const int p = static_cast<int>(spec.Y1o.rows());
  if (sigma > m) {
    throw Error(ErrorCode::kPrecondition, "small_sigma_fit: requires sigma <= m");
  }
  if (linalg::numeric_rank(spec.U1) != sigma) {
    throw Error(ErrorCode::kPrecondition,
                "small_sigma_fit: U_1 must have full column rank");
  }
  const int n = std::max(spec.order, 1);
  MatrixXd A;
  if (spec.preselected_A) {
    A = *spec.preselected_A;
  } else {
    A = block_diag_from_eigenvalues(
        spec.eigenvalues.empty() ? default_eigenvalues(n) : spec.eigenvalues);
  }
  MatrixXd C = spec.preselected_C ? *spec.preselected_C
                                  : stacked_identity_C(p, static_cast<int>(A.rows()));

  MatrixXd X1, B, D;
  switch (mode) {
    case SmallSigmaMode::kFreeX1: {
      X1 = X1_preset ? *X1_preset : MatrixXd::Zero(A.rows(), sigma);
      MatrixXd rhs(A.rows() + p, sigma);
      rhs << X1 * spec.S1 - A * X1, spec.Y1o - C * X1;
      const MatrixXd BD = solve_right(spec.U1, rhs);
      B = BD.topRows(A.rows());
      D = BD.bottomRows(p);
      break;
    }
    case SmallSigmaMode::kBZero: {
      X1 = MatrixXd::Zero(A.rows(), sigma);
      B = MatrixXd::Zero(A.rows(), m);
      D = solve_right(spec.U1, spec.Y1o);
      break;
    }
    case SmallSigmaMode::kDZero: {
      if (linalg::numeric_rank(C) != p) {
        throw Error(ErrorCode::kPrecondition,
                    "small_sigma_fit: D = 0 mode needs C of full row rank");
      }
      X1 = linalg::min_norm_solve(C, spec.Y1o).solution;
      B = solve_right(spec.U1, X1 * spec.S1 - A * X1);
      D = MatrixXd::Zero(p, m);
      break;
    }
  }
  LinearFit fit{degree1_system(A, B, C, D), X1, 0.0, 0, 0, 0, {}};
  fit.residual =
      std::max((X1 * spec.S1 - A * X1 - B * spec.U1).norm(),
               (C * X1 + D * spec.U1 - spec.Y1o).norm()) /
      (1.0 + spec.Y1o.norm());
  if (fit.residual > 1e-10) {
    throw Error(ErrorCode::kNumeric, "small_sigma_fit: residual check failed");
  }
  fit.diagnostics = linalg::structural_checks(A, B, C, spec.U1, spec.S1);
  return fit;
}

namespace {

/// Horner evaluation of d(S) for a matrix argument.
MatrixXd poly_of_matrix(const VectorXd& d, const MatrixXd& S) {
  const Index s = S.rows();
  MatrixXd out = d[d.size() - 1] * MatrixXd::Identity(s, s);
  for (Index k = d.size() - 2; k >= 0; --k) {
    out = out * S + d[k] * MatrixXd::Identity(s, s);
  }
  return out;
}

}  // namespace

CanonicalDecomposition canonical_decomposition(const PolySystem& degree1,
                                               const SignalGenerator& gen,
                                               DenominatorCase which) {
  const MatrixXd A = degree1.A();
  const MatrixXd B = degree1.B();
  const MatrixXd C = degree1.C();
  const MatrixXd D = degree1.D();
  const MatrixXd S1 = gen.S1();
  const MatrixXd U1 = gen.U1();
  const int n = degree1.n();
  const int m = degree1.m();
  const int p = degree1.p();

  CanonicalDecomposition out;
  if (which == DenominatorCase::kCharPoly) {
    const auto fl = faddeev_leverrier(A);
    out.d = fl.char_poly;
    out.n_d = n;
    out.Theta.resize(p, m * (n + 1));
    for (int k = 0; k < n; ++k) {
      // Theta_k = C A_{n-1-k} B + a_{n-k} D; a_{n-k} is the s^k coefficient.
      out.Theta.middleCols(k * m, m) =
          C * fl.A_coeffs[static_cast<std::size_t>(n - 1 - k)] * B +
          fl.char_poly[k] * D;
    }
    out.Theta.rightCols(m) = D;
    out.script_C.resize(n + m, m * (n + 1));
    for (int k = 0; k < n; ++k) {
      out.script_C.block(0, k * m, n, m) =
          fl.A_coeffs[static_cast<std::size_t>(n - 1 - k)] * B;
      out.script_C.block(n, k * m, m, m) =
          fl.char_poly[k] * MatrixXd::Identity(m, m);
    }
    out.script_C.block(0, n * m, n, m).setZero();
    out.script_C.block(n, n * m, m, m).setIdentity();
  } else {
    // Kalman-minimal realization, then d = its minimal polynomial.
    MatrixXd ctrb(n, n * m);
    MatrixXd blk = B;
    for (int k = 0; k < n; ++k) {
      ctrb.middleCols(static_cast<Index>(k) * m, m) = blk;
      blk = A * blk;
    }
    Eigen::BDCSVD<MatrixXd> svd_c(ctrb, Eigen::ComputeThinU);
    const Index rc =
        (svd_c.singularValues().array() >
         linalg::rank_threshold(ctrb, svd_c.singularValues()[0]))
            .count();
    const MatrixXd V = svd_c.matrixU().leftCols(rc);
    const MatrixXd Ac = V.transpose() * A * V;
    const MatrixXd Cc = C * V;

    MatrixXd obsv(static_cast<Index>(p) * rc, rc);
    MatrixXd rowblk = Cc;
    for (Index k = 0; k < rc; ++k) {
      obsv.middleRows(k * p, p) = rowblk;
      rowblk = rowblk * Ac;
    }
    Eigen::BDCSVD<MatrixXd> svd_o(obsv, Eigen::ComputeThinV);
    const Index ro =
        (svd_o.singularValues().array() >
         linalg::rank_threshold(obsv, svd_o.singularValues()[0]))
            .count();
    const MatrixXd W = svd_o.matrixV().leftCols(ro);
    const MatrixXd Amin = W.transpose() * Ac * W;

    out.d = minimal_polynomial(Amin);
    out.n_d = static_cast<int>(out.d.size()) - 1;
    // Numerator coefficients by sampling d(s) G_1(s) on a circle enclosing
    // the spectrum (inverse DFT; exact for a degree <= n_d matrix polynomial).
    double rho = 1.0;
    for (const auto& l : linalg::eigenvalues_of(A)) {
      rho = std::max(rho, 2.0 * std::abs(l) + 1.0);
    }
    const int samples = out.n_d + 1;
    std::vector<Eigen::MatrixXcd> vals;
    const MatrixXcd Acx = A.cast<std::complex<double>>();
    for (int j = 0; j < samples; ++j) {
      const std::complex<double> z =
          rho * std::polar(1.0, 2.0 * M_PI * j / samples);
      std::complex<double> dz = out.d[out.n_d];
      for (int k = out.n_d - 1; k >= 0; --k) dz = dz * z + out.d[k];
      const MatrixXcd G =
          C.cast<std::complex<double>>() *
              (z * MatrixXcd::Identity(n, n) - Acx)
                  .partialPivLu()
                  .solve(B.cast<std::complex<double>>()) +
          D.cast<std::complex<double>>();
      vals.push_back(dz * G);
    }
    out.Theta.resize(p, m * samples);
    for (int k = 0; k < samples; ++k) {
      MatrixXcd coef = MatrixXcd::Zero(p, m);
      for (int j = 0; j < samples; ++j) {
        coef += vals[static_cast<std::size_t>(j)] *
                std::polar(1.0, -2.0 * M_PI * j * k / samples);
      }
      coef /= static_cast<double>(samples) * std::pow(rho, k);
      out.Theta.middleCols(static_cast<Index>(k) * m, m) = coef.real();
    }
  }

  // R = d(S_1)^-1; singular exactly when A and S_1 share an eigenvalue.
  const MatrixXd dS = poly_of_matrix(out.d, S1);
  Eigen::FullPivLU<MatrixXd> lu(dS);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kSpectraOverlap,
                "canonical_decomposition: d(S_1) singular - A and S_1 share "
                "an eigenvalue");
  }
  out.R = lu.inverse();

  out.U_stack.resize(static_cast<Index>(m) * (out.n_d + 1), S1.rows());
  MatrixXd urow = U1;
  for (int k = 0; k <= out.n_d; ++k) {
    out.U_stack.middleRows(static_cast<Index>(k) * m, m) = urow;
    urow = urow * S1;
  }

  const MatrixXd X1 = linalg::solve_sylvester(A, S1, B * U1);
  const MatrixXd Y1 = C * X1 + D * U1;
  out.identity_residual =
      (Y1 - out.Theta * out.U_stack * out.R).norm() / (1.0 + Y1.norm());
  if (out.identity_residual > 1e-8) {
    throw Error(ErrorCode::kNumeric,
                "canonical_decomposition: identity residual " +
                    std::to_string(out.identity_residual));
  }
  return out;
}

}  // namespace psmm::matching
