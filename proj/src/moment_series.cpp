// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include "psmm/moment_series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "psmm/linalg_core.hpp"

namespace psmm::series {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Iterates all tuples in {0..base-1}^len in flat (lexicographic) order.
class TupleCursor {
 public:
  TupleCursor(int base, int len) : base_(base), digits_(len, 0) {}
  const std::vector<int>& digits() const { return digits_; }
  bool advance() {
    for (int j = static_cast<int>(digits_.size()) - 1; j >= 0; --j) {
      if (++digits_[j] < base_) return true;
      digits_[j] = 0;
    }
    return false;
  }

 private:
  int base_;
  std::vector<int> digits_;
};

bool is_sorted_span(const int* b, int len) {
  for (int j = 1; j < len; ++j) {
    if (b[j] < b[j - 1]) return false;
  }
  return true;
}

/// Compositions of `total` into `parts` positive integers.
void for_each_composition(int total, int parts,
                          const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> c(parts, 1);
  c[parts - 1] = total - (parts - 1);
  if (c[parts - 1] < 1) return;
  // enumerate recursively
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == parts - 1) {
      c[pos] = rem;
      f(c);
      return;
    }
    for (int v = 1; v <= rem - (parts - pos - 1); ++v) {
      c[pos] = v;
      rec(pos + 1, rem - v);
    }
  };
  rec(0, total);
}

/// Reduced delta factor M_i (delta_{i,k}) for the series with coefficients
/// coef[d-1] (rows x C(sigma-1+d, d)), i factors, excess degree k:
/// shape C(rows-1+i, i) x sigma^(i+k). Entry (ms, tau) sums over compositions
/// rho of i+k the products prod_j coef[rho_j](t*_j, rank(seg_j)), nonzero only
/// when every segment of tau is nondecreasing.
MatrixXd reduced_delta(const std::vector<const MatrixXd*>& coef, int i, int k,
                       int sigma, std::int64_t cap) {
  const int rows_n = static_cast<int>(coef[0]->rows());
  auto row_table = kron::MultisetIndexTable::build(rows_n, i);
  const std::int64_t cols = kron::pow_checked(sigma, i + k, cap);
  MatrixXd out = MatrixXd::Zero(row_table.row_count(), cols);

  std::vector<kron::MultisetIndexTable> seg_tables;
  for (int d = 0; d <= i + k; ++d) {
    seg_tables.push_back(kron::MultisetIndexTable::build(sigma, d));
  }

  for_each_composition(i + k, i, [&](const std::vector<int>& rho) {
    for (int part : rho) {
      if (coef[part - 1] == nullptr) return;  // zero factor, term vanishes
    }
    TupleCursor cur(sigma, i + k);
    std::int64_t flat = 0;
    std::vector<Index> seg_rank(static_cast<std::size_t>(i));
    do {
      const auto& tau = cur.digits();
      bool ok = true;
      int off = 0;
      for (int j = 0; j < i; ++j) {
        const int len = rho[static_cast<std::size_t>(j)];
        if (!is_sorted_span(tau.data() + off, len)) {
          ok = false;
          break;
        }
        seg_rank[static_cast<std::size_t>(j)] = seg_tables[len].row_of_sorted(
            std::span<const int>(tau.data() + off, static_cast<std::size_t>(len)));
        off += len;
      }
      if (ok) {
        for (Index r = 0; r < row_table.row_count(); ++r) {
          auto sel = row_table.row(r);
          double prod = 1.0;
          for (int j = 0; j < i; ++j) {
            prod *= (*coef[rho[static_cast<std::size_t>(j)] - 1])(
                sel[j], seg_rank[static_cast<std::size_t>(j)]);
            if (prod == 0.0) break;
          }
          out(r, flat) += prod;
        }
      }
      ++flat;
    } while (cur.advance());
  });
  return out;
}

}  // namespace

DegreeLayout degree_layout(int n, int m, int l) {
  DegreeLayout out;
  out.l = l;
  out.offsets.push_back(0);
  for (int i = l; i >= 0; --i) {
    const int r = l - i;
    out.blocks.emplace_back(i, r);
    const Index rows = static_cast<Index>(kron::reduced_dim(n, i) *
                                          kron::reduced_dim(m, r));
    out.offsets.push_back(out.offsets.back() + rows);
  }
  out.m_l = out.offsets.back();
  return out;
}

Eigen::MatrixXd stacked_F(const PolySystem& sys, int l) {
  const auto lay = degree_layout(sys.n(), sys.m(), l);
  MatrixXd out = MatrixXd::Zero(sys.n(), lay.m_l);
  for (std::size_t b = 0; b < lay.blocks.size(); ++b) {
    const auto [i, r] = lay.blocks[b];
    if (const auto* blk = sys.F_ptr(i, r)) {
      out.middleCols(lay.offsets[b], lay.offsets[b + 1] - lay.offsets[b]) = *blk;
    }
  }
  return out;
}

Eigen::MatrixXd stacked_H(const PolySystem& sys, int l) {
  const auto lay = degree_layout(sys.n(), sys.m(), l);
  MatrixXd out = MatrixXd::Zero(sys.p(), lay.m_l);
  for (std::size_t b = 0; b < lay.blocks.size(); ++b) {
    const auto [i, r] = lay.blocks[b];
    if (const auto* blk = sys.H_ptr(i, r)) {
      out.middleCols(lay.offsets[b], lay.offsets[b + 1] - lay.offsets[b]) = *blk;
    }
  }
  return out;
}

Eigen::MatrixXd compute_coupling_W(const Eigen::MatrixXd& X1,
                                   const Eigen::MatrixXd& U1, int l,
                                   std::int64_t cap) {
  const int n = static_cast<int>(X1.rows());
  const int m = static_cast<int>(U1.rows());
  const int sigma = static_cast<int>(X1.cols());
  if (U1.cols() != sigma) {
    throw Error(ErrorCode::kPrecondition, "W_l: X1 and U1 column mismatch");
  }
  const auto lay = degree_layout(n, m, l);
  auto cols_table = kron::MultisetIndexTable::build(sigma, l);
  MatrixXd W = MatrixXd::Zero(lay.m_l, cols_table.row_count());

  for (std::size_t b = 0; b < lay.blocks.size(); ++b) {
    const auto [i, r] = lay.blocks[b];
    const MatrixXd Xi = kron::reduced_power_matrix(X1, i, cap);
    const MatrixXd Ur = kron::reduced_power_matrix(U1, r, cap);
    (void)kron::pow_checked(sigma, l, cap);
    auto block = W.middleRows(lay.offsets[b], Xi.rows() * Ur.rows());
    TupleCursor cur(sigma, l);
    do {
      const auto& tau = cur.digits();
      std::int64_t fx = 0;
      for (int j = 0; j < i; ++j) fx = fx * sigma + tau[j];
      std::int64_t fu = 0;
      for (int j = i; j < l; ++j) fu = fu * sigma + tau[j];
      const Index target = cols_table.row_of_tuple(tau);
      for (Index a = 0; a < Xi.rows(); ++a) {
        block.col(target).segment(a * Ur.rows(), Ur.rows()) +=
            Xi(a, fx) * Ur.col(fu);
      }
    } while (cur.advance());
  }
  return W;
}

Corrections compute_corrections(const std::vector<Eigen::MatrixXd>& X,
                                const PolySystem& sys,
                                const SignalGenerator& gen, int l,
                                std::int64_t cap) {
  const int n = sys.n();
  const int m = sys.m();
  const int p = sys.p();
  const int sigma = gen.sigma();
  if (static_cast<int>(X.size()) < l - 1) {
    throw Error(ErrorCode::kPrecondition,
                "compute_corrections: needs X_1..X_{l-1}", l);
  }
  const Index red_cols = static_cast<Index>(kron::reduced_dim(sigma, l));
  Corrections out;
  out.E = MatrixXd::Zero(n, red_cols);
  out.G = MatrixXd::Zero(p, red_cols);

  // Trailing term -X_1 S_l.
  if (const auto* Sl = gen.S_ptr(l)) {
    out.E -= X[0] * (*Sl);
  }
  if (l < 3) return out;  // E_2 = -X_1 S_2, G_2 = 0

  const std::int64_t full_cols = kron::pow_checked(sigma, l, cap);
  MatrixXd Ebr = MatrixXd::Zero(n, full_cols);
  MatrixXd Gbr = MatrixXd::Zero(p, full_cols);
  bool any = false;

  // Series factor tables: X by degree (always present), U by generator blocks.
  std::vector<const MatrixXd*> xf, uf;
  for (int d = 1; d <= l - 1; ++d) {
    xf.push_back(&X[static_cast<std::size_t>(d - 1)]);
    uf.push_back(gen.U_ptr(d));
  }

  for (int s = 2; s <= l - 1; ++s) {
    const int rho = l - s;
    for (int i = 0; i <= s; ++i) {
      const int r = s - i;
      const auto* Fir = sys.F_ptr(i, r);
      const auto* Hir = sys.H_ptr(i, r);
      if (Fir == nullptr && Hir == nullptr) continue;
      // (M_i (x) M_r) Delta_rho^{i,r} = sum_k RX_{i,k} (x) RU_{r,rho-k}.
      MatrixXd Dred;
      if (r == 0) {
        Dred = reduced_delta(xf, i, rho, sigma, cap);
      } else if (i == 0) {
        Dred = reduced_delta(uf, r, rho, sigma, cap);
      } else {
        for (int k = 0; k <= rho; ++k) {
          MatrixXd RX = reduced_delta(xf, i, k, sigma, cap);
          MatrixXd RU = reduced_delta(uf, r, rho - k, sigma, cap);
          if (Dred.size() == 0) {
            Dred = kron::kron(RX, RU);
          } else {
            Dred += kron::kron(RX, RU);
          }
        }
      }
      if (Fir) Ebr += (*Fir) * Dred;
      if (Hir) Gbr += (*Hir) * Dred;
      any = true;
    }

    // - X_s M_s (S_{l-s+1} M)^{{s}} contribution.
    const auto* Snext = gen.S_ptr(l - s + 1);
    if (Snext != nullptr) {
      any = true;
      const int seg_len = l - s + 1;
      auto seg_table = kron::MultisetIndexTable::build(sigma, seg_len);
      auto s_table = kron::MultisetIndexTable::build(sigma, s);
      const MatrixXd& Xs = X[static_cast<std::size_t>(s - 1)];
      std::vector<int> beta(static_cast<std::size_t>(s));
      TupleCursor cur(sigma, l);
      std::int64_t flat = 0;
      do {
        const auto& tau = cur.digits();
        for (int pos = 0; pos < s; ++pos) {
          if (!is_sorted_span(tau.data() + pos, seg_len)) continue;
          const Index segrank = seg_table.row_of_sorted(
              std::span<const int>(tau.data() + pos,
                                   static_cast<std::size_t>(seg_len)));
          for (int j = 0; j < pos; ++j) beta[static_cast<std::size_t>(j)] = tau[j];
          for (int j = pos + 1; j < s; ++j) {
            beta[static_cast<std::size_t>(j)] = tau[j + seg_len - 1];
          }
          for (int a = 0; a < sigma; ++a) {
            const double sval = (*Snext)(a, segrank);
            if (sval == 0.0) continue;
            beta[static_cast<std::size_t>(pos)] = a;
            if (!is_sorted_span(beta.data(), s)) continue;
            Ebr.col(flat) -= Xs.col(s_table.row_of_sorted(beta)) * sval;
          }
        }
        ++flat;
      } while (cur.advance());
    }
  }

  if (any) {
    // Right-multiply by N_l^sigma: fold tuple columns onto multiset columns.
    auto cols_table = kron::MultisetIndexTable::build(sigma, l);
    TupleCursor cur(sigma, l);
    std::int64_t flat = 0;
    do {
      const Index target = cols_table.row_of_tuple(cur.digits());
      out.E.col(target) += Ebr.col(flat);
      out.G.col(target) += Gbr.col(flat);
      ++flat;
    } while (cur.advance());
  }
  return out;
}

MomentSeries moment_recursion(const PolySystem& sys, const SignalGenerator& gen,
                              int kappa, const Options& opts) {
  if (kappa < 1) {
    throw Error(ErrorCode::kPrecondition, "moment_recursion: kappa >= 1");
  }
  if (sys.m() != gen.m()) {
    throw Error(ErrorCode::kPrecondition,
                "moment_recursion: system input count differs from generator");
  }
  const MatrixXd A = sys.A();
  const MatrixXd B = sys.B();
  const MatrixXd C = sys.C();
  const MatrixXd D = sys.D();

  MomentSeries out;
  out.sigma = gen.sigma();
  out.kappa = kappa;
  std::vector<MatrixXd> X;

  const MatrixXd U1 = gen.U1();
  X.push_back(linalg::solve_sylvester(A, gen.S1(), B * U1));
  out.Y.push_back(C * X[0] + D * U1);

  for (int l = 2; l <= kappa; ++l) {
    const MatrixXd Skl = kron::reduced_kron_sum(gen.S1(), l);
    const MatrixXd Ul = gen.U_block(l);
    MatrixXd Wl = compute_coupling_W(X[0], U1, l, opts.tuple_capacity);
    Corrections cor;
    try {
      cor = compute_corrections(X, sys, gen, l, opts.tuple_capacity);
    } catch (Error& e) {
      throw Error(e.code(), e.what(), l);
    }
    const MatrixXd Fl = stacked_F(sys, l);
    const MatrixXd Hl = stacked_H(sys, l);
    MatrixXd Xl =
        linalg::solve_sylvester(A, Skl, B * Ul + cor.E + Fl * Wl);
    out.Y.push_back(C * Xl + D * Ul + cor.G + Hl * Wl);
    if (opts.keep_audit) {
      out.W.push_back(Wl);
      out.E.push_back(cor.E);
      out.G.push_back(cor.G);
    }
    X.push_back(std::move(Xl));
  }
  if (opts.keep_X) out.X = std::move(X);
  return out;
}

FrequencyData frequency_transform_raw(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
    const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
    const Eigen::MatrixXd& S1, const Eigen::MatrixXd& Y_l,
    const Eigen::MatrixXd& U_l, const Eigen::MatrixXd& E_l,
    const Eigen::MatrixXd& G_l, int l) {
  FrequencyData out;
  out.l = l;
  const MatrixXd Skl = l == 1 ? S1 : kron::reduced_kron_sum(S1, l);
  auto diag = linalg::diagonalize(Skl);
  out.eigenvalues = diag.eigenvalues;
  out.P = diag.P;

  const auto n = A.rows();
  const Index cols = Skl.rows();
  out.Y_tilde = Y_l.cast<std::complex<double>>() * out.P;
  const MatrixXcd Ut = U_l.cast<std::complex<double>>() * out.P;
  MatrixXcd Et, Gt;
  if (l >= 2) {
    Et = E_l.cast<std::complex<double>>() * out.P;
    Gt = G_l.cast<std::complex<double>>() * out.P;
    out.H_script.resize(C.rows(), cols);
  }
  out.GU_tilde.resize(C.rows(), cols);
  MatrixXcd Yp(C.rows(), cols);
  const MatrixXcd Ac = A.cast<std::complex<double>>();
  const MatrixXcd Cc = C.cast<std::complex<double>>();
  for (Index j = 0; j < cols; ++j) {
    const std::complex<double> s = out.eigenvalues[j];
    Eigen::PartialPivLU<MatrixXcd> lu(
        s * MatrixXcd::Identity(n, n) - Ac);
    out.GU_tilde.col(j) =
        Cc * lu.solve(B.cast<std::complex<double>>() * Ut.col(j)) +
        D.cast<std::complex<double>>() * Ut.col(j);
    if (l >= 2) {
      out.H_script.col(j) = Cc * lu.solve(Et.col(j)) + Gt.col(j);
      Yp.col(j) = out.Y_tilde.col(j) - out.GU_tilde.col(j) - out.H_script.col(j);
    }
  }
  if (l >= 2) {
    const MatrixXcd Ypr = Yp * out.P.inverse();
    out.max_imag = Ypr.imag().cwiseAbs().maxCoeff();
    const double tol = 1e-8 * (1.0 + Ypr.real().norm());
    if (out.max_imag > tol) {
      throw Error(ErrorCode::kNumeric,
                  "frequency transform: Y'_l has imaginary residue " +
                      std::to_string(out.max_imag),
                  l);
    }
    out.Y_prime = Ypr.real();
  }
  return out;
}

FrequencyData frequency_transform(const MomentSeries& series,
                                  const PolySystem& sys,
                                  const SignalGenerator& gen, int l,
                                  std::int64_t cap) {
  if (!series.has_X()) {
    throw Error(ErrorCode::kPrecondition,
                "frequency_transform: series must carry X coefficients");
  }
  Corrections cor;
  if (l >= 2) {
    std::vector<MatrixXd> lower(series.X.begin(),
                                series.X.begin() + (l - 1));
    cor = compute_corrections(lower, sys, gen, l, cap);
  } else {
    cor.E = MatrixXd::Zero(sys.n(), gen.sigma());
    cor.G = MatrixXd::Zero(sys.p(), gen.sigma());
  }
  return frequency_transform_raw(sys.A(), sys.B(), sys.C(), sys.D(), gen.S1(),
                                 series.Y_at(l), gen.U_block(l), cor.E, cor.G,
                                 l);
}

Eigen::VectorXd evaluate_series(const MomentSeries& series,
                                const Eigen::VectorXd& v) {
  VectorXd out = VectorXd::Zero(series.Y.front().rows());
  for (int l = 1; l <= series.kappa; ++l) {
    out += series.Y_at(l) * kron::reduced_power_vector(v, l);
  }
  return out;
}

double degree_residual(const MomentSeries& series, const PolySystem& sys,
                       const SignalGenerator& gen, int l, std::int64_t cap) {
  if (!series.has_X()) {
    throw Error(ErrorCode::kPrecondition, "degree_residual: series lacks X");
  }
  const MatrixXd A = sys.A();
  const MatrixXd B = sys.B();
  const MatrixXd& Xl = series.X_at(l);
  if (l == 1) {
    const MatrixXd R = Xl * gen.S1() - A * Xl - B * gen.U1();
    return R.norm() / (1.0 + Xl.norm() + gen.U1().norm());
  }
  std::vector<MatrixXd> lower(series.X.begin(), series.X.begin() + (l - 1));
  const auto cor = compute_corrections(lower, sys, gen, l, cap);
  const MatrixXd Wl = compute_coupling_W(series.X_at(1), gen.U1(), l, cap);
  const MatrixXd R = Xl * kron::reduced_kron_sum(gen.S1(), l) - A * Xl -
                     B * gen.U_block(l) - cor.E - stacked_F(sys, l) * Wl;
  return R.norm() / (1.0 + Xl.norm() + cor.E.norm() + Wl.norm());
}

}  // namespace psmm::series
