// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include "psmm/sim_validate.hpp"

#include <cmath>
#include <fstream>

#include "psmm/kron_algebra.hpp"
#include "psmm/linalg_core.hpp"

namespace psmm::sim {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

}  // namespace

Trajectory simulate(const PolySystem& sys, const SignalGenerator& gen,
                    const Eigen::VectorXd& v0, double horizon, double h,
                    const Eigen::VectorXd& x0) {
  if (h <= 0.0 || horizon <= 0.0) {
    throw Error(ErrorCode::kPrecondition, "simulate: h > 0 and horizon > 0");
  }
  if (v0.size() != gen.sigma()) {
    throw Error(ErrorCode::kPrecondition, "simulate: v0 size != sigma");
  }
  const int n = sys.n();
  const int sigma = gen.sigma();
  VectorXd x = x0.size() ? x0 : VectorXd::Zero(n);
  if (x.size() != n) {
    throw Error(ErrorCode::kPrecondition, "simulate: x0 size != n");
  }
  const auto steps = static_cast<Index>(std::llround(horizon / h));

  Trajectory out;
  out.h = h;
  out.t.resize(steps + 1);
  out.v.resize(steps + 1, sigma);
  out.x.resize(steps + 1, n);
  out.y.resize(steps + 1, sys.p());

  VectorXd z(sigma + n);
  z << v0, x;
  auto field = [&](const VectorXd& zz) {
    VectorXd dz(sigma + n);
    const VectorXd vv = zz.head(sigma);
    dz.head(sigma) = gen.eval_s(vv);
    dz.tail(n) = sys.eval_f(zz.tail(n), gen.eval_u(vv));
    return dz;
  };
  for (Index k = 0;; ++k) {
    out.t[k] = k * h;
    out.v.row(k) = z.head(sigma);
    out.x.row(k) = z.tail(n);
    out.y.row(k) = sys.eval_h(z.tail(n), gen.eval_u(z.head(sigma)));
    if (k == steps) break;
    const VectorXd k1 = field(z);
    const VectorXd k2 = field(z + 0.5 * h * k1);
    const VectorXd k3 = field(z + 0.5 * h * k2);
    const VectorXd k4 = field(z + h * k3);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (z.tail(n).norm() > 1e6) {
      throw Error(ErrorCode::kDiverged,
                  "simulate: ||x|| exceeded 1e6 at t = " +
                      std::to_string((k + 1) * h));
    }
  }
  return out;
}

ErrorMetrics steady_state_error(const Trajectory& full,
                                const Trajectory& reduced,
                                double settle_fraction) {
  if (full.t.size() != reduced.t.size() || full.h != reduced.h) {
    throw Error(ErrorCode::kGridMismatch,
                "steady_state_error: trajectories on different grids");
  }
  if (settle_fraction <= 0.0 || settle_fraction >= 1.0) {
    throw Error(ErrorCode::kPrecondition,
                "steady_state_error: settle_fraction in (0,1)");
  }
  const Index total = full.t.size();
  const Index start = static_cast<Index>(settle_fraction * total);
  ErrorMetrics m;
  double acc = 0.0;
  for (Index k = start; k < total; ++k) {
    const double e = (full.y.row(k) - reduced.y.row(k)).norm();
    m.peak = std::max(m.peak, e);
    acc += e * e;
  }
  m.rms = std::sqrt(acc / static_cast<double>(total - start));
  return m;
}

MomentSeries estimate_moments_regression(std::span<const Trajectory> trajs,
                                         const SignalGenerator& gen, int kappa,
                                         const RegressionOptions& opts) {
  if (trajs.empty()) {
    throw Error(ErrorCode::kPrecondition, "regression: no trajectories");
  }
  const int sigma = gen.sigma();
  Index cols = 0;
  std::vector<Index> offs{0};
  for (int l = 1; l <= kappa; ++l) {
    cols += static_cast<Index>(kron::reduced_dim(sigma, l));
    offs.push_back(cols);
  }
  Index rows = 0;
  for (const auto& tr : trajs) {
    const Index total = tr.t.size();
    rows += total - static_cast<Index>(opts.settle_fraction * total);
  }
  const Index p = static_cast<Index>(trajs[0].y.cols());

  MatrixXd Phi(rows, cols);
  MatrixXd Yobs(rows, p);
  Index at = 0;
  for (const auto& tr : trajs) {
    const Index total = tr.t.size();
    for (Index k = static_cast<Index>(opts.settle_fraction * total); k < total;
         ++k) {
      const VectorXd v = tr.v.row(k);
      for (int l = 1; l <= kappa; ++l) {
        Phi.row(at).segment(offs[static_cast<std::size_t>(l - 1)],
                            offs[static_cast<std::size_t>(l)] -
                                offs[static_cast<std::size_t>(l - 1)]) =
            kron::reduced_power_vector(v, l);
      }
      Yobs.row(at) = tr.y.row(k);
      ++at;
    }
  }

  // Column normalization keeps the conditioning diagnostic about excitation.
  VectorXd scale(cols);
  for (Index j = 0; j < cols; ++j) {
    scale[j] = Phi.col(j).norm() / std::sqrt(static_cast<double>(rows));
    if (scale[j] == 0.0) scale[j] = 1.0;
    Phi.col(j) /= scale[j];
  }
  Eigen::BDCSVD<MatrixXd> svd(Phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond =
      sv[sv.size() - 1] > 0.0
          ? (sv[0] / sv[sv.size() - 1]) * (sv[0] / sv[sv.size() - 1])
          : std::numeric_limits<double>::infinity();
  if (cond > opts.condition_limit) {
    throw Error(ErrorCode::kIllConditioned,
                "regression: Gramian condition " + std::to_string(cond) +
                    " exceeds " + std::to_string(opts.condition_limit) +
                    " (insufficient excitation)");
  }
  const MatrixXd coef = svd.solve(Yobs);  // cols x p

  MomentSeries out;
  out.sigma = sigma;
  out.kappa = kappa;
  for (int l = 1; l <= kappa; ++l) {
    const Index j0 = offs[static_cast<std::size_t>(l - 1)];
    const Index w = offs[static_cast<std::size_t>(l)] - j0;
    MatrixXd Yl = coef.middleRows(j0, w).transpose();
    for (Index j = 0; j < w; ++j) Yl.col(j) /= scale[j0 + j];
    out.Y.push_back(std::move(Yl));
  }
  return out;
}

MomentSeries estimate_moments_regression(const Trajectory& traj,
                                         const SignalGenerator& gen, int kappa,
                                         const RegressionOptions& opts) {
  return estimate_moments_regression(std::span<const Trajectory>(&traj, 1),
                                     gen, kappa, opts);
}

PolySystem build_ladder(int sections) {
  if (sections < 3) {
    throw Error(ErrorCode::kPrecondition, "build_ladder: sections >= 3");
  }
  const int N = sections;
  PolySystem sys(N, 2, 1, 3);

  MatrixXd A = MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    A(i, i) = -2.0;
    if (i > 0) A(i, i - 1) = 1.0;
    if (i + 1 < N) A(i, i + 1) = 1.0;
  }
  MatrixXd B = MatrixXd::Zero(N, 2);
  B(0, 0) = 1.0;   // u_1 drives the first section
  B(0, 1) = -2.0;  // u_2 enters as x_1 + u_2 in the first two equations
  B(1, 1) = 1.0;
  sys.set_F(1, 0, A);
  sys.set_F(0, 1, B);

  auto t2 = kron::MultisetIndexTable::build(N, 2);
  auto t3 = kron::MultisetIndexTable::build(N, 3);
  MatrixXd F20 = MatrixXd::Zero(N, t2.row_count());
  MatrixXd F30 = MatrixXd::Zero(N, t3.row_count());
  for (int i = 0; i < N; ++i) {
    const int pair[2] = {i, i};
    const int triple[3] = {i, i, i};
    F20(i, t2.row_of_sorted(pair)) = -0.5;
    F30(i, t3.row_of_sorted(triple)) = -1.0 / 3.0;
  }
  sys.set_F(2, 0, F20);
  sys.set_F(3, 0, F30);

  MatrixXd C = MatrixXd::Zero(1, N);
  C(0, 0) = 1.0;
  sys.set_H(1, 0, C);
  sys.set_H(0, 1, MatrixXd::Zero(1, 2));
  return sys;
}

SignalGenerator build_ladder_generator(double omega1, double omega2) {
  SignalGenerator gen(4, 2, 2);
  MatrixXd S1 = MatrixXd::Zero(4, 4);
  S1(0, 1) = omega1;
  S1(1, 0) = -omega1;
  S1(2, 3) = omega2;
  S1(3, 2) = -omega2;
  gen.set_S(1, S1);
  MatrixXd U1(2, 4);
  U1 << 0, 1, 0, 1,
        1, 0, 1, 0;
  gen.set_U(1, U1);
  // U_2: u_1 picks up v_1 v_3, u_2 picks up v_2 v_4.
  auto t2 = kron::MultisetIndexTable::build(4, 2);
  MatrixXd U2 = MatrixXd::Zero(2, t2.row_count());
  const int m13[2] = {0, 2};
  const int m24[2] = {1, 3};
  U2(0, t2.row_of_sorted(m13)) = 1.0;
  U2(1, t2.row_of_sorted(m24)) = 1.0;
  gen.set_U(2, U2);
  gen.validate_spectrum();
  return gen;
}

Case1 build_case1() {
  PolySystem sys(6, 2, 1, 3);
  MatrixXd A = MatrixXd::Zero(6, 6);
  A(0, 0) = -0.5;
  A.block(1, 1, 2, 2) << -1.0, 0.2, -0.2, -1.0;
  A.block(3, 3, 2, 2) << -1.5, 0.1, -0.1, -1.5;
  A(5, 5) = -2.0;
  MatrixXd B(6, 2);
  B << 1, -2,
       1, 0,
       0, 1,
      -1, -1,
       0, -1,
       1, -1;
  MatrixXd C(1, 6);
  C << 1.3, 1, 0, 0, 1, -2;
  sys.set_F(1, 0, A);
  sys.set_F(0, 1, B);
  sys.set_H(1, 0, C);
  sys.set_H(0, 1, MatrixXd::Zero(1, 2));

  // Degree-2 blocks: F_2 is 6 x 36 = [F_{2,0} | F_{1,1} | F_{0,2}] with
  // nonzeros (1,2) = -1, (2,5) = 2, (3,3) = 0.5 (1-based, all inside F_{2,0});
  // H_2 has the single entry (1,6) = 3.
  MatrixXd F20 = MatrixXd::Zero(6, 21);
  F20(0, 1) = -1.0;  // x_1 x_2
  F20(1, 4) = 2.0;   // x_1 x_5
  F20(2, 2) = 0.5;   // x_1 x_3
  sys.set_F(2, 0, F20);
  MatrixXd H20 = MatrixXd::Zero(1, 21);
  H20(0, 5) = 3.0;   // x_1 x_6
  sys.set_H(2, 0, H20);

  SignalGenerator gen(5, 2, 1);
  MatrixXd S1 = MatrixXd::Zero(5, 5);
  S1.block(1, 1, 2, 2) << 0, 0.5, -0.5, 0;
  S1.block(3, 3, 2, 2) << 0, 1, -1, 0;
  gen.set_S(1, S1);
  MatrixXd U1(2, 5);
  U1 << 1, 1, 0, 1, 0,
       -1, 0, 1, 0, 1;
  gen.set_U(1, U1);
  gen.validate_spectrum();
  return Case1{std::move(sys), std::move(gen)};
}

void write_csv(const std::string& path, const Trajectory& full,
               const Trajectory& reduced) {
  if (full.t.size() != reduced.t.size()) {
    throw Error(ErrorCode::kGridMismatch, "write_csv: grid mismatch");
  }
  std::ofstream os(path);
  if (!os) {
    throw Error(ErrorCode::kPrecondition, "write_csv: cannot open " + path);
  }
  os << "t";
  for (Index j = 0; j < full.v.cols(); ++j) os << ",v" << (j + 1);
  for (Index j = 0; j < full.y.cols(); ++j) os << ",y" << (j + 1);
  for (Index j = 0; j < reduced.y.cols(); ++j) os << ",y_reduced" << (j + 1);
  os << "\n";
  os.precision(15);
  for (Index k = 0; k < full.t.size(); ++k) {
    os << full.t[k];
    for (Index j = 0; j < full.v.cols(); ++j) os << "," << full.v(k, j);
    for (Index j = 0; j < full.y.cols(); ++j) os << "," << full.y(k, j);
    for (Index j = 0; j < reduced.y.cols(); ++j) os << "," << reduced.y(k, j);
    os << "\n";
  }
}

}  // namespace psmm::sim
