// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "psmm/linalg_core.hpp"
#include "psmm/moment_series.hpp"
#include "psmm/sim_validate.hpp"

using namespace psmm;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("sim_validate") {

TEST_CASE("builders") {
  const auto ladder = sim::build_ladder(3);
  MatrixXd Aexp(3, 3);
  Aexp << -2, 1, 0,
           1, -2, 1,
           0, 1, -2;
  CHECK((ladder.A() - Aexp).cwiseAbs().maxCoeff() == 0.0);
  MatrixXd Bexp(3, 2);
  Bexp << 1, -2, 0, 1, 0, 0;
  CHECK((ladder.B() - Bexp).cwiseAbs().maxCoeff() == 0.0);
  CHECK(ladder.C()(0, 0) == 1.0);
  CHECK(ladder.C().sum() == 1.0);

  // Tridiagonal conservation: interior row sums 0, boundary rows -1.
  const auto big = sim::build_ladder(8);
  const MatrixXd A8 = big.A();
  for (int i = 0; i < 8; ++i) {
    const double rs = A8.row(i).sum();
    if (i == 0 || i == 7) {
      CHECK(rs == -1.0);
    } else {
      CHECK(rs == 0.0);
    }
  }
  // Quadratic and cubic resistor coefficients on the (i,i) / (i,i,i) columns.
  auto t2 = kron::MultisetIndexTable::build(8, 2);
  auto t3 = kron::MultisetIndexTable::build(8, 3);
  const MatrixXd F20 = big.F_block(2, 0);
  const MatrixXd F30 = big.F_block(3, 0);
  for (int i = 0; i < 8; ++i) {
    const int pair[2] = {i, i};
    const int triple[3] = {i, i, i};
    CHECK(F20(i, t2.row_of_sorted(pair)) == -0.5);
    CHECK(F30(i, t3.row_of_sorted(triple)) == doctest::Approx(-1.0 / 3.0));
    CHECK(F20.row(i).cwiseAbs().sum() == 0.5);
  }

  const auto c1 = sim::build_case1();
  auto eig = linalg::eigenvalues_of(c1.system.A());
  double found = 0;
  for (const auto& l : eig) {
    if (std::abs(l - std::complex<double>(-1.0, 0.2)) < 1e-12) found += 1;
    if (std::abs(l - std::complex<double>(-0.5, 0.0)) < 1e-12) found += 1;
    if (std::abs(l - std::complex<double>(-2.0, 0.0)) < 1e-12) found += 1;
  }
  CHECK(found == 3);
  CHECK(c1.system.F_block(2, 0)(1, 4) == 2.0);   // published F_2(2,5) = 2
  CHECK(c1.system.H_block(2, 0)(0, 5) == 3.0);   // published H_2(1,6) = 3
  CHECK(c1.generator.U1().row(0).isApprox(
      (Eigen::RowVectorXd(5) << 1, 1, 0, 1, 0).finished()));

  const auto lgen = sim::build_ladder_generator(3.1, 6.2);
  CHECK(lgen.S1()(0, 1) == 3.1);
  CHECK(lgen.S1()(2, 3) == 6.2);
  const MatrixXd U2 = lgen.U_block(2);
  CHECK(U2(0, 2) == 1.0);  // v_1 v_3 into u_1
  CHECK(U2(1, 6) == 1.0);  // v_2 v_4 into u_2
  CHECK(U2.sum() == 2.0);
}

TEST_CASE("simulate basics") {
  // Zero system: output stays zero.
  PolySystem zero(1, 1, 1, 1);
  zero.set_F(1, 0, MatrixXd::Constant(1, 1, -1.0));
  zero.set_F(0, 1, MatrixXd::Zero(1, 1));
  zero.set_H(1, 0, MatrixXd::Zero(1, 1));
  SignalGenerator gen(1, 1, 1);
  gen.set_S(1, MatrixXd::Zero(1, 1));
  gen.set_U(1, MatrixXd::Constant(1, 1, 1.0));
  const auto tz = sim::simulate(zero, gen, VectorXd::Ones(1), 5.0, 0.01);
  CHECK(tz.y.cwiseAbs().maxCoeff() == 0.0);

  // Constant excitation converges to the DC gain.
  PolySystem dc(2, 1, 1, 1);
  MatrixXd A = Eigen::Vector2d(-1, -2).asDiagonal();
  dc.set_F(1, 0, A);
  dc.set_F(0, 1, (MatrixXd(2, 1) << 1, 1).finished());
  dc.set_H(1, 0, (MatrixXd(1, 2) << 1, 1).finished());
  const auto td = sim::simulate(dc, gen, VectorXd::Ones(1), 20.0, 0.01);
  const double gain =
      (-dc.C() * A.inverse() * dc.B())(0, 0);
  CHECK(std::abs(td.y(td.y.rows() - 1, 0) - gain) < 1e-6);

  // Generator norm is preserved for a linear rotation generator.
  SignalGenerator rot(2, 1, 1);
  MatrixXd S1(2, 2);
  S1 << 0, 1, -1, 0;
  rot.set_S(1, S1);
  rot.set_U(1, (MatrixXd(1, 2) << 1, 0).finished());
  const auto tr = sim::simulate(dc, rot, (VectorXd(2) << 1, 0).finished(),
                                40.0, 0.005);
  for (Eigen::Index k = 0; k < tr.v.rows(); ++k) {
    CHECK(std::abs(tr.v.row(k).norm() - 1.0) < 1e-6);
  }

  // Divergence guard.
  PolySystem unstable(1, 1, 1, 2);
  unstable.set_F(1, 0, MatrixXd::Constant(1, 1, 0.5));
  unstable.set_F(0, 1, MatrixXd::Constant(1, 1, 1.0));
  unstable.set_F(2, 0, MatrixXd::Constant(1, 1, 2.0));
  unstable.set_H(1, 0, MatrixXd::Constant(1, 1, 1.0));
  bool threw = false;
  try {
    (void)sim::simulate(unstable, gen, VectorXd::Ones(1), 100.0, 0.01);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::kDiverged;
  }
  CHECK(threw);
}

TEST_CASE("steady-state error metrics") {
  PolySystem dc(1, 1, 1, 1);
  dc.set_F(1, 0, MatrixXd::Constant(1, 1, -1.0));
  dc.set_F(0, 1, MatrixXd::Constant(1, 1, 1.0));
  dc.set_H(1, 0, MatrixXd::Constant(1, 1, 1.0));
  SignalGenerator gen(1, 1, 1);
  gen.set_S(1, MatrixXd::Zero(1, 1));
  gen.set_U(1, MatrixXd::Constant(1, 1, 1.0));
  const auto t1 = sim::simulate(dc, gen, VectorXd::Ones(1), 10.0, 0.01);
  const auto m = sim::steady_state_error(t1, t1);
  CHECK(m.peak == 0.0);
  CHECK(m.rms == 0.0);

  const auto t2 = sim::simulate(dc, gen, VectorXd::Ones(1), 10.0, 0.02);
  CHECK_THROWS_AS((void)sim::steady_state_error(t1, t2), Error);
}

TEST_CASE("regression recovers exact series data") {
  // Build trajectories whose outputs are exactly a truncated moment series.
  SignalGenerator gen(2, 1, 1);
  MatrixXd S1(2, 2);
  S1 << 0, 1.3, -1.3, 0;
  gen.set_S(1, S1);
  gen.set_U(1, (MatrixXd(1, 2) << 1, 0).finished());

  std::mt19937_64 rng(81);
  MomentSeries truth;
  truth.sigma = 2;
  truth.kappa = 2;
  truth.Y.push_back(oracle::randn(1, 2, rng));
  truth.Y.push_back(oracle::randn(1, 3, rng));

  std::vector<sim::Trajectory> trajs;
  for (double amp : {0.5, 0.9, 1.3}) {
    sim::Trajectory tr;
    const int steps = 400;
    tr.h = 0.01;
    tr.t.resize(steps + 1);
    tr.v.resize(steps + 1, 2);
    tr.x.resize(steps + 1, 0);
    tr.y.resize(steps + 1, 1);
    VectorXd v(2);
    v << amp, 0.2 * amp;
    for (int k = 0; k <= steps; ++k) {
      tr.t[k] = k * tr.h;
      // exact rotation
      const double th = 1.3 * tr.t[k];
      VectorXd vk(2);
      vk << v[0] * std::cos(th) + v[1] * std::sin(th),
          -v[0] * std::sin(th) + v[1] * std::cos(th);
      tr.v.row(k) = vk;
      tr.y.row(k) = series::evaluate_series(truth, vk);
    }
    trajs.push_back(std::move(tr));
  }
  const auto est = sim::estimate_moments_regression(trajs, gen, 2);
  CHECK((est.Y_at(1) - truth.Y_at(1)).norm() < 1e-10);
  CHECK((est.Y_at(2) - truth.Y_at(2)).norm() < 1e-10);
}

TEST_CASE("regression flags a constant generator as unidentifiable") {
  SignalGenerator gen(1, 1, 1);
  gen.set_S(1, MatrixXd::Zero(1, 1));
  gen.set_U(1, MatrixXd::Constant(1, 1, 1.0));
  sim::Trajectory tr;
  tr.h = 0.01;
  const int steps = 100;
  tr.t.resize(steps + 1);
  tr.v = MatrixXd::Constant(steps + 1, 1, 0.7);
  tr.x.resize(steps + 1, 0);
  tr.y = MatrixXd::Constant(steps + 1, 1, 1.9);
  for (int k = 0; k <= steps; ++k) tr.t[k] = k * tr.h;
  bool threw = false;
  try {
    (void)sim::estimate_moments_regression(tr, gen, 2);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::kIllConditioned;
  }
  CHECK(threw);
}

TEST_CASE("regression cross-validates the recursion on a nonlinear system") {
  // Small stable system with quadratic terms; incommensurate two-tone
  // generator keeps a single pair of trajectories identifiable.
  std::mt19937_64 rng(91);
  PolySystem sys(2, 1, 1, 2);
  MatrixXd A(2, 2);
  A << -1.0, 0.4, -0.2, -1.5;
  sys.set_F(1, 0, A);
  sys.set_F(0, 1, oracle::randn(2, 1, rng));
  sys.set_H(1, 0, oracle::randn(1, 2, rng));
  sys.set_H(0, 1, oracle::randn(1, 1, rng));
  sys.set_F(2, 0, oracle::randn(2, 3, rng, 0.5));
  sys.set_H(2, 0, oracle::randn(1, 3, rng, 0.5));

  SignalGenerator gen(2, 1, 1);
  MatrixXd S1(2, 2);
  S1 << 0, 1.0, -1.0, 0;
  gen.set_S(1, S1);
  gen.set_U(1, (MatrixXd(1, 2) << 1, 0.3).finished());

  const auto series = series::moment_recursion(sys, gen, 3);

  std::vector<sim::Trajectory> trajs;
  for (double amp : {0.05, 0.08, 0.11}) {
    VectorXd v0(2);
    v0 << amp, -0.4 * amp;
    const VectorXd x0 = [&] {
      VectorXd x = VectorXd::Zero(2);
      for (int l = 1; l <= 3; ++l) {
        x += series.X_at(l) * kron::reduced_power_vector(v0, l);
      }
      return x;
    }();
    trajs.push_back(sim::simulate(sys, gen, v0, 30.0, 0.002, x0));
  }
  const auto est = sim::estimate_moments_regression(trajs, gen, 3);
  for (int l = 1; l <= 3; ++l) {
    CHECK((est.Y_at(l) - series.Y_at(l)).norm() <
          1e-4 * (1 + series.Y_at(l).norm()));
  }
}

TEST_CASE("steady-state output tracks the series evaluation") {
  // On-manifold start: y(t) equals the series at v(t) to truncation error.
  const auto c1 = sim::build_case1();
  const auto series = series::moment_recursion(c1.system, c1.generator, 3);
  VectorXd v0(5);
  v0 << 0.03, 0, 0.03, 0, 0.03;
  VectorXd x0 = VectorXd::Zero(6);
  for (int l = 1; l <= 3; ++l) {
    x0 += series.X_at(l) * kron::reduced_power_vector(v0, l);
  }
  const auto tr = sim::simulate(c1.system, c1.generator, v0, 30.0, 0.005, x0);
  double worst = 0.0;
  for (Eigen::Index k = tr.t.size() / 2; k < tr.t.size(); ++k) {
    const VectorXd yh = series::evaluate_series(series, tr.v.row(k));
    worst = std::max(worst, std::abs(yh[0] - tr.y(k, 0)));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("csv export") {
  PolySystem dc(1, 1, 1, 1);
  dc.set_F(1, 0, MatrixXd::Constant(1, 1, -1.0));
  dc.set_F(0, 1, MatrixXd::Constant(1, 1, 1.0));
  dc.set_H(1, 0, MatrixXd::Constant(1, 1, 1.0));
  SignalGenerator gen(1, 1, 1);
  gen.set_S(1, MatrixXd::Zero(1, 1));
  gen.set_U(1, MatrixXd::Constant(1, 1, 1.0));
  const auto tr = sim::simulate(dc, gen, VectorXd::Ones(1), 1.0, 0.1);
  const std::string path = "csv_export_test.csv";
  sim::write_csv(path, tr, tr);
  std::ifstream is(path);
  std::string header;
  std::getline(is, header);
  CHECK(header == "t,v1,y1,y_reduced1");
  int lines = 0;
  std::string line;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == tr.t.size());
  is.close();
  std::remove(path.c_str());
}

}  // TEST_SUITE
