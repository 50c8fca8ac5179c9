// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "psmm/poly_system.hpp"

namespace psmm::sim {

/// Sampled interconnection of a system with the signal generator.
struct Trajectory {
  double h = 0.0;
  Eigen::VectorXd t;  // steps+1 samples
  Eigen::MatrixXd v;  // (steps+1) x sigma generator states
  Eigen::MatrixXd x;  // (steps+1) x n
  Eigen::MatrixXd y;  // (steps+1) x p
};

/// Fixed-step RK4 integration of vdot = s(v), xdot = f(x, u(v)), recording
/// y = h(x, u(v)). Aborts with kDiverged when ||x|| exceeds 1e6.
Trajectory simulate(const PolySystem& sys, const SignalGenerator& gen,
                    const Eigen::VectorXd& v0, double horizon, double h,
                    const Eigen::VectorXd& x0 = Eigen::VectorXd());

struct ErrorMetrics {
  double peak = 0.0;
  double rms = 0.0;
};

/// Peak and RMS of |y_full - y_reduced| over the retained window after
/// discarding the leading settle_fraction of samples. Grids must agree.
ErrorMetrics steady_state_error(const Trajectory& full,
                                const Trajectory& reduced,
                                double settle_fraction = 0.5);

struct RegressionOptions {
  double settle_fraction = 0.5;
  double condition_limit = 1e8;
};

/// Least-squares fit of Y_1..Y_kappa from steady-state samples: regressor
/// rows [v^[1]; ...; v^[kappa]]^T. Columns are RMS-normalized internally;
/// the conditioning diagnostic (and the kIllConditioned threshold) applies
/// to the normalized Gramian so it measures excitation, not amplitude.
/// Multiple trajectories concatenate; generators with rationally dependent
/// frequencies typically need several initial conditions to be identifiable.
MomentSeries estimate_moments_regression(std::span<const Trajectory> trajs,
                                         const SignalGenerator& gen, int kappa,
                                         const RegressionOptions& opts = {});

MomentSeries estimate_moments_regression(const Trajectory& traj,
                                         const SignalGenerator& gen, int kappa,
                                         const RegressionOptions& opts = {});

/// RL ladder with nonlinear resistors: N sections, two voltage sources,
/// y = x_1. Tridiagonal linear part, -x_i^2/2 and -x_i^3/3 resistor terms.
PolySystem build_ladder(int sections);

/// The ladder's two-tone signal generator (sigma = 4); omega1/omega2 default
/// to the 100*pi / 200*pi pair of the worked example.
SignalGenerator build_ladder_generator(double omega1 = 100.0 * 3.14159265358979323846,
                                       double omega2 = 200.0 * 3.14159265358979323846);

/// The 6-state worked example (n = 6, m = 2, p = 1, L = 3) and its sigma = 5
/// generator.
struct Case1 {
  PolySystem system;
  SignalGenerator generator;
};
Case1 build_case1();

/// CSV export: t, v..., y_full..., y_reduced... (validation layout).
void write_csv(const std::string& path, const Trajectory& full,
               const Trajectory& reduced);

}  // namespace psmm::sim
