// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include "psmm/nonlinear_matching.hpp"

#include <cmath>

namespace psmm::matching {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Splits a stacked degree-l matrix into (i, r) blocks and stores them.
void store_blocks(PolySystem& sys, int l, const MatrixXd& Fl,
                  const MatrixXd& Hl) {
  const auto lay = series::degree_layout(sys.n(), sys.m(), l);
  for (std::size_t b = 0; b < lay.blocks.size(); ++b) {
    const auto [i, r] = lay.blocks[b];
    const Index cols = lay.offsets[b + 1] - lay.offsets[b];
    sys.set_F(i, r, Fl.middleCols(lay.offsets[b], cols));
    sys.set_H(i, r, Hl.middleCols(lay.offsets[b], cols));
  }
}

/// Right-multiplication solve Z W = R with min-norm Z = R W^+.
MatrixXd solve_right(const MatrixXd& W, const MatrixXd& R) {
  return linalg::min_norm_solve(W.transpose(), R.transpose())
      .solution.transpose();
}

double rel_norm(const MatrixXd& R, const MatrixXd& ref) {
  return R.norm() / (1.0 + ref.norm());
}

}  // namespace

const char* degree_mode_name(DegreeMode mode) {
  switch (mode) {
    case DegreeMode::kJoint: return "joint";
    case DegreeMode::kFZero: return "fzero";
    case DegreeMode::kHZero: return "hzero";
    case DegreeMode::kXAssigned: return "assign";
  }
  return "?";
}

NonlinearMatchPlan::NonlinearMatchPlan(PolySystem base_sys, Eigen::MatrixXd x1,
                                       std::vector<Eigen::MatrixXd> ylo,
                                       SignalGenerator g)
    : base(std::move(base_sys)),
      X1(std::move(x1)),
      targets(std::move(ylo)),
      gen(std::move(g)) {
  X.push_back(X1);
}

DegreeStepResult alg3_degree_step(
    NonlinearMatchPlan& plan, int l, DegreeMode mode,
    const std::optional<Eigen::MatrixXd>& X_assigned) {
  if (static_cast<int>(plan.X.size()) != l - 1) {
    throw Error(ErrorCode::kPrecondition,
                "alg3_degree_step: degrees must be matched in order", l);
  }
  PolySystem& sys = plan.base;
  const SignalGenerator& gen = plan.gen;
  const MatrixXd A = sys.A();
  const MatrixXd B = sys.B();
  const MatrixXd C = sys.C();
  const MatrixXd D = sys.D();
  const MatrixXd& Ylo = plan.targets.at(static_cast<std::size_t>(l - 1));
  const MatrixXd Ul = gen.U_block(l);
  const Index red_cols = static_cast<Index>(kron::reduced_dim(gen.sigma(), l));

  const MatrixXd Wl =
      series::compute_coupling_W(plan.X1, gen.U1(), l, plan.tuple_capacity);
  const auto cor =
      series::compute_corrections(plan.X, sys, gen, l, plan.tuple_capacity);
  const MatrixXd Skl = kron::reduced_kron_sum(gen.S1(), l);

  DegreeStepResult out;
  out.W_rank = linalg::numeric_rank(Wl);
  // Assumption: W_l of full column rank so that W_l^+ W_l = I.
  if (mode != DegreeMode::kJoint && out.W_rank != red_cols) {
    throw Error(ErrorCode::kWlRankDeficient,
                "alg3_degree_step: W_" + std::to_string(l) +
                    " rank " + std::to_string(out.W_rank) + " < " +
                    std::to_string(red_cols) +
                    " (coupling-rank assumption violated)",
                l);
  }

  switch (mode) {
    case DegreeMode::kFZero: {
      out.F_l = MatrixXd::Zero(sys.n(), Wl.rows());
      out.X_l = linalg::solve_sylvester(A, Skl, B * Ul + cor.E);
      const MatrixXd deficit = Ylo - C * out.X_l - D * Ul - cor.G;
      out.H_l = solve_right(Wl, deficit);
      break;
    }
    case DegreeMode::kHZero: {
      if (linalg::numeric_rank(C) != sys.p()) {
        throw Error(ErrorCode::kPrecondition,
                    "alg3_degree_step: H_l = 0 needs C of full row rank", l);
      }
      out.H_l = MatrixXd::Zero(sys.p(), Wl.rows());
      const MatrixXd deficit = Ylo - D * Ul - cor.G;
      out.X_l = linalg::min_norm_solve(C, deficit).solution;
      out.F_l =
          solve_right(Wl, out.X_l * Skl - A * out.X_l - B * Ul - cor.E);
      break;
    }
    case DegreeMode::kXAssigned: {
      out.X_l = X_assigned ? *X_assigned : MatrixXd::Zero(sys.n(), red_cols);
      out.F_l =
          solve_right(Wl, out.X_l * Skl - A * out.X_l - B * Ul - cor.E);
      out.H_l = solve_right(Wl, Ylo - C * out.X_l - D * Ul - cor.G);
      break;
    }
    case DegreeMode::kJoint:
      throw Error(ErrorCode::kPrecondition,
                  "alg3_degree_step: joint mode belongs to Method II", l);
  }

  const MatrixXd Yl = C * out.X_l + D * Ul + cor.G + out.H_l * Wl;
  out.residual = rel_norm(Yl - Ylo, Ylo);
  store_blocks(sys, l, out.F_l, out.H_l);
  plan.X.push_back(out.X_l);
  return out;
}

DegreeStepResult alg4_degree_step(NonlinearMatchPlan& plan, int l,
                                  DegreeMode mode, LsConvention convention) {
  if (static_cast<int>(plan.X.size()) != l - 1) {
    throw Error(ErrorCode::kPrecondition,
                "alg4_degree_step: degrees must be matched in order", l);
  }
  if (mode != DegreeMode::kJoint && mode != DegreeMode::kHZero) {
    throw Error(ErrorCode::kPrecondition,
                "alg4_degree_step: supported modes are joint and hzero", l);
  }
  PolySystem& sys = plan.base;
  const SignalGenerator& gen = plan.gen;
  const int n = sys.n();
  const int p = sys.p();
  const MatrixXd A = sys.A();
  const MatrixXd B = sys.B();
  const MatrixXd C = sys.C();
  const MatrixXd D = sys.D();
  const MatrixXd& Ylo = plan.targets.at(static_cast<std::size_t>(l - 1));
  const MatrixXd Ul = gen.U_block(l);
  const Index red_cols = static_cast<Index>(kron::reduced_dim(gen.sigma(), l));

  if (mode == DegreeMode::kHZero && linalg::numeric_rank(C) != p) {
    throw Error(ErrorCode::kPrecondition,
                "alg4_degree_step: H_l = 0 needs C of full row rank", l);
  }

  const MatrixXd Wl =
      series::compute_coupling_W(plan.X1, gen.U1(), l, plan.tuple_capacity);
  const auto cor =
      series::compute_corrections(plan.X, sys, gen, l, plan.tuple_capacity);
  const MatrixXd Skl = kron::reduced_kron_sum(gen.S1(), l);
  const Index ml = Wl.rows();

  // Y'_l via the frequency-domain form with Y_l := Y_l^o.
  const auto freq = series::frequency_transform_raw(
      A, B, C, D, gen.S1(), Ylo, Ul, cor.E, cor.G, l);
  const MatrixXd& Yp = freq.Y_prime;

  // Xi'_l = (I (x) C) [(-A) (+) (S^<l>)^T]^-1 (W_l^T (x) I_n), applied via one
  // LU factorization of the Kronecker sum.
  MatrixXd K = kron::kron(MatrixXd::Identity(red_cols, red_cols), -A) +
               kron::kron(Skl.transpose(), MatrixXd::Identity(n, n));
  Eigen::PartialPivLU<MatrixXd> lu(K);
  const MatrixXd Z =
      lu.solve(kron::kron(Wl.transpose(), MatrixXd::Identity(n, n)));
  MatrixXd XiP(p * red_cols, Z.cols());
  for (Index blk = 0; blk < red_cols; ++blk) {
    XiP.middleRows(blk * p, p) = C * Z.middleRows(blk * n, n);
  }
  MatrixXd Xi;
  if (mode == DegreeMode::kHZero) {
    Xi = std::move(XiP);
  } else {
    Xi.resize(p * red_cols, XiP.cols() + ml * p);
    Xi << XiP, kron::kron(Wl.transpose(), MatrixXd::Identity(p, p));
  }

  DegreeStepResult out;
  out.W_rank = linalg::numeric_rank(Wl);
  out.xi_rank = linalg::numeric_rank(Xi);
  out.obs_index_WS = linalg::observability_index(Wl, Skl);
  if (out.xi_rank != p * red_cols) {
    throw Error(
        ErrorCode::kRankDeficientXi,
        "alg4_degree_step: Xi_" + std::to_string(l) + " rank " +
            std::to_string(out.xi_rank) + " < " + std::to_string(p * red_cols) +
            "; observability index of (W_l, S^<l>) is " +
            std::to_string(out.obs_index_WS) + ", required ceil = " +
            std::to_string((red_cols + ml - 1) / ml),
        l);
  }

  const Eigen::Map<const VectorXd> yp(Yp.data(), Yp.size());
  VectorXd sol;
  if (convention == LsConvention::kMinNorm) {
    sol = linalg::min_norm_solve(Xi, yp).solution;
  } else {
    sol = linalg::basic_solve(Xi, yp);
  }
  out.F_l = Eigen::Map<const MatrixXd>(sol.data(), n, ml);
  out.H_l = MatrixXd::Zero(p, ml);
  if (mode == DegreeMode::kJoint) {
    out.H_l = Eigen::Map<const MatrixXd>(sol.data() + n * ml, p, ml);
  }

  out.X_l =
      linalg::solve_sylvester(A, Skl, B * Ul + cor.E + out.F_l * Wl);
  const MatrixXd Yl = C * out.X_l + D * Ul + cor.G + out.H_l * Wl;
  out.residual = rel_norm(Yl - Ylo, Ylo);
  store_blocks(sys, l, out.F_l, out.H_l);
  plan.X.push_back(out.X_l);
  return out;
}

ReductionReport reduce(const std::vector<Eigen::MatrixXd>& targets,
                       const SignalGenerator& gen, const ReduceConfig& config) {
  if (config.kappa < 1 ||
      static_cast<int>(targets.size()) < config.kappa) {
    throw Error(ErrorCode::kPrecondition,
                "reduce: need targets Y_l^o for l = 1..kappa");
  }
  const int sigma = gen.sigma();
  const int m = gen.m();
  const int p = static_cast<int>(targets[0].rows());

  MatchSpec spec;
  spec.Y1o = targets[0];
  spec.U1 = gen.U1();
  spec.S1 = gen.S1();
  spec.method = config.method;
  spec.force_D_zero = config.force_D_zero;
  spec.eigenvalues = config.eigenvalues;
  spec.preselected_A = config.preselected_A;
  spec.preselected_B = config.preselected_B;
  spec.preselected_C = config.preselected_C;
  spec.seed = config.seed;

  OrderBound bounds;
  LinearFit fit = [&] {
    if (sigma <= m) {
      spec.order = config.order;
      return small_sigma_fit(spec, config.force_D_zero
                                       ? SmallSigmaMode::kDZero
                                       : SmallSigmaMode::kFreeX1);
    }
    bounds = order_bound(sigma, m, p, config.method, config.force_D_zero,
                         config.kappa);
    spec.order = config.order >= 1 ? config.order : bounds.n_min;
    return config.method == Method::kI ? method1_fit(spec) : method2_fit(spec);
  }();

  const DegreeMode default_mode =
      config.mode.value_or(config.method == Method::kI ? DegreeMode::kFZero
                                                       : DegreeMode::kJoint);

  ReductionReport report{fit.system, fit.X1, {}, {}, {}, {}, {}, {}, 0, 0,
                         config.method, false, {}, {}, 0};
  report.targets = targets;
  report.bounds = bounds;
  report.order = fit.system.n();
  report.kappa = config.kappa;
  report.method = config.method;
  report.force_D_zero = config.force_D_zero;
  report.mode_name = degree_mode_name(default_mode);
  report.degree1_diagnostics = fit.diagnostics;
  report.reseeds_used = fit.reseeds_used;
  report.residuals.push_back(fit.residual);

  if (config.kappa >= 2) {
    // Re-home the degree-1 system with room for the higher-degree blocks.
    PolySystem grown(fit.system.n(), fit.system.m(), fit.system.p(),
                     config.kappa);
    grown.set_F(1, 0, fit.system.A());
    grown.set_F(0, 1, fit.system.B());
    grown.set_H(1, 0, fit.system.C());
    grown.set_H(0, 1, fit.system.D());
    NonlinearMatchPlan plan(std::move(grown), fit.X1, targets, gen);
    plan.tuple_capacity = config.tuple_capacity;
    for (int l = 2; l <= config.kappa; ++l) {
      DegreeMode mode = default_mode;
      if (auto it = config.per_degree.find(l); it != config.per_degree.end()) {
        mode = it->second;
      }
      DegreeStepResult step;
      if (config.method == Method::kI) {
        std::optional<MatrixXd> xa;
        if (auto it = config.assigned_X.find(l); it != config.assigned_X.end()) {
          xa = it->second;
        }
        step = alg3_degree_step(plan, l, mode, xa);
      } else {
        step = alg4_degree_step(plan, l, mode, config.convention);
      }
      report.residuals.push_back(step.residual);
      report.W_ranks.push_back(step.W_rank);
      if (config.method == Method::kII) {
        report.obs_indices.push_back(step.obs_index_WS);
      }
    }
    report.reduced = plan.base;
    report.X = plan.X;
  } else {
    report.X.push_back(fit.X1);
  }

  if (config.verify) {
    series::Options opts;
    opts.tuple_capacity = config.tuple_capacity;
    const auto check =
        series::moment_recursion(report.reduced, gen, config.kappa, opts);
    for (int l = 1; l <= config.kappa; ++l) {
      const double res =
          (check.Y_at(l) - targets[static_cast<std::size_t>(l - 1)]).norm() /
          (1.0 + targets[static_cast<std::size_t>(l - 1)].norm());
      report.residuals[static_cast<std::size_t>(l - 1)] = res;
    }
  }
  return report;
}

ReductionReport reduce(const PolySystem& original, const SignalGenerator& gen,
                       const ReduceConfig& config) {
  series::Options opts;
  opts.tuple_capacity = config.tuple_capacity;
  opts.keep_X = false;
  const auto series =
      series::moment_recursion(original, gen, config.kappa, opts);
  return reduce(series.Y, gen, config);
}

}  // namespace psmm::matching
