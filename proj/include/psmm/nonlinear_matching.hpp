// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psmm/linear_matching.hpp"
#include "psmm/moment_series.hpp"
#include "psmm/poly_system.hpp"

namespace psmm::matching {

/// How the freedom in the degree-l equations is spent.
enum class DegreeMode {
  kJoint,      // (F_l, H_l) jointly from the vectorized equation (Method II)
  kFZero,      // F_l = 0: linear state equation (Method I default)
  kHZero,      // H_l = 0: linear output equation (needs full-row-rank C)
  kXAssigned,  // X_l assigned, (F_l, H_l) from the Lemma-5 style construction
};

/// Least-squares convention for the underdetermined degree-l solve in
/// Method II. Minimum-norm is the default; the basic (column-pivoted QR)
/// solution reproduces the worked examples' printed coefficients.
enum class LsConvention { kMinNorm, kBasic };

struct NonlinearMatchPlan {
  PolySystem base;            // fitted degree-1 system, extended in place
  Eigen::MatrixXd X1;
  std::vector<Eigen::MatrixXd> X;       // grows as degrees are matched
  std::vector<Eigen::MatrixXd> targets; // Y_l^o for l = 1..kappa (index l-1)
  SignalGenerator gen;
  std::int64_t tuple_capacity = kron::kDefaultTupleCapacity;

  NonlinearMatchPlan(PolySystem base_sys, Eigen::MatrixXd x1,
                     std::vector<Eigen::MatrixXd> ylo, SignalGenerator g);
};

struct DegreeStepResult {
  Eigen::MatrixXd F_l;  // stacked n x m_l (layout degree_layout(n, m, l))
  Eigen::MatrixXd H_l;  // stacked p x m_l
  Eigen::MatrixXd X_l;
  double residual = 0.0;       // matching residual at this degree
  Eigen::Index W_rank = 0;
  Eigen::Index xi_rank = 0;    // Method II only
  int obs_index_WS = -1;       // Method II: observability index of (W_l, S^<l>)
};

/// Method I continuation: computes E_l, G_l, W_l for the partially built
/// reduced model and spends the (F_l, H_l, X_l) freedom per `mode`.
/// Writes the fitted blocks into plan.base and appends X_l.
DegreeStepResult alg3_degree_step(
    NonlinearMatchPlan& plan, int l, DegreeMode mode,
    const std::optional<Eigen::MatrixXd>& X_assigned = {});

/// Method II continuation: Y'_l through the frequency transform, then
/// (F_l, H_l) from vec(Y'_l) = Xi_l [vec F_l; vec H_l] (or the H_l = 0 form).
DegreeStepResult alg4_degree_step(NonlinearMatchPlan& plan, int l,
                                  DegreeMode mode,
                                  LsConvention convention = LsConvention::kMinNorm);

struct ReduceConfig {
  Method method = Method::kI;
  int kappa = 1;
  int order = -1;  // -1 = auto via order_bound
  bool force_D_zero = false;
  std::optional<DegreeMode> mode;          // default per method
  std::map<int, DegreeMode> per_degree;    // per-degree overrides
  std::vector<std::complex<double>> eigenvalues;
  std::optional<Eigen::MatrixXd> preselected_A;
  std::optional<Eigen::MatrixXd> preselected_B;
  std::optional<Eigen::MatrixXd> preselected_C;
  std::map<int, Eigen::MatrixXd> assigned_X;
  LsConvention convention = LsConvention::kMinNorm;
  std::uint64_t seed = 0;
  std::int64_t tuple_capacity = kron::kDefaultTupleCapacity;
  bool verify = true;  // re-run the recursion on the reduced model
};

struct ReductionReport {
  PolySystem reduced;
  Eigen::MatrixXd X1;
  std::vector<Eigen::MatrixXd> X;
  std::vector<Eigen::MatrixXd> targets;      // Y_l^o
  std::vector<double> residuals;             // per degree, l = 1..kappa
  std::vector<Eigen::Index> W_ranks;         // degrees 2..kappa
  std::vector<int> obs_indices;              // Method II, degrees 2..kappa
  OrderBound bounds;
  int order = 0;
  int kappa = 0;
  Method method = Method::kI;
  bool force_D_zero = false;
  std::string mode_name;
  linalg::StructuralDiagnostics degree1_diagnostics;
  int reseeds_used = 0;
};

/// Full reduction: degree-1 fit (Method I/II, or the Lemma-5 construction
/// when sigma <= m), then per-degree continuation up to kappa, then closed-
/// loop verification of Y_l = Y_l^o by re-running the moment recursion.
ReductionReport reduce(const std::vector<Eigen::MatrixXd>& targets,
                       const SignalGenerator& gen, const ReduceConfig& config);

/// Convenience overload: computes the targets from a full original model.
ReductionReport reduce(const PolySystem& original, const SignalGenerator& gen,
                       const ReduceConfig& config);

const char* degree_mode_name(DegreeMode mode);

}  // namespace psmm::matching
