// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, driving the public
// library surface and the CLI binary. Exits nonzero when any criterion fails.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psmm/kron_algebra.hpp"
#include "psmm/linalg_core.hpp"
#include "psmm/linear_matching.hpp"
#include "psmm/model_io.hpp"
#include "psmm/moment_series.hpp"
#include "psmm/nonlinear_matching.hpp"
#include "psmm/sim_validate.hpp"

using namespace psmm;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

std::string g_cli;
std::filesystem::path g_work;
int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": "
            << detail << std::endl;
  if (!pass) ++g_failures;
}

int run_cli(const std::string& args, const std::string& stderr_file = "") {
  std::string cmd = g_cli + " " + args;
  if (!stderr_file.empty()) {
    cmd += " 2>" + (g_work / stderr_file).string();
  } else {
    cmd += " 2>/dev/null";
  }
  cmd += " >/dev/null";
  return std::system(cmd.c_str());
}

std::string wp(const std::string& name) { return (g_work / name).string(); }

// Print-precision tolerance: values are published with three significant
// figures, so allow max(base, 0.006 * |printed|).
bool close3(double got, double printed, double base = 0.02) {
  return std::abs(got - printed) <=
         std::max(base, 0.006 * std::abs(printed));
}

void criterion1() {
  Timer t;
  bool ok = run_cli("case1 --out-model " + wp("case1.json") + " --out-gen " +
                    wp("case1_gen.json")) == 0;
  ok = ok && run_cli("moments --model " + wp("case1.json") + " --gen " +
                     wp("case1_gen.json") + " --kappa 2 --out " +
                     wp("case1_moments.json")) == 0;
  std::string detail = "case1 moments via CLI";
  if (ok) {
    const auto series = io::load_series(wp("case1_moments.json"));
    const double y1[] = {7.23, -1.23, -3.59, -1.62, -1.85};
    const double y2[] = {12.99, -3.50, -15.68, -3.11, -12.47, 2.12, 0.571,
                         1.33, -1.14, 5.74, 2.54, 7.87, 0.714, 1.11, 3.25};
    for (int j = 0; j < 5; ++j) {
      ok = ok && std::abs(series.Y_at(1)(0, j) - y1[j]) < 0.005;
    }
    ok = ok && series.Y_at(2).cols() == 15;
    for (int j = 0; j < 15 && ok; ++j) {
      ok = std::abs(series.Y_at(2)(0, j) - y2[j]) < 0.005;
    }
    const double secs = t.seconds();
    ok = ok && secs < 10.0;
    detail += ": Y_1 and Y_2 within +-0.005 of the published values, " +
              std::to_string(secs) + " s (< 10 s)";
  }
  report(1, ok, detail);
}

void criterion2() {
  Timer t;
  bool ok = run_cli("reduce --model " + wp("case1.json") + " --gen " +
                    wp("case1_gen.json") +
                    " --method 1 --kappa 4 --order auto --mode fzero "
                    "--eigs \"-0.5,-1+0.2i,-1-0.2i\" --out-model " +
                    wp("red1.json") + " --out-report " + wp("rep1.json")) == 0;
  std::string detail = "Method I closed loop (kappa = 4, order auto)";
  if (ok) {
    const json rep = io::load_json(wp("rep1.json"));
    ok = rep["order"].get<int>() == 3;
    for (const auto& r : rep["residuals"]) {
      ok = ok && r.get<double>() <= 1e-8;
    }
    const auto reduced = io::load_system(wp("red1.json"));
    const double c_exp[] = {-1.81, -8.47, 4.92};
    for (int j = 0; j < 3; ++j) {
      ok = ok && close3(reduced.C()(0, j), c_exp[j]);
    }
    ok = ok && close3(reduced.D()(0, 0), 1.26) &&
         close3(reduced.D()(0, 1), 2.60);
    const double secs = t.seconds();
    ok = ok && secs < 60.0;
    detail += ": order 3, residuals <= 1e-8 for l = 1..4, C/D at the "
              "published values, " + std::to_string(secs) + " s (< 60 s)";
  }
  report(2, ok, detail);
}

void criterion3() {
  bool ok = run_cli("reduce --model " + wp("case1.json") + " --gen " +
                    wp("case1_gen.json") +
                    " --method 2 --kappa 2 --order 2 "
                    "--eigs \"-1+0.2i,-1-0.2i\" --out-model " +
                    wp("red2.json") + " --out-report " + wp("rep2.json")) == 0;
  std::string detail = "Method II closed loop (kappa = 2, order 2)";
  if (ok) {
    const json rep = io::load_json(wp("rep2.json"));
    for (const auto& r : rep["residuals"]) {
      ok = ok && r.get<double>() <= 1e-8;
    }
    const auto red = io::load_system(wp("red2.json"));
    ok = ok && close3(red.B()(0, 0), 10.0) && close3(red.B()(0, 1), 2.21) &&
         close3(red.B()(1, 0), -5.18) && close3(red.B()(1, 1), -8.12) &&
         close3(red.D()(0, 0), -0.134) && close3(red.D()(0, 1), 2.05);

    // Published degree-2 blocks correspond to the basic-solution convention
    // of the underdetermined step (see report); compare under --solver basic.
    ok = ok && run_cli("reduce --model " + wp("case1.json") + " --gen " +
                       wp("case1_gen.json") +
                       " --method 2 --kappa 2 --order 2 --solver basic "
                       "--eigs \"-1+0.2i,-1-0.2i\" --out-model " +
                       wp("red2b.json") + " --out-report " +
                       wp("rep2b.json")) == 0;
    if (ok) {
      const auto rb = io::load_system(wp("red2b.json"));
      const MatrixXd F20 = rb.F_block(2, 0);
      const MatrixXd F11 = rb.F_block(1, 1);
      const MatrixXd H20 = rb.H_block(2, 0);
      const MatrixXd H11 = rb.H_block(1, 1);
      const MatrixXd H02 = rb.H_block(0, 2);
      ok = ok && close3(F20(0, 0), 1.04) && close3(F20(0, 1), 1.54) &&
           close3(F20(0, 2), 0.359) && close3(F20(1, 0), -0.70) &&
           close3(F20(1, 1), -0.815) && close3(F20(1, 2), -0.0553) &&
           close3(F11(1, 1), -0.268) && close3(H20(0, 0), 0.120) &&
           close3(H20(0, 1), -0.0267) && close3(H20(0, 2), 0.0127) &&
           close3(H11(0, 0), -0.601) && close3(H11(0, 1), -0.0576) &&
           close3(H11(0, 2), 0.730) &&  // published 7.30 lacks its 10^-1
           close3(H11(0, 3), -0.276) && close3(H02(0, 0), 3.41);
    }

    // kappa = 3 must abort with the rank-deficiency error at degree 3.
    const int rc = run_cli("reduce --model " + wp("case1.json") + " --gen " +
                           wp("case1_gen.json") +
                           " --method 2 --kappa 3 --order 2 "
                           "--eigs \"-1+0.2i,-1-0.2i\" --out-model " +
                           wp("red3.json") + " --out-report " +
                           wp("rep3.json"),
                           "err3.json");
    ok = ok && rc != 0;
    if (ok) {
      const json err = io::load_json(wp("err3.json"));
      ok = err["error"]["code"] == "RankDeficientXi" &&
           err["error"]["degree"].get<int>() == 3;
    }
    detail += ": residuals <= 1e-8, B/D and degree-2 blocks at the published "
              "values (blocks under the basic-solution convention), kappa = 3 "
              "raises RankDeficientXi at degree 3";
  }
  report(3, ok, detail);
}

void criterion4() {
  const double pi = 3.14159265358979323846;
  std::ostringstream lad;
  lad << "ladder --sections 8 --omega1 " << pi << " --omega2 " << 2 * pi
      << " --out-model " << wp("ladder.json") << " --out-gen "
      << wp("ladder_gen.json");
  bool ok = run_cli(lad.str()) == 0;
  ok = ok && run_cli("reduce --model " + wp("ladder.json") + " --gen " +
                     wp("ladder_gen.json") +
                     " --method 2 --kappa 3 --order 2 --d-zero --mode hzero "
                     "--eigs \"-1,-2\" --out-model " +
                     wp("ladder_red.json") + " --out-report " +
                     wp("ladder_rep.json")) == 0;
  std::string detail = "ladder (8 sections) Method II, kappa = 3, hzero";
  if (ok) {
    const json rep = io::load_json(wp("ladder_rep.json"));
    for (const auto& r : rep["residuals"]) {
      ok = ok && r.get<double>() <= 1e-6;
    }
    // Regression oracle against the recursion on the same scaled generator.
    const auto ladder = sim::build_ladder(8);
    const auto gen = sim::build_ladder_generator(pi, 2 * pi);
    const auto series = series::moment_recursion(ladder, gen, 3);
    std::vector<sim::Trajectory> trajs;
    const double amps[][2] = {{0.10, 0.05}, {0.04, 0.09}, {0.08, -0.08},
                              {-0.06, 0.03}, {0.05, 0.11}};
    for (const auto& a : amps) {
      VectorXd v0(4);
      v0 << a[0], 0.0, a[1], 0.0;
      VectorXd x0 = VectorXd::Zero(8);
      for (int l = 1; l <= 3; ++l) {
        x0 += series.X_at(l) * kron::reduced_power_vector(v0, l);
      }
      trajs.push_back(sim::simulate(ladder, gen, v0, 24.0, 1e-3, x0));
    }
    const auto est = sim::estimate_moments_regression(trajs, gen, 3);
    double worst = 0.0;
    for (int l = 1; l <= 3; ++l) {
      worst = std::max(worst, (est.Y_at(l) - series.Y_at(l)).norm() /
                                  (1 + series.Y_at(l).norm()));
    }
    ok = ok && worst <= 1e-4;
    detail += ": residuals <= 1e-6 per degree, regression oracle within " +
              std::to_string(worst) + " (<= 1e-4) of the recursion";
  }
  report(4, ok, detail);
}

void criterion5() {
  Timer t;
  std::string detail = "steady-state error scaling (v0 0.1e vs 0.03e)";
  bool ok = run_cli("validate --full " + wp("case1.json") + " --reduced " +
                    wp("red1.json") + " --gen " + wp("case1_gen.json") +
                    " --v0 \"0.03,0,0.03,0,0.03\" --horizon 150 --step 0.005 "
                    "--out-metrics " + wp("m_small.json") + " --out-csv " +
                    wp("traj_small.csv")) == 0;
  ok = ok && run_cli("validate --full " + wp("case1.json") + " --reduced " +
                     wp("red1.json") + " --gen " + wp("case1_gen.json") +
                     " --v0 \"0.1,0,0.1,0,0.1\" --horizon 150 --step 0.005 "
                     "--out-metrics " + wp("m_large.json")) == 0;
  if (ok) {
    const double small = io::load_json(wp("m_small.json"))["peak"];
    const double large = io::load_json(wp("m_large.json"))["peak"];
    const double ratio = large / small;
    const double secs = t.seconds();
    ok = ratio >= 10.0 && secs < 120.0;
    detail += ": peak ratio " + std::to_string(ratio) + " (>= 10), " +
              std::to_string(secs) + " s (< 120 s)";
  }
  report(5, ok, detail);
}

void criterion6() {
  bool ok = true;
  for (int n = 1; n <= 5 && ok; ++n) {
    for (int m = 1; m <= 5 && ok; ++m) {
      const int sigma = n + m;  // n = sigma - m
      for (int l = 2; l <= 6 && ok; ++l) {
        std::int64_t ml = 0;
        for (int i = 0; i <= l; ++i) {
          ml += kron::binomial(n - 1 + i, i) *
                kron::binomial(m - 1 + l - i, l - i);
        }
        ok = ml == kron::binomial(sigma - 1 + l, l);
      }
    }
  }
  for (int s = 1; s <= 12 && ok; ++s) {
    for (int t = 1; t <= 12 && ok; ++t) {
      std::int64_t sum = 0;
      for (int k = 0; k <= t; ++k) sum += kron::binomial(s - 1 + k, k);
      ok = sum == kron::binomial(s + t, t);
    }
  }
  report(6, ok,
         "coupling-count identity (n,m <= 5, l <= 6) and Pascal chain "
         "(s,t <= 12) hold exactly");
}

void criterion7() {
  bool ok = true;
  for (int n = 1; n <= 5 && ok; ++n) {
    for (int i = 0; i <= 4 && ok; ++i) {
      auto mn = kron::build_MN(kron::MultisetIndexTable::build(n, i),
                               /*cap=*/1 << 20);
      const MatrixXd prod = mn.M * mn.N;
      ok = (prod - MatrixXd::Identity(prod.rows(), prod.cols()))
               .cwiseAbs()
               .maxCoeff() == 0.0;
    }
  }
  double worst = 0.0;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 50 && ok; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int i = 2 + static_cast<int>(rng() % 2);
    MatrixXd A(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) A(r, c) = dist(rng);
    }
    auto base = linalg::eigenvalues_of(A);
    auto table = kron::MultisetIndexTable::build(n, i);
    std::vector<std::complex<double>> sums;
    for (Eigen::Index r = 0; r < table.row_count(); ++r) {
      std::complex<double> acc = 0.0;
      for (int s : table.row(r)) acc += base[static_cast<std::size_t>(s)];
      sums.push_back(acc);
    }
    auto got = linalg::eigenvalues_of(kron::reduced_kron_sum(A, i));
    double h = 0.0;
    for (const auto& g : got) {
      double best = 1e300;
      for (const auto& s : sums) best = std::min(best, std::abs(g - s));
      h = std::max(h, best);
    }
    for (const auto& s : sums) {
      double best = 1e300;
      for (const auto& g : got) best = std::min(best, std::abs(g - s));
      h = std::max(h, best);
    }
    worst = std::max(worst, h);
    ok = h <= 1e-8;
  }
  report(7, ok,
         "M N = I exactly (n <= 5, i <= 4); eigenvalue-sum spectrum over 50 "
         "random matrices, worst Hausdorff distance " + std::to_string(worst));
}

void criterion8() {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> dist(0.0, 1.0);
  auto randm = [&](int r, int c) {
    MatrixXd M(r, c);
    for (int j = 0; j < c; ++j) {
      for (int i = 0; i < r; ++i) M(i, j) = dist(rng);
    }
    return M;
  };
  auto random_gen = [&](int sigma, int m) {
    MatrixXd S1 = MatrixXd::Zero(sigma, sigma);
    int at = sigma % 2;
    for (; at + 1 < sigma; at += 2) {
      const double w = 0.3 + 1.5 * std::abs(dist(rng));
      S1(at, at + 1) = w;
      S1(at + 1, at) = -w;
    }
    return std::pair(S1, randm(m, sigma));
  };

  int done1 = 0, done2 = 0;
  bool ok = true;
  for (int trial = 0; trial < 200 && done1 < 50; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 2);
    const int sigma = m + 1 + static_cast<int>(rng() % 3);
    const int n = sigma - m;
    const int p = 1 + static_cast<int>(rng() % 2);
    auto [S1, U1] = random_gen(sigma, m);
    MatrixXd A = randm(n, n);
    A -= (1.0 + A.eigenvalues().real().maxCoeff()) * MatrixXd::Identity(n, n);
    const MatrixXd B = randm(n, m);
    const MatrixXd Cs = randm(p, n);
    const MatrixXd Ds = randm(p, m);
    const MatrixXd X1 = linalg::solve_sylvester(A, S1, B * U1);
    MatrixXd Omega(n + m, sigma);
    Omega << X1, U1;
    if (linalg::numeric_rank(Omega) != sigma) continue;  // not well-posed
    matching::MatchSpec spec;
    spec.Y1o = Cs * X1 + Ds * U1;
    spec.U1 = U1;
    spec.S1 = S1;
    spec.order = n;
    spec.preselected_A = A;
    spec.preselected_B = B;
    const auto fit = matching::method1_fit(spec);
    ok = ok && (fit.system.C() - Cs).norm() <= 1e-8 * (1 + Cs.norm()) &&
         (fit.system.D() - Ds).norm() <= 1e-8 * (1 + Ds.norm());
    ++done1;
  }
  for (int trial = 0; trial < 200 && done2 < 50; ++trial) {
    struct Shape { int sigma, m, p, n; };
    const Shape shapes[] = {{3, 1, 1, 2}, {4, 1, 1, 3}, {5, 1, 1, 4},
                            {4, 2, 1, 1}, {6, 2, 1, 2}};
    const auto sh = shapes[trial % 5];
    auto [S1, U1] = random_gen(sh.sigma, sh.m);
    MatrixXd A = randm(sh.n, sh.n);
    A -= (1.0 + A.eigenvalues().real().maxCoeff()) *
         MatrixXd::Identity(sh.n, sh.n);
    const MatrixXd C = randm(sh.p, sh.n);
    const MatrixXd Bs = randm(sh.n, sh.m);
    const MatrixXd Ds = randm(sh.p, sh.m);
    const MatrixXd X1 = linalg::solve_sylvester(A, S1, Bs * U1);
    matching::MatchSpec spec;
    spec.Y1o = C * X1 + Ds * U1;
    spec.U1 = U1;
    spec.S1 = S1;
    spec.order = sh.n;
    spec.method = matching::Method::kII;
    spec.preselected_A = A;
    spec.preselected_C = C;
    try {
      const auto fit = matching::method2_fit(spec);
      ok = ok && (fit.system.B() - Bs).norm() <= 1e-8 * (1 + Bs.norm()) &&
           (fit.system.D() - Ds).norm() <= 1e-8 * (1 + Ds.norm());
      ++done2;
    } catch (const Error&) {
      // rank-deficient random instance; resample
    }
  }
  ok = ok && done1 == 50 && done2 == 50;
  report(8, ok,
         "method I and II round trips recover planted (C,D)/(B,D) to 1e-8 on "
         "50 well-posed instances each");
}

void criterion9() {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> dist(0.0, 1.0);
  bool ok = true;
  for (int trial = 0; trial < 10 && ok; ++trial) {
    const double a = -0.7 - std::abs(dist(rng));
    std::map<std::pair<int, int>, double> fc, hc;
    fc[{1, 0}] = a;
    fc[{0, 1}] = dist(rng);
    hc[{1, 0}] = dist(rng);
    hc[{0, 1}] = dist(rng);
    for (int i = 0; i <= 3; ++i) {
      for (int r = 0; r <= 3 - i; ++r) {
        if (i + r >= 2) {
          fc[{i, r}] = dist(rng);
          hc[{i, r}] = dist(rng);
        }
      }
    }
    std::map<int, double> sc{{1, 0.0}, {2, 0.5 * dist(rng)}, {3, 0.5 * dist(rng)}};
    std::map<int, double> uc{{1, dist(rng)}, {2, dist(rng)}, {3, dist(rng)}};

    PolySystem sys(1, 1, 1, 3);
    for (const auto& [ir, c] : fc) {
      sys.set_F(ir.first, ir.second, MatrixXd::Constant(1, 1, c));
    }
    for (const auto& [ir, c] : hc) {
      sys.set_H(ir.first, ir.second, MatrixXd::Constant(1, 1, c));
    }
    SignalGenerator gen(1, 1, 3);
    for (const auto& [l, c] : sc) gen.set_S(l, MatrixXd::Constant(1, 1, c));
    for (const auto& [l, c] : uc) gen.set_U(l, MatrixXd::Constant(1, 1, c));

    const auto series = series::moment_recursion(sys, gen, 4);

    // Independent oracle: truncated series composition of the PDE.
    const int K = 4;
    std::vector<double> s_ser(K + 1, 0.0), u_ser(K + 1, 0.0),
        x_ser(K + 1, 0.0);
    for (const auto& [l, c] : sc) if (l <= K) s_ser[l] = c;
    for (const auto& [l, c] : uc) if (l <= K) u_ser[l] = c;
    auto smul = [&](const std::vector<double>& p, const std::vector<double>& q) {
      std::vector<double> out(K + 1, 0.0);
      for (int i = 0; i <= K; ++i) {
        if (p[i] == 0.0) continue;
        for (int j = 0; i + j <= K; ++j) out[i + j] += p[i] * q[j];
      }
      return out;
    };
    auto spow = [&](const std::vector<double>& p, int k) {
      std::vector<double> out(K + 1, 0.0);
      out[0] = 1.0;
      for (int j = 0; j < k; ++j) out = smul(out, p);
      return out;
    };
    for (int l = 1; l <= K; ++l) {
      double rhs = 0.0;
      for (const auto& [ir, c] : fc) {
        if (c == 0.0) continue;
        rhs += c * smul(spow(x_ser, ir.first), spow(u_ser, ir.second))[l];
      }
      double lhs = 0.0;
      for (int j = 1; j < l; ++j) lhs += j * x_ser[j] * s_ser[l + 1 - j];
      x_ser[l] = (rhs - lhs) / (l * s_ser[1] - a);
    }
    for (int l = 1; l <= K && ok; ++l) {
      double yl = 0.0;
      for (const auto& [ir, c] : hc) {
        if (c == 0.0) continue;
        yl += c * smul(spow(x_ser, ir.first), spow(u_ser, ir.second))[l];
      }
      ok = std::abs(series.Y_at(l)(0, 0) - yl) <= 1e-9 * (1 + std::abs(yl)) &&
           std::abs(series.X_at(l)(0, 0) - x_ser[l]) <=
               1e-9 * (1 + std::abs(x_ser[l]));
    }
  }
  report(9, ok,
         "moment recursion equals the series-composition oracle for 10 random "
         "scalar systems, l <= 4, to 1e-9");
}

void criterion10() {
  // bounds prints to stdout; capture it.
  const std::string cmd = g_cli + " bounds --sigma 5 --m 2 --p 1 --kappa 2 >" +
                          wp("bounds.json") + " 2>/dev/null";
  bool ok = std::system(cmd.c_str()) == 0;
  std::string detail = "order bounds";
  if (ok) {
    const json b = io::load_json(wp("bounds.json"));
    ok = b["method1"]["degree1_bound"].get<int>() == 3 &&
         b["method1"]["n_min"].get<int>() == 3 &&
         b["method2"]["n_min"].get<int>() == 2;
    // Exhaustive table verdicts.
    for (int m = 1; m <= 4 && ok; ++m) {
      for (int p = 1; p <= 4 && ok; ++p) {
        for (int sigma = m + 1; sigma <= 20 && ok; ++sigma) {
          for (bool dz : {false, true}) {
            const auto bb = matching::order_bound(sigma, m, p,
                                                  matching::Method::kI, dz, 1);
            if (p >= m && bb.bound_method1 > bb.bound_method2) ok = false;
            if (p < m && bb.table_subcondition &&
                bb.bound_method2 > bb.bound_method1) {
              ok = false;
            }
          }
        }
      }
    }
    detail += ": worked example gives n = 3 (Method I) and n = 2 (Method II, "
              "kappa = 2); comparison tables verified for m, p <= 4, "
              "sigma <= 20";
  }
  report(10, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  g_cli = "./psmm";
  g_work = "acceptance_work";
  for (int k = 1; k + 1 < argc; k += 2) {
    const std::string flag = argv[k];
    if (flag == "--cli") g_cli = argv[k + 1];
    if (flag == "--workdir") g_work = argv[k + 1];
  }
  std::filesystem::create_directories(g_work);

  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
  } catch (const Error& e) {
    std::cout << "FAIL: unexpected error " << error_code_name(e.code()) << ": "
              << e.what() << std::endl;
    ++g_failures;
  }
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                : std::to_string(g_failures) + " CRITERIA FAILED")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
