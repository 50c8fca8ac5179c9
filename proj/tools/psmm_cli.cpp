// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: moment computation, model reduction, time-domain
// validation, order bounds, and fixture emission for the worked examples.

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "psmm/model_io.hpp"
#include "psmm/moment_series.hpp"
#include "psmm/nonlinear_matching.hpp"
#include "psmm/sim_validate.hpp"

namespace {

using nlohmann::json;
using namespace psmm;

std::vector<std::complex<double>> parse_eigenvalues(const std::string& text) {
  std::vector<std::complex<double>> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    double re = 0.0, im = 0.0;
    char sign = '+';
    std::size_t pos = item.find_first_of("+-", 1);
    // skip a leading exponent sign like 1e-3
    while (pos != std::string::npos &&
           (item[pos - 1] == 'e' || item[pos - 1] == 'E')) {
      pos = item.find_first_of("+-", pos + 1);
    }
    if (pos != std::string::npos && item.find('i', pos) != std::string::npos) {
      re = std::stod(item.substr(0, pos));
      sign = item[pos];
      std::string imag = item.substr(pos + 1);
      imag.erase(imag.find('i'));
      im = imag.empty() ? 1.0 : std::stod(imag);
      if (sign == '-') im = -im;
    } else if (item.find('i') != std::string::npos) {
      std::string imag = item.substr(0, item.find('i'));
      im = imag.empty() || imag == "+" ? 1.0 : (imag == "-" ? -1.0 : std::stod(imag));
    } else {
      re = std::stod(item);
    }
    out.emplace_back(re, im);
  }
  return out;
}

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) vals.push_back(std::stod(item));
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t k = 0; k < vals.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = vals[k];
  }
  return out;
}

json bounds_to_json(const matching::OrderBound& b) {
  return json{{"n_min", b.n_min},
              {"degree1_bound", b.degree1_bound},
              {"kappa_bound", b.kappa_bound},
              {"corollary_bound", b.corollary_bound},
              {"bound_method1", b.bound_method1},
              {"bound_method2", b.bound_method2},
              {"table_verdict", b.table_verdict},
              {"table_subcondition", b.table_subcondition}};
}

json report_to_json(const matching::ReductionReport& r) {
  json j;
  j["method"] = r.method == matching::Method::kI ? 1 : 2;
  j["kappa"] = r.kappa;
  j["order"] = r.order;
  j["force_D_zero"] = r.force_D_zero;
  j["mode"] = r.mode_name;
  j["residuals"] = r.residuals;
  j["W_ranks"] = r.W_ranks;
  j["obs_indices"] = r.obs_indices;
  j["bounds"] = bounds_to_json(r.bounds);
  j["reseeds_used"] = r.reseeds_used;
  const auto& d = r.degree1_diagnostics;
  j["degree1_diagnostics"] = json{{"hurwitz", d.hurwitz},
                                  {"max_real_part", d.max_real_part},
                                  {"controllable", d.controllable},
                                  {"observable", d.observable},
                                  {"rank_U1", d.rank_U1},
                                  {"observability_index", d.observability_index},
                                  {"index_minimal", d.index_minimal}};
  json targets = json::object();
  for (std::size_t l = 1; l <= r.targets.size(); ++l) {
    targets["Y_" + std::to_string(l)] = io::matrix_to_json(r.targets[l - 1]);
  }
  j["targets"] = std::move(targets);
  j["X1"] = io::matrix_to_json(r.X1);
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"power-series moment-matching model reduction"};
  app.require_subcommand(1);

  // moments
  auto* cmd_moments = app.add_subcommand(
      "moments", "compute the moment series of a model against a generator");
  std::string model_path, gen_path, out_path = "moments.json";
  int kappa = 2;
  bool with_X = false;
  cmd_moments->add_option("--model", model_path, "model file")->required();
  cmd_moments->add_option("--gen", gen_path, "generator file")->required();
  cmd_moments->add_option("--kappa", kappa, "series truncation degree");
  cmd_moments->add_flag("--with-x", with_X, "include X_l coefficients");
  cmd_moments->add_option("--out", out_path, "output series file");

  // reduce
  auto* cmd_reduce = app.add_subcommand(
      "reduce", "fit a reduced-order model matching the first kappa moments");
  std::string r_model, r_moments, r_gen, r_out_model = "reduced.json",
              r_out_report = "report.json", r_order = "auto", r_mode,
              r_eigs, r_solver = "minnorm";
  int r_method = 1, r_kappa = 1;
  bool r_dzero = false;
  std::uint64_t r_seed = 0;
  cmd_reduce->add_option("--model", r_model, "original model file");
  cmd_reduce->add_option("--moments", r_moments,
                         "moment series file (alternative to --model)");
  cmd_reduce->add_option("--gen", r_gen, "generator file")->required();
  cmd_reduce->add_option("--method", r_method, "1 or 2")->required();
  cmd_reduce->add_option("--kappa", r_kappa, "matching precision")->required();
  cmd_reduce->add_option("--order", r_order, "reduced order or 'auto'");
  cmd_reduce->add_option("--mode", r_mode,
                         "degree mode: fzero | hzero | assign | joint");
  cmd_reduce->add_option("--eigs", r_eigs,
                         "eigenvalues for A, e.g. \"-0.5,-1+0.2i,-1-0.2i\"");
  cmd_reduce->add_option("--solver", r_solver,
                         "underdetermined solve: minnorm | basic");
  cmd_reduce->add_flag("--d-zero", r_dzero, "force D = 0");
  cmd_reduce->add_option("--seed", r_seed, "seed for randomized fallbacks");
  cmd_reduce->add_option("--out-model", r_out_model, "reduced model file");
  cmd_reduce->add_option("--out-report", r_out_report, "report file");

  // validate
  auto* cmd_validate = app.add_subcommand(
      "validate", "simulate full and reduced models and compare outputs");
  std::string v_full, v_reduced, v_gen, v_v0, v_csv, v_metrics = "metrics.json";
  double v_horizon = 100.0, v_step = 0.005, v_settle = 0.5;
  cmd_validate->add_option("--full", v_full, "full model file")->required();
  cmd_validate->add_option("--reduced", v_reduced, "reduced model file")
      ->required();
  cmd_validate->add_option("--gen", v_gen, "generator file")->required();
  cmd_validate->add_option("--v0", v_v0, "initial generator state, comma list")
      ->required();
  cmd_validate->add_option("--horizon", v_horizon, "simulation horizon");
  cmd_validate->add_option("--step", v_step, "RK4 step");
  cmd_validate->add_option("--settle", v_settle,
                           "fraction of the horizon discarded as transient");
  cmd_validate->add_option("--out-csv", v_csv, "trajectory CSV path");
  cmd_validate->add_option("--out-metrics", v_metrics, "metrics JSON path");

  // bounds
  auto* cmd_bounds = app.add_subcommand(
      "bounds", "order lower bounds and the method comparison verdict");
  int b_sigma = 0, b_m = 0, b_p = 0, b_kappa = 1;
  bool b_dzero = false;
  cmd_bounds->add_option("--sigma", b_sigma, "generator dimension")->required();
  cmd_bounds->add_option("--m", b_m, "input count")->required();
  cmd_bounds->add_option("--p", b_p, "output count")->required();
  cmd_bounds->add_option("--kappa", b_kappa, "matching precision");
  cmd_bounds->add_flag("--d-zero", b_dzero, "force D = 0");

  // ladder
  auto* cmd_ladder = app.add_subcommand(
      "ladder", "emit the nonlinear RL ladder fixture and its generator");
  int l_sections = 8;
  double l_omega1 = 100.0 * M_PI, l_omega2 = 200.0 * M_PI;
  std::string l_out_model = "ladder.json", l_out_gen = "ladder_gen.json";
  cmd_ladder->add_option("--sections", l_sections, "ladder sections (>= 3)");
  cmd_ladder->add_option("--omega1", l_omega1, "first tone frequency");
  cmd_ladder->add_option("--omega2", l_omega2, "second tone frequency");
  cmd_ladder->add_option("--out-model", l_out_model, "model output path");
  cmd_ladder->add_option("--out-gen", l_out_gen, "generator output path");

  // case1
  auto* cmd_case1 = app.add_subcommand(
      "case1", "emit the 6-state worked example and its generator");
  std::string c_out_model = "case1.json", c_out_gen = "case1_gen.json";
  cmd_case1->add_option("--out-model", c_out_model, "model output path");
  cmd_case1->add_option("--out-gen", c_out_gen, "generator output path");

  CLI11_PARSE(app, argc, argv);

  if (cmd_moments->parsed()) {
    const auto sys = io::load_system(model_path);
    const auto gen = io::load_generator(gen_path);
    series::Options opts;
    opts.keep_X = with_X;
    const auto series = series::moment_recursion(sys, gen, kappa, opts);
    io::save_json(out_path, io::series_to_json(series, sys.p()));
    std::cout << "wrote " << out_path << "\n";
    return 0;
  }

  if (cmd_reduce->parsed()) {
    const auto gen = io::load_generator(r_gen);
    matching::ReduceConfig cfg;
    cfg.method = r_method == 1 ? matching::Method::kI : matching::Method::kII;
    cfg.kappa = r_kappa;
    cfg.order = r_order == "auto" ? -1 : std::stoi(r_order);
    cfg.force_D_zero = r_dzero;
    cfg.seed = r_seed;
    if (!r_eigs.empty()) cfg.eigenvalues = parse_eigenvalues(r_eigs);
    if (!r_mode.empty()) {
      if (r_mode == "fzero") cfg.mode = matching::DegreeMode::kFZero;
      else if (r_mode == "hzero") cfg.mode = matching::DegreeMode::kHZero;
      else if (r_mode == "assign") cfg.mode = matching::DegreeMode::kXAssigned;
      else if (r_mode == "joint") cfg.mode = matching::DegreeMode::kJoint;
      else throw Error(ErrorCode::kPrecondition, "unknown mode " + r_mode);
    }
    if (r_solver == "basic") {
      cfg.convention = matching::LsConvention::kBasic;
    } else if (r_solver != "minnorm") {
      throw Error(ErrorCode::kPrecondition, "unknown solver " + r_solver);
    }
    const auto report = [&] {
      if (!r_model.empty()) {
        return matching::reduce(io::load_system(r_model), gen, cfg);
      }
      if (r_moments.empty()) {
        throw Error(ErrorCode::kPrecondition,
                    "reduce: need --model or --moments");
      }
      return matching::reduce(io::load_series(r_moments).Y, gen, cfg);
    }();
    io::save_json(r_out_model, io::system_to_json(report.reduced));
    io::save_json(r_out_report, report_to_json(report));
    std::cout << "order " << report.order << "; residuals:";
    for (double r : report.residuals) std::cout << " " << r;
    std::cout << "\nwrote " << r_out_model << ", " << r_out_report << "\n";
    return 0;
  }

  if (cmd_validate->parsed()) {
    const auto full = io::load_system(v_full);
    const auto reduced = io::load_system(v_reduced);
    const auto gen = io::load_generator(v_gen);
    const Eigen::VectorXd v0 = parse_vector(v_v0);
    const auto t_full = sim::simulate(full, gen, v0, v_horizon, v_step);
    const auto t_red = sim::simulate(reduced, gen, v0, v_horizon, v_step);
    const auto metrics = sim::steady_state_error(t_full, t_red, v_settle);
    if (!v_csv.empty()) sim::write_csv(v_csv, t_full, t_red);
    json j{{"peak", metrics.peak},
           {"rms", metrics.rms},
           {"horizon", v_horizon},
           {"step", v_step},
           {"settle_fraction", v_settle}};
    io::save_json(v_metrics, j);
    std::cout << j.dump() << "\n";
    return 0;
  }

  if (cmd_bounds->parsed()) {
    const auto b1 = matching::order_bound(b_sigma, b_m, b_p,
                                          matching::Method::kI, b_dzero,
                                          b_kappa);
    const auto b2 = matching::order_bound(b_sigma, b_m, b_p,
                                          matching::Method::kII, b_dzero,
                                          b_kappa);
    json j{{"sigma", b_sigma},
           {"m", b_m},
           {"p", b_p},
           {"kappa", b_kappa},
           {"D_zero", b_dzero},
           {"method1", bounds_to_json(b1)},
           {"method2", bounds_to_json(b2)},
           {"verdict", b1.table_verdict == 0
                           ? "tie"
                           : (b1.table_verdict == 1 ? "method1" : "method2")}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (cmd_ladder->parsed()) {
    io::save_json(l_out_model, io::system_to_json(sim::build_ladder(l_sections)));
    io::save_json(l_out_gen, io::generator_to_json(
                                 sim::build_ladder_generator(l_omega1, l_omega2)));
    std::cout << "wrote " << l_out_model << ", " << l_out_gen << "\n";
    return 0;
  }

  if (cmd_case1->parsed()) {
    const auto c1 = sim::build_case1();
    io::save_json(c_out_model, io::system_to_json(c1.system));
    io::save_json(c_out_gen, io::generator_to_json(c1.generator));
    std::cout << "wrote " << c_out_model << ", " << c_out_gen << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const psmm::Error& e) {
    nlohmann::json j{{"error",
                      {{"code", psmm::error_code_name(e.code())},
                       {"message", e.what()},
                       {"degree", e.degree()}}}};
    std::cerr << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json j{{"error", {{"code", "Internal"}, {"message", e.what()}}}};
    std::cerr << j.dump() << "\n";
    return 1;
  }
}
