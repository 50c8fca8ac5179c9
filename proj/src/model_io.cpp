// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#include "psmm/model_io.hpp"

#include <cstdio>
#include <fstream>

#include "psmm/kron_algebra.hpp"

namespace psmm::io {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kSchema, what);
}

void check_header(const json& j, const char* kind) {
  require(j.is_object(), "model file: not a JSON object");
  require(j.value("schema_version", -1) == kSchemaVersion,
          "model file: unsupported schema_version");
  require(j.value("kind", "") == kind,
          std::string("model file: expected kind '") + kind + "'");
  const std::string conv = j.value("multiset_ordering", "");
  if (conv != kron::kOrderingConvention) {
    throw Error(ErrorCode::kConventionMismatch,
                "model file: multiset ordering '" + conv +
                    "' differs from '" + kron::kOrderingConvention + "'");
  }
}

}  // namespace

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
  json j;
  j["rows"] = M.rows();
  j["cols"] = M.cols();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(M.size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) data.push_back(M(i, c));
  }
  j["data"] = std::move(data);
  return j;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* key) {
  require(j.is_object() && j.contains("rows") && j.contains("cols") &&
              j.contains("data"),
          std::string(key) + ": malformed matrix entry");
  const auto rows = j["rows"].get<Eigen::Index>();
  const auto cols = j["cols"].get<Eigen::Index>();
  const auto& data = j["data"];
  require(data.is_array() &&
              static_cast<Eigen::Index>(data.size()) == rows * cols,
          std::string(key) + ": data length != rows*cols");
  Eigen::MatrixXd M(rows, cols);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = data[at++].get<double>();
  }
  return M;
}

nlohmann::json system_to_json(const PolySystem& sys) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "poly_system";
  j["multiset_ordering"] = kron::kOrderingConvention;
  j["dims"] = {{"n", sys.n()}, {"m", sys.m()}, {"p", sys.p()},
               {"L", sys.max_degree()}};
  json blocks = json::object();
  for (const auto& [key, blk] : sys.F_blocks()) {
    blocks["F_" + std::to_string(key.first) + "_" +
           std::to_string(key.second)] = matrix_to_json(blk);
  }
  for (const auto& [key, blk] : sys.H_blocks()) {
    blocks["H_" + std::to_string(key.first) + "_" +
           std::to_string(key.second)] = matrix_to_json(blk);
  }
  j["blocks"] = std::move(blocks);
  return j;
}

nlohmann::json generator_to_json(const SignalGenerator& gen) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "signal_generator";
  j["multiset_ordering"] = kron::kOrderingConvention;
  j["dims"] = {{"sigma", gen.sigma()}, {"m", gen.m()}, {"L", gen.max_degree()}};
  json blocks = json::object();
  for (const auto& [l, blk] : gen.S_blocks()) {
    blocks["S_" + std::to_string(l)] = matrix_to_json(blk);
  }
  for (const auto& [l, blk] : gen.U_blocks()) {
    blocks["U_" + std::to_string(l)] = matrix_to_json(blk);
  }
  j["blocks"] = std::move(blocks);
  return j;
}

nlohmann::json series_to_json(const MomentSeries& series, int p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "moment_series";
  j["multiset_ordering"] = kron::kOrderingConvention;
  j["dims"] = {{"sigma", series.sigma}, {"p", p}, {"kappa", series.kappa}};
  json yb = json::object();
  for (int l = 1; l <= series.kappa; ++l) {
    yb["Y_" + std::to_string(l)] = matrix_to_json(series.Y_at(l));
  }
  j["Y"] = std::move(yb);
  if (series.has_X()) {
    json xb = json::object();
    for (int l = 1; l <= series.kappa; ++l) {
      xb["X_" + std::to_string(l)] = matrix_to_json(series.X_at(l));
    }
    j["X"] = std::move(xb);
  }
  return j;
}

PolySystem system_from_json(const nlohmann::json& j) {
  check_header(j, "poly_system");
  require(j.contains("dims"), "poly_system: missing dims");
  const auto& d = j["dims"];
  PolySystem sys(d.value("n", 0), d.value("m", 0), d.value("p", 0),
                 d.value("L", 0));
  for (const auto& [key, value] : j.value("blocks", json::object()).items()) {
    int i = 0, r = 0;
    char kind = 0;
    if (std::sscanf(key.c_str(), "F_%d_%d", &i, &r) == 2) {
      kind = 'F';
    } else if (std::sscanf(key.c_str(), "H_%d_%d", &i, &r) == 2) {
      kind = 'H';
    } else {
      throw Error(ErrorCode::kSchema, "poly_system: unknown block key " + key);
    }
    const Eigen::MatrixXd M = matrix_from_json(value, key.c_str());
    if (kind == 'F') {
      sys.set_F(i, r, M);
    } else {
      sys.set_H(i, r, M);
    }
  }
  return sys;
}

SignalGenerator generator_from_json(const nlohmann::json& j) {
  check_header(j, "signal_generator");
  require(j.contains("dims"), "signal_generator: missing dims");
  const auto& d = j["dims"];
  SignalGenerator gen(d.value("sigma", 0), d.value("m", 0), d.value("L", 0));
  for (const auto& [key, value] : j.value("blocks", json::object()).items()) {
    int l = 0;
    if (std::sscanf(key.c_str(), "S_%d", &l) == 1) {
      gen.set_S(l, matrix_from_json(value, key.c_str()));
    } else if (std::sscanf(key.c_str(), "U_%d", &l) == 1) {
      gen.set_U(l, matrix_from_json(value, key.c_str()));
    } else {
      throw Error(ErrorCode::kSchema,
                  "signal_generator: unknown block key " + key);
    }
  }
  gen.validate_spectrum();
  return gen;
}

MomentSeries series_from_json(const nlohmann::json& j) {
  check_header(j, "moment_series");
  const auto& d = j.at("dims");
  MomentSeries out;
  out.sigma = d.value("sigma", 0);
  out.kappa = d.value("kappa", 0);
  require(out.kappa >= 1, "moment_series: kappa >= 1");
  for (int l = 1; l <= out.kappa; ++l) {
    const std::string key = "Y_" + std::to_string(l);
    require(j.at("Y").contains(key), "moment_series: missing " + key);
    out.Y.push_back(matrix_from_json(j["Y"][key], key.c_str()));
  }
  if (j.contains("X")) {
    for (int l = 1; l <= out.kappa; ++l) {
      const std::string key = "X_" + std::to_string(l);
      require(j["X"].contains(key), "moment_series: missing " + key);
      out.X.push_back(matrix_from_json(j["X"][key], key.c_str()));
    }
  }
  return out;
}

void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) {
    throw Error(ErrorCode::kPrecondition, "cannot open " + path + " to write");
  }
  os << j.dump(2) << "\n";
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw Error(ErrorCode::kPrecondition, "cannot open " + path);
  }
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchema, std::string("JSON parse error: ") + e.what());
  }
  return j;
}

Model load_model(const std::string& path) {
  const json j = load_json(path);
  const std::string kind = j.value("kind", "");
  if (kind == "poly_system") return system_from_json(j);
  if (kind == "signal_generator") return generator_from_json(j);
  throw Error(ErrorCode::kSchema, "unknown model kind '" + kind + "'");
}

PolySystem load_system(const std::string& path) {
  return system_from_json(load_json(path));
}

SignalGenerator load_generator(const std::string& path) {
  return generator_from_json(load_json(path));
}

MomentSeries load_series(const std::string& path) {
  return series_from_json(load_json(path));
}

}  // namespace psmm::io
