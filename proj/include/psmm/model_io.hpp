// Copyright (c) 2026 psmm developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "psmm/poly_system.hpp"

namespace psmm::io {

/// Model files are UTF-8 JSON carrying schema version, dimensions, dense
/// row-major coefficient blocks keyed F_i_r / H_i_r / S_l / U_l, and the
/// multiset-ordering convention tag. Files written under a different
/// ordering are rejected (kConventionMismatch).
inline constexpr int kSchemaVersion = 1;

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* key);

nlohmann::json system_to_json(const PolySystem& sys);
nlohmann::json generator_to_json(const SignalGenerator& gen);
nlohmann::json series_to_json(const MomentSeries& series, int p);

PolySystem system_from_json(const nlohmann::json& j);
SignalGenerator generator_from_json(const nlohmann::json& j);
MomentSeries series_from_json(const nlohmann::json& j);

void save_json(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

using Model = std::variant<PolySystem, SignalGenerator>;

/// Loads either file kind; validates shapes, convention tag, and (for
/// generators) the S_1 spectrum assumption.
Model load_model(const std::string& path);
PolySystem load_system(const std::string& path);
SignalGenerator load_generator(const std::string& path);
MomentSeries load_series(const std::string& path);

}  // namespace psmm::io
