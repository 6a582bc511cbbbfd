// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "nspkit/types.hpp"

namespace nspkit {

inline constexpr const char* kToolVersion = "nspkit 0.1.0";

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Matrix <-> JSON object {"rows": r, "cols": c, "data": [[...], ...]}.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// Whitespace format: one row per line, entries separated by blanks.
std::string matrix_to_text(const Matrix& m);

/// Parses either format, auto-detected by the leading character.
Matrix parse_matrix(const std::string& text);

/// File wrappers; read auto-detects, write emits JSON.
Matrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

nlohmann::json tolerances_to_json(const Tolerances& t);
Tolerances tolerances_from_json(const nlohmann::json& j);

/// Baseline tolerance profile selected by NSPKIT_TOLERANCE_PROFILE
/// (default | strict | loose); unset means default.
Tolerances tolerances_from_env();

}  // namespace nspkit
