// SPDX-License-Identifier: Apache-2.0
#include "nspkit/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "nspkit/errors.hpp"

namespace nspkit {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    data.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw ParseError("matrix JSON must carry rows, cols and data");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    throw ParseError("matrix JSON rows/cols must be integers");
  }
  const auto rows = j["rows"].get<Index>();
  const auto cols = j["cols"].get<Index>();
  if (rows < 0 || cols < 0) throw ParseError("matrix JSON sizes are negative");
  const auto& data = j["data"];
  if (!data.is_array() || static_cast<Index>(data.size()) != rows) {
    throw ParseError("matrix JSON data does not match the row count");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = data[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ParseError("matrix JSON row " + std::to_string(i) +
                       " does not match the column count");
    }
    for (Index jj = 0; jj < cols; ++jj) {
      const auto& cell = row[static_cast<size_t>(jj)];
      if (!cell.is_number()) {
        throw ParseError("matrix JSON entry (" + std::to_string(i) + "," +
                         std::to_string(jj) + ") is not a number");
      }
      m(i, jj) = cell.get<double>();
    }
  }
  return m;
}

std::string matrix_to_text(const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

namespace {

Matrix parse_whitespace_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<double> row;
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    while (ptr < end) {
      while (ptr < end && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
      if (ptr >= end) break;
      double value = 0.0;
      const auto res = std::from_chars(ptr, end, value);
      if (res.ec != std::errc()) {
        throw ParseError("matrix text: cannot parse '" +
                         std::string(ptr, end) + "' as a number");
      }
      row.push_back(value);
      ptr = res.ptr;
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix text: no rows found");
  const size_t cols = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != cols) {
      throw ParseError("matrix text: ragged rows");
    }
  }
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }
  return m;
}

}  // namespace

Matrix parse_matrix(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    throw ParseError("matrix input is empty");
  }
  if (text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("matrix JSON: ") + e.what());
    }
    return matrix_from_json(j);
  }
  return parse_whitespace_matrix(text);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
}

Matrix read_matrix_file(const std::string& path) {
  return parse_matrix(read_text_file(path));
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  write_text_file(path, matrix_to_json(m).dump(2) + "\n");
}

nlohmann::json tolerances_to_json(const Tolerances& t) {
  return {{"rank", t.rank},
          {"psd", t.psd},
          {"sym", t.sym},
          {"residual", t.residual}};
}

Tolerances tolerances_from_json(const nlohmann::json& j) {
  Tolerances t;
  if (!j.is_object()) throw ParseError("tolerances JSON must be an object");
  if (j.contains("rank")) t.rank = j["rank"].get<double>();
  if (j.contains("psd")) t.psd = j["psd"].get<double>();
  if (j.contains("sym")) t.sym = j["sym"].get<double>();
  if (j.contains("residual")) t.residual = j["residual"].get<double>();
  return t;
}

Tolerances tolerances_from_env() {
  const char* profile = std::getenv("NSPKIT_TOLERANCE_PROFILE");
  if (profile == nullptr || std::string(profile) == "default" ||
      std::string(profile).empty()) {
    return Tolerances::defaults();
  }
  const std::string name(profile);
  if (name == "strict") return Tolerances::strict();
  if (name == "loose") return Tolerances::loose();
  throw ParseError("NSPKIT_TOLERANCE_PROFILE must be default, strict or "
                   "loose (got '" +
                   name + "')");
}

}  // namespace nspkit
