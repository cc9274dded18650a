// Copyright 2026 The Dexmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEXMAP_JSONL_HPP_
#define DEXMAP_JSONL_HPP_

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <json.hpp>

#include "dexmap/errors.hpp"

namespace dexmap::jsonl {

// Line-delimited JSON is the streaming contract for every file format in
// this toolkit. Emission is hand-rolled so output is byte-deterministic:
// fixed key order and reals printed with 17 significant digits, which
// round-trips doubles exactly.

inline std::string format_double(double v) {
  if (!std::isfinite(v)) {
    throw InputError("cannot emit non-finite number");
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void append_quoted(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

template <typename Derived>
inline void append_array(std::string& out, const Eigen::DenseBase<Derived>& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v(i));
  }
  out += ']';
}

/// Parses one line, rethrowing parse failures as InputError with context.
inline nlohmann::json parse_line(const std::string& line,
                                 std::size_t line_number) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("line " + std::to_string(line_number) +
                     ": invalid JSON: " + e.what());
  }
}

inline const nlohmann::json& require_field(const nlohmann::json& j,
                                           const char* key,
                                           std::size_t line_number) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw InputError("line " + std::to_string(line_number) +
                     ": missing field '" + key + "'");
  }
  return *it;
}

inline Eigen::VectorXd as_vector(const nlohmann::json& j, const char* key,
                                 std::size_t line_number) {
  if (!j.is_array()) {
    throw InputError("line " + std::to_string(line_number) + ": field '" +
                     key + "' must be an array of numbers");
  }
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw InputError("line " + std::to_string(line_number) + ": field '" +
                       key + "' must contain only numbers");
    }
    v(i) = j[i].get<double>();
  }
  return v;
}

inline Eigen::Vector3d as_vector3(const nlohmann::json& j, const char* key,
                                  std::size_t line_number) {
  const Eigen::VectorXd v = as_vector(j, key, line_number);
  if (v.size() != 3) {
    throw InputError("line " + std::to_string(line_number) + ": field '" +
                     key + "' must have exactly 3 entries");
  }
  return v;
}

}  // namespace dexmap::jsonl

#endif  // DEXMAP_JSONL_HPP_
