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

#ifndef DEXMAP_STAGE_IO_HPP_
#define DEXMAP_STAGE_IO_HPP_

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dexmap/actuation.hpp"
#include "dexmap/dataset.hpp"
#include "dexmap/jsonl.hpp"
#include "dexmap/profile.hpp"
#include "dexmap/retarget.hpp"

namespace dexmap {

// Line formats of the intermediate pipeline stages, so stages compose via
// shell pipes: angles -> retarget -> actuate all speak
// {"frame_index": i, <payload>} with one record per line.

struct IndexedVector {
  std::int64_t frame_index = 0;
  Eigen::VectorXd values;
};

struct IndexedVectorFile {
  std::vector<IndexedVector> rows;
  std::vector<std::string> errors;
  std::size_t data_lines = 0;
};

/// Reads {"frame_index", "<key>": [...]} lines.
inline IndexedVectorFile read_indexed_vectors(std::istream& in,
                                              const char* key) {
  IndexedVectorFile file;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    ++file.data_lines;
    try {
      const nlohmann::json j = jsonl::parse_line(line, line_number);
      IndexedVector row;
      row.frame_index = jsonl::require_field(j, "frame_index", line_number)
                            .get<std::int64_t>();
      row.values = jsonl::as_vector(jsonl::require_field(j, key, line_number),
                                    key, line_number);
      file.rows.push_back(std::move(row));
    } catch (const InputError& e) {
      file.errors.push_back(e.what());
    } catch (const nlohmann::json::exception& e) {
      file.errors.push_back("line " + std::to_string(line_number) + ": " +
                            e.what());
    }
  }
  return file;
}

inline std::string retarget_line(std::int64_t frame_index,
                                 const RetargetOutcome& outcome,
                                 const HandProfile& profile) {
  const std::vector<std::string> names = profile.joint_names();
  std::string out = "{\"frame_index\":";
  out += std::to_string(frame_index);
  out += ",\"q\":";
  jsonl::append_array(out, outcome.q);
  out += ",\"saturated\":[";
  for (std::size_t i = 0; i < outcome.saturated.size(); ++i) {
    if (i) out += ',';
    jsonl::append_quoted(out, names[outcome.saturated[i]]);
  }
  out += "]}";
  return out;
}

inline std::string actuate_line(std::int64_t frame_index,
                                const ActuatorCommand& cmd,
                                const CouplingMatrix& coupling) {
  std::string out = "{\"frame_index\":";
  out += std::to_string(frame_index);
  out += ",\"u\":";
  jsonl::append_array(out, cmd.u_clamped);
  out += ",\"residual\":";
  out += jsonl::format_double(cmd.residual);
  out += ",\"coupling_inconsistent\":";
  out += cmd.coupling_inconsistent ? "true" : "false";
  out += ",\"saturated\":[";
  for (std::size_t i = 0; i < cmd.saturated.size(); ++i) {
    if (i) out += ',';
    jsonl::append_quoted(out, coupling.actuators()[cmd.saturated[i]].name);
  }
  out += "]}";
  return out;
}

// Calibration pairs: {"human": [...], "robot": [...]} per line.
struct CalibrationPairsFile {
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
  std::vector<std::string> errors;
};

inline CalibrationPairsFile read_calibration_pairs(std::istream& in) {
  CalibrationPairsFile file;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      const nlohmann::json j = jsonl::parse_line(line, line_number);
      file.pairs.emplace_back(
          jsonl::as_vector(jsonl::require_field(j, "human", line_number),
                           "human", line_number),
          jsonl::as_vector(jsonl::require_field(j, "robot", line_number),
                           "robot", line_number));
    } catch (const InputError& e) {
      file.errors.push_back(e.what());
    }
  }
  return file;
}

inline std::string fit_result_json(const std::string& finger,
                                   const FitResult& fit) {
  std::string out = "{\"finger\":";
  jsonl::append_quoted(out, finger);
  out += ",\"rows\":";
  out += std::to_string(fit.w.rows());
  out += ",\"cols\":";
  out += std::to_string(fit.w.cols());
  out += ",\"w\":[";
  for (Eigen::Index r = 0; r < fit.w.rows(); ++r) {
    if (r) out += ',';
    jsonl::append_array(out, fit.w.row(r));
  }
  out += "],\"rms_error\":";
  out += jsonl::format_double(fit.rms_error);
  out += ",\"per_sample_rms\":";
  jsonl::append_array(out, fit.per_sample_rms);
  out += '}';
  return out;
}

inline std::string split_line(const std::string& object_id,
                              const std::string& category, bool in_train) {
  std::string out = "{\"object_id\":";
  jsonl::append_quoted(out, object_id);
  out += ",\"category\":";
  jsonl::append_quoted(out, category);
  out += ",\"split\":";
  out += in_train ? "\"train\"" : "\"test\"";
  out += '}';
  return out;
}

inline std::string eval_line(std::size_t index, const GraspEvalReport& report) {
  std::string out = "{\"index\":";
  out += std::to_string(index);
  out += ",\"rotation_l1\":";
  out += jsonl::format_double(report.rotation_l1);
  out += ",\"translation_l1\":";
  out += jsonl::format_double(report.translation_l1);
  out += ",\"joints_l1\":";
  out += jsonl::format_double(report.joints_l1);
  out += ",\"aggregate\":";
  out += jsonl::format_double(report.aggregate);
  if (report.keypoint_l1) {
    out += ",\"keypoint_l1\":";
    out += jsonl::format_double(*report.keypoint_l1);
  }
  out += '}';
  return out;
}

}  // namespace dexmap

#endif  // DEXMAP_STAGE_IO_HPP_
