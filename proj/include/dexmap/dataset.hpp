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

#ifndef DEXMAP_DATASET_HPP_
#define DEXMAP_DATASET_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "dexmap/errors.hpp"
#include "dexmap/jsonl.hpp"

namespace dexmap {

// Grasp-record data model, the deterministic train/test split, and the L1
// evaluation metrics. Record file: one annotation per line,
//   {"object_id", "category", "hand_id", "R": [w,x,y,z], "T": [x,y,z],
//    "Q": [...], "closure": {"closed", "margin"} | null, "source_frame"}
// closure is null for records produced without contact input (unvalidated).

struct ClosureSummary {
  bool closed = false;
  double margin = 0.0;
};

struct GraspRecord {
  std::string object_id;
  std::string category;
  std::string hand_id;
  Eigen::Vector4d rotation{1, 0, 0, 0};  // unit quaternion, scalar first
  Eigen::Vector3d translation{0, 0, 0};  // meters
  Eigen::VectorXd joints;                // radians, length = profile d_RH
  std::optional<ClosureSummary> closure;
  std::int64_t source_frame = 0;
};

inline std::string grasp_record_line(const GraspRecord& r) {
  std::string out = "{\"object_id\":";
  jsonl::append_quoted(out, r.object_id);
  out += ",\"category\":";
  jsonl::append_quoted(out, r.category);
  out += ",\"hand_id\":";
  jsonl::append_quoted(out, r.hand_id);
  out += ",\"R\":";
  jsonl::append_array(out, r.rotation);
  out += ",\"T\":";
  jsonl::append_array(out, r.translation);
  out += ",\"Q\":";
  jsonl::append_array(out, r.joints);
  out += ",\"closure\":";
  if (r.closure) {
    out += "{\"closed\":";
    out += r.closure->closed ? "true" : "false";
    out += ",\"margin\":";
    out += jsonl::format_double(r.closure->margin);
    out += '}';
  } else {
    out += "null";
  }
  out += ",\"source_frame\":";
  out += std::to_string(r.source_frame);
  out += '}';
  return out;
}

struct RecordReadResult {
  std::vector<GraspRecord> records;
  std::vector<std::string> issues;  // renormalizations and rejections
  std::size_t malformed = 0;        // rejected lines (parse or quaternion)
  std::size_t renormalized = 0;
};

/// Reads a record file. Quaternions off unit norm by more than 1e-6 are
/// renormalized and flagged; off by more than 1e-2 the line is rejected.
inline RecordReadResult read_grasp_records(std::istream& in) {
  RecordReadResult result;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      const nlohmann::json j = jsonl::parse_line(line, line_number);
      GraspRecord r;
      r.object_id =
          jsonl::require_field(j, "object_id", line_number).get<std::string>();
      r.category =
          jsonl::require_field(j, "category", line_number).get<std::string>();
      r.hand_id =
          jsonl::require_field(j, "hand_id", line_number).get<std::string>();
      const Eigen::VectorXd rot = jsonl::as_vector(
          jsonl::require_field(j, "R", line_number), "R", line_number);
      if (rot.size() != 4) {
        throw InputError("line " + std::to_string(line_number) +
                         ": R must be a quaternion [w,x,y,z]");
      }
      const double norm = rot.norm();
      if (std::abs(norm - 1.0) > 1e-2) {
        throw InputError("line " + std::to_string(line_number) +
                         ": quaternion norm " + jsonl::format_double(norm) +
                         " too far from 1; record rejected");
      }
      r.rotation = rot;
      if (std::abs(norm - 1.0) > 1e-6) {
        r.rotation /= norm;
        ++result.renormalized;
        result.issues.push_back("line " + std::to_string(line_number) +
                                ": quaternion renormalized (norm " +
                                jsonl::format_double(norm) + ")");
      }
      r.translation = jsonl::as_vector3(
          jsonl::require_field(j, "T", line_number), "T", line_number);
      r.joints = jsonl::as_vector(jsonl::require_field(j, "Q", line_number),
                                  "Q", line_number);
      const auto& closure = jsonl::require_field(j, "closure", line_number);
      if (!closure.is_null()) {
        r.closure = ClosureSummary{
            jsonl::require_field(closure, "closed", line_number).get<bool>(),
            jsonl::require_field(closure, "margin", line_number)
                .get<double>()};
      }
      r.source_frame = jsonl::require_field(j, "source_frame", line_number)
                           .get<std::int64_t>();
      result.records.push_back(std::move(r));
    } catch (const InputError& e) {
      ++result.malformed;
      result.issues.push_back(e.what());
    } catch (const nlohmann::json::exception& e) {
      ++result.malformed;
      result.issues.push_back("line " + std::to_string(line_number) + ": " +
                              e.what());
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Manifest and split.

struct ManifestObject {
  std::string id;
  std::string category;
};

struct DatasetManifest {
  std::vector<std::string> categories;
  std::vector<ManifestObject> objects;
  double train_weight = 8.5;
  double test_weight = 1.5;
};

inline DatasetManifest parse_manifest(const nlohmann::json& j) {
  try {
    DatasetManifest m;
    for (const auto& c : j.at("categories")) {
      m.categories.push_back(c.get<std::string>());
    }
    for (const auto& o : j.at("objects")) {
      m.objects.push_back({o.at("id").get<std::string>(),
                           o.at("category").get<std::string>()});
    }
    if (j.contains("split_ratio")) {
      const auto& ratio = j["split_ratio"];
      if (!ratio.is_array() || ratio.size() != 2) {
        throw InputError("manifest: split_ratio must be [train, test]");
      }
      m.train_weight = ratio[0].get<double>();
      m.test_weight = ratio[1].get<double>();
    }
    for (const auto& o : m.objects) {
      if (std::find(m.categories.begin(), m.categories.end(), o.category) ==
          m.categories.end()) {
        throw InputError("manifest: object '" + o.id +
                         "' references undeclared category '" + o.category +
                         "'");
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("manifest: malformed document: ") + e.what());
  }
}

inline DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open manifest: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("manifest " + path + ": invalid JSON: " + e.what());
  }
  return parse_manifest(j);
}

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

struct SplitResult {
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::vector<std::string> warnings;
};

/// Stratified, hash-based object split. Per category the objects are ordered
/// by a seeded hash of their id and the first round(train_fraction * n) go
/// to train, so the split is reproducible without being stored.
inline SplitResult split_dataset(const DatasetManifest& manifest,
                                 std::uint64_t seed) {
  if (manifest.objects.empty()) {
    throw EmptyManifest("split_dataset: manifest lists no objects");
  }
  if (!(manifest.train_weight >= 0.0) || !(manifest.test_weight >= 0.0) ||
      manifest.train_weight + manifest.test_weight <= 0.0) {
    throw InputError("split_dataset: invalid split ratio");
  }
  const double fraction =
      manifest.train_weight / (manifest.train_weight + manifest.test_weight);

  SplitResult result;
  const std::uint64_t seed_mix = detail::splitmix64(seed);
  for (const auto& category : manifest.categories) {
    std::vector<std::pair<std::uint64_t, const ManifestObject*>> members;
    for (const auto& o : manifest.objects) {
      if (o.category == category) {
        members.emplace_back(
            detail::splitmix64(detail::fnv1a64(o.id) ^ seed_mix), &o);
      }
    }
    if (members.empty()) continue;
    std::sort(members.begin(), members.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return a.second->id < b.second->id;
              });
    const std::size_t n = members.size();
    const std::size_t n_train = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
      (i < n_train ? result.train : result.test)
          .push_back(members[i].second->id);
    }
    if (n_train == 0 || n_train == n) {
      result.warnings.push_back(
          "SmallCategory: category '" + category + "' has " +
          std::to_string(n) + " object(s); the " +
          (n_train == n ? std::string("test") : std::string("train")) +
          " side is empty");
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Evaluation metrics.

struct GraspEvalReport {
  double rotation_l1 = 0.0;
  double translation_l1 = 0.0;
  double joints_l1 = 0.0;
  double aggregate = 0.0;  // lambda1*r + lambda2*t + lambda3*j
  std::optional<double> keypoint_l1;
};

/// Per-record L1 errors. The quaternion is sign-aligned first (flip the
/// prediction when the dot product is negative) so the double cover of the
/// rotation group does not inflate the metric.
inline GraspEvalReport grasp_l1_error(const GraspRecord& pred,
                                      const GraspRecord& truth,
                                      const Eigen::Vector3d& lambda) {
  if (pred.hand_id != truth.hand_id) {
    throw ProfileMismatch("grasp_l1_error: records reference different hands ('" +
                          pred.hand_id + "' vs '" + truth.hand_id + "')");
  }
  if (pred.joints.size() != truth.joints.size()) {
    throw ProfileMismatch("grasp_l1_error: joint vectors have different "
                          "lengths");
  }
  GraspEvalReport report;
  Eigen::Vector4d q_pred = pred.rotation;
  if (q_pred.dot(truth.rotation) < 0.0) q_pred = -q_pred;
  report.rotation_l1 = (q_pred - truth.rotation).cwiseAbs().sum();
  report.translation_l1 =
      (pred.translation - truth.translation).cwiseAbs().sum();
  report.joints_l1 = (pred.joints - truth.joints).cwiseAbs().sum();
  report.aggregate = lambda(0) * report.rotation_l1 +
                     lambda(1) * report.translation_l1 +
                     lambda(2) * report.joints_l1;
  return report;
}

/// Keypoint reconstruction L1: the component-wise absolute error summed
/// over all points.
inline double keypoint_recon_l1(const std::vector<Eigen::Vector3d>& pred,
                                const std::vector<Eigen::Vector3d>& truth) {
  if (pred.size() != truth.size()) {
    throw DimensionMismatch("keypoint_recon_l1: point counts differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    total += (pred[i] - truth[i]).cwiseAbs().sum();
  }
  return total;
}

// ---------------------------------------------------------------------------
// Statistics.

struct CategoryStats {
  std::size_t objects_in_manifest = 0;
  std::size_t objects_seen = 0;
  std::size_t grasps = 0;
};

struct DatasetStats {
  std::size_t total_records = 0;
  std::size_t malformed_lines = 0;
  std::size_t unknown_objects = 0;  // records whose object_id is unlisted
  std::map<std::string, CategoryStats> per_category;
  std::map<std::string, std::size_t> per_hand;
  std::size_t validated = 0;
  std::size_t closed = 0;

  double closure_pass_rate() const {
    return validated == 0
               ? 0.0
               : static_cast<double>(closed) / static_cast<double>(validated);
  }
};

inline DatasetStats dataset_stats(const std::vector<GraspRecord>& records,
                                  const DatasetManifest& manifest,
                                  std::size_t malformed_lines = 0) {
  DatasetStats stats;
  stats.malformed_lines = malformed_lines;
  for (const auto& c : manifest.categories) stats.per_category[c] = {};
  std::map<std::string, std::string> object_category;
  for (const auto& o : manifest.objects) {
    object_category[o.id] = o.category;
    ++stats.per_category[o.category].objects_in_manifest;
  }

  std::map<std::string, bool> seen_object;
  for (const auto& r : records) {
    ++stats.total_records;
    ++stats.per_hand[r.hand_id];
    auto it = object_category.find(r.object_id);
    if (it == object_category.end()) {
      ++stats.unknown_objects;
    } else {
      auto& cat = stats.per_category[it->second];
      ++cat.grasps;
      if (!seen_object[r.object_id]) {
        seen_object[r.object_id] = true;
        ++cat.objects_seen;
      }
    }
    if (r.closure) {
      ++stats.validated;
      if (r.closure->closed) ++stats.closed;
    }
  }
  return stats;
}

inline std::string dataset_stats_json(const DatasetStats& stats) {
  std::string out = "{\"total_records\":";
  out += std::to_string(stats.total_records);
  out += ",\"malformed_lines\":";
  out += std::to_string(stats.malformed_lines);
  out += ",\"unknown_objects\":";
  out += std::to_string(stats.unknown_objects);
  out += ",\"per_category\":{";
  bool first = true;
  for (const auto& [name, cat] : stats.per_category) {
    if (!first) out += ',';
    first = false;
    jsonl::append_quoted(out, name);
    out += ":{\"objects_in_manifest\":";
    out += std::to_string(cat.objects_in_manifest);
    out += ",\"objects_seen\":";
    out += std::to_string(cat.objects_seen);
    out += ",\"grasps\":";
    out += std::to_string(cat.grasps);
    out += '}';
  }
  out += "},\"per_hand\":{";
  first = true;
  for (const auto& [name, count] : stats.per_hand) {
    if (!first) out += ',';
    first = false;
    jsonl::append_quoted(out, name);
    out += ':';
    out += std::to_string(count);
  }
  out += "},\"closure\":{\"validated\":";
  out += std::to_string(stats.validated);
  out += ",\"closed\":";
  out += std::to_string(stats.closed);
  out += ",\"pass_rate\":";
  out += jsonl::format_double(stats.closure_pass_rate());
  out += "}}";
  return out;
}

}  // namespace dexmap

#endif  // DEXMAP_DATASET_HPP_
