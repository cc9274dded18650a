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

#ifndef DEXMAP_PROFILE_HPP_
#define DEXMAP_PROFILE_HPP_

#include <array>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "dexmap/actuation.hpp"
#include "dexmap/errors.hpp"
#include "dexmap/hand_kinematics.hpp"
#include "dexmap/retarget.hpp"

namespace dexmap {

// A robot hand profile is a declarative JSON file:
//
// {
//   "hand_id": "...",
//   "description": "...",
//   "fingers": [            // exactly five, thumb..little
//     {"name": "thumb",
//      "joints": [{"name": "...", "min_rad": a, "max_rad": b}, ...],
//      "w": [[4 gains] per joint],   // columns: [abd, mcp, pip, dip]
//      "bias": [per joint]           // optional, radians, default 0
//     }, ...
//   ],
//   "actuators": [{"name": "...", "min": a, "max": b}, ...],
//   "coupling": [{"joint": "...", "actuator": "...", "gain": g}, ...]
// }
//
// The coupling list is the sparse non-zero pattern of the joint/actuator
// matrix J (rows = joints in profile order, columns = actuators).

struct JointDef {
  std::string name;
  double min_rad = 0.0;
  double max_rad = 0.0;
};

struct FingerDef {
  std::string name;
  std::vector<JointDef> joints;
};

class HandProfile {
 public:
  std::string hand_id;
  std::string description;
  std::array<FingerDef, kFingerCount> fingers;
  MappingMatrix mapping;
  std::optional<CouplingMatrix> coupling;

  int robot_dof() const {
    int total = 0;
    for (const auto& f : fingers) total += static_cast<int>(f.joints.size());
    return total;
  }

  std::vector<std::string> joint_names() const {
    std::vector<std::string> names;
    names.reserve(robot_dof());
    for (const auto& f : fingers) {
      for (const auto& j : f.joints) names.push_back(j.name);
    }
    return names;
  }

  int joint_index(const std::string& name) const {
    int idx = 0;
    for (const auto& f : fingers) {
      for (const auto& j : f.joints) {
        if (j.name == name) return idx;
        ++idx;
      }
    }
    return -1;
  }

  void validate() const {
    static const char* kExpected[kFingerCount] = {"thumb", "index", "middle",
                                                  "ring", "little"};
    for (int f = 0; f < kFingerCount; ++f) {
      if (fingers[f].name != kExpected[f]) {
        throw InputError("HandProfile '" + hand_id + "': finger " +
                         std::to_string(f) + " must be named '" +
                         kExpected[f] + "', got '" + fingers[f].name + "'");
      }
      if (fingers[f].joints.empty()) {
        throw InputError("HandProfile '" + hand_id + "': finger '" +
                         fingers[f].name + "' has no joints");
      }
      for (const auto& j : fingers[f].joints) {
        if (!(j.min_rad <= j.max_rad)) {
          throw InputError("HandProfile '" + hand_id + "': joint '" + j.name +
                           "' has min_rad > max_rad");
        }
      }
      if (mapping.fingers[f].w.rows() !=
          static_cast<Eigen::Index>(fingers[f].joints.size())) {
        throw DimensionMismatch("HandProfile '" + hand_id + "': finger '" +
                                fingers[f].name +
                                "' mapping rows do not match joint count");
      }
    }
    mapping.validate();
    if (coupling && coupling->joint_dim() != robot_dof()) {
      throw DimensionMismatch("HandProfile '" + hand_id +
                              "': coupling matrix rows do not match the "
                              "joint count");
    }
  }
};

struct RetargetOutcome {
  Eigen::VectorXd q_exact;    // W theta + bias, before limits
  Eigen::VectorXd q;          // after clamping to joint limits
  std::vector<int> saturated; // joint indices that hit a limit
};

/// Retargets one human pose and clamps to the profile's joint limits.
/// Saturation is flagged, not fatal: annotation records, it does not crash.
inline RetargetOutcome retarget_with_limits(const HandProfile& profile,
                                            const HumanHandAngles& human) {
  RetargetOutcome out;
  out.q_exact = apply_mapping(human, profile.mapping).q;
  out.q = out.q_exact;
  int idx = 0;
  for (const auto& finger : profile.fingers) {
    for (const auto& joint : finger.joints) {
      const double clamped =
          std::clamp(out.q_exact(idx), joint.min_rad, joint.max_rad);
      if (clamped != out.q_exact(idx)) {
        out.q(idx) = clamped;
        out.saturated.push_back(idx);
      }
      ++idx;
    }
  }
  return out;
}

namespace detail {

inline HandProfile parse_hand_profile_impl(const nlohmann::json& j) {
  HandProfile profile;
  if (!j.contains("hand_id") || !j["hand_id"].is_string()) {
    throw InputError("hand profile: missing string field 'hand_id'");
  }
  profile.hand_id = j["hand_id"].get<std::string>();
  if (j.contains("description")) {
    profile.description = j["description"].get<std::string>();
  }

  if (!j.contains("fingers") || !j["fingers"].is_array() ||
      j["fingers"].size() != kFingerCount) {
    throw InputError("hand profile '" + profile.hand_id +
                     "': 'fingers' must list exactly 5 fingers");
  }
  for (int f = 0; f < kFingerCount; ++f) {
    const auto& jf = j["fingers"][f];
    FingerDef def;
    def.name = jf.at("name").get<std::string>();
    for (const auto& jj : jf.at("joints")) {
      def.joints.push_back({jj.at("name").get<std::string>(),
                            jj.at("min_rad").get<double>(),
                            jj.at("max_rad").get<double>()});
    }
    const auto& w = jf.at("w");
    FingerMap block;
    block.w.resize(def.joints.size(), kAnglesPerFinger);
    if (!w.is_array() || w.size() != def.joints.size()) {
      throw DimensionMismatch("hand profile '" + profile.hand_id +
                              "': finger '" + def.name +
                              "' needs one w row per joint");
    }
    for (std::size_t r = 0; r < w.size(); ++r) {
      if (!w[r].is_array() || w[r].size() != kAnglesPerFinger) {
        throw DimensionMismatch("hand profile '" + profile.hand_id +
                                "': finger '" + def.name + "' w row " +
                                std::to_string(r) + " must have 4 entries");
      }
      for (int c = 0; c < kAnglesPerFinger; ++c) {
        block.w(r, c) = w[r][c].get<double>();
      }
    }
    block.bias = Eigen::VectorXd::Zero(def.joints.size());
    if (jf.contains("bias")) {
      const auto& bias = jf["bias"];
      if (!bias.is_array() || bias.size() != def.joints.size()) {
        throw DimensionMismatch("hand profile '" + profile.hand_id +
                                "': finger '" + def.name +
                                "' bias length must match joint count");
      }
      for (std::size_t r = 0; r < bias.size(); ++r) {
        block.bias(r) = bias[r].get<double>();
      }
    }
    profile.fingers[f] = std::move(def);
    profile.mapping.fingers[f] = std::move(block);
  }

  if (j.contains("actuators") != j.contains("coupling")) {
    throw InputError("hand profile '" + profile.hand_id +
                     "': 'actuators' and 'coupling' must appear together");
  }
  if (j.contains("actuators")) {
    std::vector<ActuatorDef> actuators;
    for (const auto& ja : j["actuators"]) {
      ActuatorDef def;
      def.name = ja.at("name").get<std::string>();
      if (ja.contains("min")) def.min = ja["min"].get<double>();
      if (ja.contains("max")) def.max = ja["max"].get<double>();
      actuators.push_back(std::move(def));
    }
    Eigen::MatrixXd coupling =
        Eigen::MatrixXd::Zero(profile.robot_dof(), actuators.size());
    for (const auto& jc : j["coupling"]) {
      const std::string joint = jc.at("joint").get<std::string>();
      const std::string actuator = jc.at("actuator").get<std::string>();
      const int row = profile.joint_index(joint);
      if (row < 0) {
        throw InputError("hand profile '" + profile.hand_id +
                         "': coupling references unknown joint '" + joint +
                         "'");
      }
      int col = -1;
      for (std::size_t a = 0; a < actuators.size(); ++a) {
        if (actuators[a].name == actuator) {
          col = static_cast<int>(a);
          break;
        }
      }
      if (col < 0) {
        throw InputError("hand profile '" + profile.hand_id +
                         "': coupling references unknown actuator '" +
                         actuator + "'");
      }
      coupling(row, col) = jc.at("gain").get<double>();
    }
    profile.coupling.emplace(std::move(coupling), std::move(actuators));
  }

  profile.validate();
  return profile;
}

}  // namespace detail

inline HandProfile parse_hand_profile(const nlohmann::json& j) {
  try {
    return detail::parse_hand_profile_impl(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("hand profile: malformed document: ") +
                     e.what());
  }
}

inline HandProfile load_hand_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open hand profile: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("hand profile " + path + ": invalid JSON: " + e.what());
  }
  return parse_hand_profile(j);
}

}  // namespace dexmap

#endif  // DEXMAP_PROFILE_HPP_
