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

#ifndef DEXMAP_STREAM_IO_HPP_
#define DEXMAP_STREAM_IO_HPP_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dexmap/camera.hpp"
#include "dexmap/hand_kinematics.hpp"
#include "dexmap/jsonl.hpp"

namespace dexmap {

// Keypoint stream file: one frame per line,
//   {"frame_index": i, "mode": "pixel_depth"|"camera_3d",
//    "points": [[a,b,c] x 21], "pose": {"R": [w,x,y,z], "T": [x,y,z]}?}
// with an optional header line {"intrinsics": {"fx","fy","cx","cy"}} that
// must precede any pixel_depth frame. pixel_depth points are [u px, v px,
// depth m]; camera_3d points are [x,y,z m]. The pose field is optional hand
// pose feedback carried through to grasp records (identity when absent).

/// Hand pose relative to the object: unit quaternion (w,x,y,z) + meters.
struct FramePose {
  Eigen::Vector4d rotation{1, 0, 0, 0};
  Eigen::Vector3d translation{0, 0, 0};
};

struct StreamFrame {
  KeypointFrame frame;
  std::optional<FramePose> pose;
};

struct KeypointStream {
  std::optional<CameraIntrinsics> intrinsics;
  std::vector<StreamFrame> frames;
  std::vector<std::string> errors;  // one entry per unusable data line
  std::size_t data_lines = 0;       // frames.size() + errors.size()
};

inline KeypointStream read_keypoint_stream(std::istream& in) {
  KeypointStream stream;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = jsonl::parse_line(line, line_number);
    } catch (const InputError& e) {
      ++stream.data_lines;
      stream.errors.push_back(e.what());
      continue;
    }

    if (j.contains("intrinsics")) {
      try {
        const auto& k = j["intrinsics"];
        CameraIntrinsics intr{
            jsonl::require_field(k, "fx", line_number).get<double>(),
            jsonl::require_field(k, "fy", line_number).get<double>(),
            jsonl::require_field(k, "cx", line_number).get<double>(),
            jsonl::require_field(k, "cy", line_number).get<double>()};
        require_valid(intr);
        stream.intrinsics = intr;
      } catch (const InputError& e) {
        stream.errors.push_back(e.what());
      }
      continue;
    }

    ++stream.data_lines;
    try {
      StreamFrame sf;
      sf.frame.frame_index =
          jsonl::require_field(j, "frame_index", line_number)
              .get<std::int64_t>();
      if (sf.frame.frame_index < 0) {
        throw InputError("line " + std::to_string(line_number) +
                         ": frame_index must be >= 0");
      }
      const std::string mode =
          jsonl::require_field(j, "mode", line_number).get<std::string>();
      const auto& points = jsonl::require_field(j, "points", line_number);
      if (!points.is_array() || points.size() != kLandmarkCount) {
        throw InputError("line " + std::to_string(line_number) +
                         ": 'points' must hold exactly " +
                         std::to_string(kLandmarkCount) + " triples");
      }
      for (int i = 0; i < kLandmarkCount; ++i) {
        const Eigen::Vector3d row =
            jsonl::as_vector3(points[i], "points", line_number);
        if (mode == "camera_3d") {
          sf.frame.points[i] = row;
        } else if (mode == "pixel_depth") {
          if (!stream.intrinsics) {
            throw InputError("line " + std::to_string(line_number) +
                             ": pixel_depth frame before an intrinsics "
                             "header");
          }
          sf.frame.points[i] =
              deproject({row.x(), row.y()}, row.z(), *stream.intrinsics);
        } else {
          throw InputError("line " + std::to_string(line_number) +
                           ": unknown mode '" + mode + "'");
        }
      }
      if (!sf.frame.finite()) {
        throw InputError("line " + std::to_string(line_number) +
                         ": non-finite keypoints");
      }
      if (j.contains("pose")) {
        const auto& pose = j["pose"];
        FramePose fp;
        const Eigen::VectorXd r = jsonl::as_vector(
            jsonl::require_field(pose, "R", line_number), "R", line_number);
        if (r.size() != 4) {
          throw InputError("line " + std::to_string(line_number) +
                           ": pose.R must be a quaternion [w,x,y,z]");
        }
        fp.rotation = r;
        fp.translation = jsonl::as_vector3(
            jsonl::require_field(pose, "T", line_number), "T", line_number);
        sf.pose = fp;
      }
      stream.frames.push_back(std::move(sf));
    } catch (const InputError& e) {
      stream.errors.push_back(e.what());
    }
  }
  return stream;
}

/// Emits one camera_3d frame line (test fixtures and tooling).
inline std::string keypoint_frame_line(const KeypointFrame& frame,
                                       const std::optional<FramePose>& pose =
                                           std::nullopt) {
  std::string out = "{\"frame_index\":";
  out += std::to_string(frame.frame_index);
  out += ",\"mode\":\"camera_3d\",\"points\":[";
  for (int i = 0; i < kLandmarkCount; ++i) {
    if (i) out += ',';
    jsonl::append_array(out, frame.points[i]);
  }
  out += ']';
  if (pose) {
    out += ",\"pose\":{\"R\":";
    jsonl::append_array(out, pose->rotation);
    out += ",\"T\":";
    jsonl::append_array(out, pose->translation);
    out += '}';
  }
  out += '}';
  return out;
}

inline std::string intrinsics_header_line(const CameraIntrinsics& k) {
  std::string out = "{\"intrinsics\":{\"fx\":";
  out += jsonl::format_double(k.fx);
  out += ",\"fy\":";
  out += jsonl::format_double(k.fy);
  out += ",\"cx\":";
  out += jsonl::format_double(k.cx);
  out += ",\"cy\":";
  out += jsonl::format_double(k.cy);
  out += "}}";
  return out;
}

/// Output line of the `angles` stage: {"frame_index", "angles": [20 rad]}.
inline std::string angles_line(std::int64_t frame_index,
                               const HumanHandAngles& angles) {
  std::string out = "{\"frame_index\":";
  out += std::to_string(frame_index);
  out += ",\"angles\":";
  jsonl::append_array(out, angles.flatten());
  out += '}';
  return out;
}

}  // namespace dexmap

#endif  // DEXMAP_STREAM_IO_HPP_
