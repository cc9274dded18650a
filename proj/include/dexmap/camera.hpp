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

#ifndef DEXMAP_CAMERA_HPP_
#define DEXMAP_CAMERA_HPP_

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "dexmap/errors.hpp"

namespace dexmap {

/// Pinhole camera intrinsics. Focal lengths and principal point in pixels.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  bool valid() const {
    return std::isfinite(fx) && std::isfinite(fy) && std::isfinite(cx) &&
           std::isfinite(cy) && fx > 0.0 && fy > 0.0;
  }
};

inline void require_valid(const CameraIntrinsics& k) {
  if (!k.valid()) {
    throw InputError("invalid camera intrinsics: fx and fy must be positive "
                     "and all entries finite");
  }
}

/// Lifts a pixel observation with metric depth into the camera frame:
/// x = (u - cx) * d / fx, y = (v - cy) * d / fy, z = d.
inline Eigen::Vector3d deproject(const Eigen::Vector2d& pixel, double depth,
                                 const CameraIntrinsics& k) {
  require_valid(k);
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw NonPositiveDepth("deproject: depth must be positive and finite, got " +
                           std::to_string(depth));
  }
  return {(pixel.x() - k.cx) * depth / k.fx,
          (pixel.y() - k.cy) * depth / k.fy, depth};
}

/// Projects a camera-frame point back to pixel coordinates. Inverse of
/// deproject for any point with z > 0.
inline Eigen::Vector2d project(const Eigen::Vector3d& p,
                               const CameraIntrinsics& k) {
  require_valid(k);
  if (!(p.z() > 0.0)) {
    throw NonPositiveDepth("project: point must lie in front of the camera");
  }
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy};
}

}  // namespace dexmap

#endif  // DEXMAP_CAMERA_HPP_
