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

#ifndef DEXMAP_HAND_KINEMATICS_HPP_
#define DEXMAP_HAND_KINEMATICS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "dexmap/errors.hpp"

namespace dexmap {

// Human-hand joint angle extraction from 21 camera-frame keypoints.
//
// Conventions:
//  * Landmarks follow the standard 21-point layout: 0 = wrist, then four
//    landmarks per finger base-to-tip, thumb through little finger.
//  * The palm anchor ("palm center") is the midpoint of the wrist landmark
//    and the middle-finger base landmark.
//  * Joint vector q_{f,0} runs palm anchor -> finger base; q_{f,k} runs
//    landmark k-1 -> landmark k along the chain.
//  * Per finger we extract one abduction angle (base vector vs. the proximal
//    segment projected into the palm plane) and three flexion angles between
//    consecutive joint vectors. All angles are unsigned, in [0, pi].
//  * Five fingers x (1 abduction + 3 flexions) = the 20-dimensional human
//    joint vector. Flattened order: thumb..little, [abd, mcp, pip, dip].

enum class Finger : int { kThumb = 0, kIndex, kMiddle, kRing, kLittle };

inline constexpr int kFingerCount = 5;
inline constexpr int kLandmarkCount = 21;
inline constexpr int kAnglesPerFinger = 4;
inline constexpr int kHumanDof = kFingerCount * kAnglesPerFinger;

/// Vector norms below this are treated as sensor dropouts, not poses.
inline constexpr double kDegenerateNorm = 1e-12;

inline const char* finger_name(Finger f) {
  switch (f) {
    case Finger::kThumb:  return "thumb";
    case Finger::kIndex:  return "index";
    case Finger::kMiddle: return "middle";
    case Finger::kRing:   return "ring";
    case Finger::kLittle: return "little";
  }
  return "?";
}

/// Which landmark indices feed the angle extraction.
struct HandSkeletonLayout {
  // Base-to-tip landmark chain per finger.
  std::array<std::array<int, 4>, kFingerCount> finger_landmarks{};
  int wrist = 0;
  // Together with the palm anchor these two span the palm plane.
  int palm_plane_ring_base = 13;
  int palm_plane_index_base = 5;

  static HandSkeletonLayout standard() {
    HandSkeletonLayout layout;
    layout.finger_landmarks = {{{1, 2, 3, 4},
                                {5, 6, 7, 8},
                                {9, 10, 11, 12},
                                {13, 14, 15, 16},
                                {17, 18, 19, 20}}};
    return layout;
  }

  const std::array<int, 4>& chain(Finger f) const {
    return finger_landmarks[static_cast<int>(f)];
  }

  bool valid() const {
    std::array<bool, kLandmarkCount> seen{};
    auto mark = [&seen](int idx) {
      if (idx < 0 || idx >= kLandmarkCount || seen[idx]) return false;
      seen[idx] = true;
      return true;
    };
    if (!mark(wrist)) return false;
    for (const auto& chain : finger_landmarks) {
      for (int idx : chain) {
        if (!mark(idx)) return false;
      }
    }
    return true;
  }
};

/// One timestamped set of 21 camera-frame keypoints, in meters.
struct KeypointFrame {
  std::int64_t frame_index = 0;
  std::array<Eigen::Vector3d, kLandmarkCount> points{};

  bool finite() const {
    for (const auto& p : points) {
      if (!p.allFinite()) return false;
    }
    return true;
  }
};

/// Unit palm normal plus the anchor point it was computed about.
struct PalmFrame {
  Eigen::Vector3d normal{0, 0, 1};
  Eigen::Vector3d anchor{0, 0, 0};
};

/// The 20-dimensional human joint-angle vector, partitioned by finger.
struct HumanHandAngles {
  // Per finger: [abduction, flex_mcp, flex_pip, flex_dip], radians.
  std::array<std::array<double, kAnglesPerFinger>, kFingerCount> by_finger{};

  double abduction(Finger f) const {
    return by_finger[static_cast<int>(f)][0];
  }
  double flexion(Finger f, int joint) const {
    return by_finger[static_cast<int>(f)][1 + joint];
  }

  Eigen::VectorXd flatten() const {
    Eigen::VectorXd v(kHumanDof);
    for (int f = 0; f < kFingerCount; ++f) {
      for (int a = 0; a < kAnglesPerFinger; ++a) {
        v[f * kAnglesPerFinger + a] = by_finger[f][a];
      }
    }
    return v;
  }

  static HumanHandAngles from_flat(const Eigen::VectorXd& v) {
    if (v.size() != kHumanDof) {
      throw DimensionMismatch("HumanHandAngles::from_flat: expected " +
                              std::to_string(kHumanDof) + " angles, got " +
                              std::to_string(v.size()));
    }
    HumanHandAngles angles;
    for (int f = 0; f < kFingerCount; ++f) {
      for (int a = 0; a < kAnglesPerFinger; ++a) {
        angles.by_finger[f][a] = v[f * kAnglesPerFinger + a];
      }
    }
    return angles;
  }
};

namespace detail {

inline double safe_arccos(double cosine) {
  return std::acos(std::clamp(cosine, -1.0, 1.0));
}

}  // namespace detail

/// Unsigned angle between two joint vectors (flexion-extension), in [0, pi].
inline double flexion_angle(const Eigen::Vector3d& q_n,
                            const Eigen::Vector3d& q_next) {
  const double n1 = q_n.norm();
  const double n2 = q_next.norm();
  if (n1 < kDegenerateNorm || n2 < kDegenerateNorm) {
    throw DegenerateSegment("flexion_angle: near-zero joint vector "
                            "(coincident keypoints)");
  }
  return detail::safe_arccos(q_n.dot(q_next) / (n1 * n2));
}

/// Palm plane and unit normal from the ring base, index base, and palm
/// anchor: n = (p_ring - anchor) x (p_index - anchor), normalized.
inline PalmFrame palm_normal(const KeypointFrame& frame,
                             const HandSkeletonLayout& layout) {
  const Eigen::Vector3d anchor =
      0.5 * (frame.points[layout.wrist] +
             frame.points[layout.chain(Finger::kMiddle)[0]]);
  const Eigen::Vector3d u = frame.points[layout.palm_plane_ring_base] - anchor;
  const Eigen::Vector3d v = frame.points[layout.palm_plane_index_base] - anchor;
  const Eigen::Vector3d cross = u.cross(v);
  const double norm = cross.norm();
  if (norm < kDegenerateNorm) {
    throw DegeneratePalm("palm_normal: palm landmarks are collinear or "
                         "coincident");
  }
  return {cross / norm, anchor};
}

/// Abduction-adduction angle: the proximal segment q_mcp is projected into
/// the palm plane and measured against the palm-to-base vector q_base.
inline double abduction_angle(const Eigen::Vector3d& q_base,
                              const Eigen::Vector3d& q_mcp,
                              const PalmFrame& palm) {
  const double base_norm = q_base.norm();
  if (base_norm < kDegenerateNorm) {
    throw DegenerateSegment("abduction_angle: near-zero base vector");
  }
  const Eigen::Vector3d projected =
      q_mcp - q_mcp.dot(palm.normal) * palm.normal;
  const double proj_norm = projected.norm();
  if (proj_norm < kDegenerateNorm) {
    throw DegenerateProjection("abduction_angle: segment is parallel to the "
                               "palm normal, projection vanishes");
  }
  return detail::safe_arccos(q_base.dot(projected) / (base_norm * proj_norm));
}

/// Full per-frame extraction: palm frame, then per finger one abduction and
/// three flexion angles. Degeneracies are rethrown with finger/joint context.
inline HumanHandAngles extract_angles(const KeypointFrame& frame,
                                      const HandSkeletonLayout& layout) {
  if (!frame.finite()) {
    throw InputError("extract_angles: frame " +
                     std::to_string(frame.frame_index) +
                     " contains non-finite keypoints");
  }
  const PalmFrame palm = palm_normal(frame, layout);

  HumanHandAngles angles;
  for (int f = 0; f < kFingerCount; ++f) {
    const Finger finger = static_cast<Finger>(f);
    const auto& chain = layout.chain(finger);

    // q[0] = palm anchor -> base, q[k] = chain segment k.
    std::array<Eigen::Vector3d, 4> q;
    q[0] = frame.points[chain[0]] - palm.anchor;
    for (int k = 1; k < 4; ++k) {
      q[k] = frame.points[chain[k]] - frame.points[chain[k - 1]];
    }

    try {
      angles.by_finger[f][0] = abduction_angle(q[0], q[1], palm);
    } catch (const DegenerateProjection& e) {
      throw DegenerateProjection(std::string(finger_name(finger)) +
                                 " abduction: " + e.what());
    } catch (const DegenerateSegment& e) {
      throw DegenerateSegment(std::string(finger_name(finger)) +
                              " abduction: " + e.what());
    }
    for (int k = 0; k < 3; ++k) {
      try {
        angles.by_finger[f][1 + k] = flexion_angle(q[k], q[k + 1]);
      } catch (const DegenerateSegment& e) {
        throw DegenerateSegment(std::string(finger_name(finger)) + " joint " +
                                std::to_string(k) + ": " + e.what());
      }
    }
  }
  return angles;
}

}  // namespace dexmap

#endif  // DEXMAP_HAND_KINEMATICS_HPP_
