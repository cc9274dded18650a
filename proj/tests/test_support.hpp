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

// Shared fixtures and independent oracles for the test suites. Everything
// here stays independent of the library's solver paths: closure is checked
// by dense direction sampling, ranks by full-pivot LU.

#ifndef DEXMAP_TESTS_TEST_SUPPORT_HPP_
#define DEXMAP_TESTS_TEST_SUPPORT_HPP_

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "dexmap/force_closure.hpp"
#include "dexmap/hand_kinematics.hpp"

namespace dexmap_test {

// ---------------------------------------------------------------------------
// Synthetic hands.
//
// Fingers radiate from the palm anchor (origin) inside the palm plane z = 0;
// the wrist and middle-finger base are placed symmetrically so the anchor is
// exact. Per finger: an in-plane splay gamma (the abduction the extractor
// must report when the proximal bend keeps a positive in-plane component)
// and three bend angles about the finger's fixed flexion axis, which the
// extractor must report as the three flexion angles exactly.

struct FingerShape {
  double splay = 0.0;                    // radians, in palm plane
  std::array<double, 3> bends{0, 0, 0};  // radians, about the flexion axis
};

struct HandShape {
  std::array<FingerShape, 5> fingers{};
};

inline dexmap::KeypointFrame make_radial_hand(const HandShape& shape,
                                              std::int64_t frame_index = 0) {
  const double base_angle[5] = {0.96, 0.44, 0.0, -0.35, -0.66};
  const double base_radius[5] = {0.035, 0.045, 0.040, 0.042, 0.038};
  const double seg_len[5][3] = {{0.032, 0.030, 0.025},
                                {0.040, 0.028, 0.022},
                                {0.044, 0.030, 0.024},
                                {0.040, 0.028, 0.022},
                                {0.032, 0.022, 0.018}};

  dexmap::KeypointFrame frame;
  frame.frame_index = frame_index;
  const auto layout = dexmap::HandSkeletonLayout::standard();
  const Eigen::Vector3d z(0, 0, 1);

  // Anchor at the origin: wrist and middle base mirror each other.
  frame.points[layout.wrist] = Eigen::Vector3d(0, -base_radius[2], 0);

  for (int f = 0; f < 5; ++f) {
    const double alpha = base_angle[f];
    const Eigen::Vector3d radial(std::sin(alpha), std::cos(alpha), 0);
    const Eigen::Vector3d splayed =
        Eigen::AngleAxisd(shape.fingers[f].splay, z) * radial;
    const Eigen::Vector3d flex_axis = z.cross(splayed).normalized();

    Eigen::Vector3d p = base_radius[f] * radial;
    Eigen::Vector3d dir = splayed;
    const auto& chain = layout.chain(static_cast<dexmap::Finger>(f));
    frame.points[chain[0]] = p;
    for (int k = 0; k < 3; ++k) {
      dir = Eigen::AngleAxisd(shape.fingers[f].bends[k], flex_axis) * dir;
      p += seg_len[f][k] * dir;
      frame.points[chain[k + 1]] = p;
    }
  }
  return frame;
}

inline dexmap::KeypointFrame flat_hand(std::int64_t frame_index = 0) {
  return make_radial_hand(HandShape{}, frame_index);
}

inline HandShape random_hand_shape(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> splay(-0.25, 0.25);
  std::uniform_real_distribution<double> bend(0.3, 1.0);
  HandShape shape;
  for (auto& finger : shape.fingers) {
    finger.splay = splay(rng);
    for (auto& b : finger.bends) b = bend(rng);
  }
  return shape;
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline dexmap::KeypointFrame transform_frame(const dexmap::KeypointFrame& in,
                                             const Eigen::Matrix3d& r,
                                             const Eigen::Vector3d& t) {
  dexmap::KeypointFrame out = in;
  for (auto& p : out.points) p = r * p + t;
  return out;
}

// ---------------------------------------------------------------------------
// Force-closure fixtures and the brute-force oracle.

inline std::vector<dexmap::Contact> tetrahedron_contacts(double mu) {
  const double s = 1.0 / std::sqrt(3.0);
  std::vector<dexmap::Contact> contacts;
  for (const auto& v : {Eigen::Vector3d{1, 1, 1}, Eigen::Vector3d{1, -1, -1},
                        Eigen::Vector3d{-1, 1, -1}, Eigen::Vector3d{-1, -1, 1}}) {
    const Eigen::Vector3d p = s * v;
    contacts.push_back({p, -p.normalized(), mu});
  }
  return contacts;
}

inline std::vector<dexmap::Contact> random_contact_set(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = count(rng);
  const double mu = unit(rng);
  const bool inward = unit(rng) < 0.5;

  std::vector<dexmap::Contact> contacts;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d p(gauss(rng), gauss(rng), gauss(rng));
    p *= std::cbrt(unit(rng)) / std::max(p.norm(), 1e-9);
    Eigen::Vector3d normal;
    if (inward && p.norm() > 1e-3) {
      normal = -p.normalized() +
               0.3 * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
    } else {
      normal = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
    }
    if (normal.norm() < 1e-9) normal = Eigen::Vector3d(0, 0, 1);
    contacts.push_back({p, normal.normalized(), mu});
  }
  return contacts;
}

/// Brute-force closure oracle: full-pivot-LU rank gate, then dense direction
/// sampling. Closed demands that every sampled unit wrench direction d sees
/// some column with positive component along it (max-dot test), beyond the
/// normalized tolerance.
inline bool oracle_force_closure(const dexmap::WrenchMatrix& wm, double tol,
                                 int directions = 10000,
                                 std::uint64_t seed = 314159) {
  const Eigen::MatrixXd g = wm.g;
  const int cols = static_cast<int>(g.cols());

  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  lu.setThreshold(1e-10);
  if (lu.rank() < 6) return false;

  double scale = 0.0;
  for (int i = 0; i < cols; ++i) scale = std::max(scale, g.col(i).norm());
  const double threshold = tol * scale;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto fails = [&](const Eigen::VectorXd& d) {
    return (g.transpose() * d).maxCoeff() <= threshold;
  };

  for (int k = 0; k < 6; ++k) {
    if (fails(Eigen::VectorXd::Unit(6, k))) return false;
    if (fails(-Eigen::VectorXd::Unit(6, k))) return false;
  }
  for (int i = 0; i < cols; ++i) {
    const double norm = g.col(i).norm();
    if (norm > 1e-12 && fails(-g.col(i) / norm)) return false;
  }
  for (int s = 0; s < directions; ++s) {
    Eigen::VectorXd d(6);
    for (int k = 0; k < 6; ++k) d(k) = gauss(rng);
    const double norm = d.norm();
    if (norm < 1e-9) continue;
    if (fails(d / norm)) return false;
  }
  return true;
}

}  // namespace dexmap_test

#endif  // DEXMAP_TESTS_TEST_SUPPORT_HPP_
