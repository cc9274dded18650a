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

#include <cmath>
#include <numbers>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "dexmap/hand_kinematics.hpp"
#include "test_support.hpp"

using namespace dexmap;
using dexmap_test::HandShape;
using dexmap_test::make_radial_hand;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

// Frame where only the palm-plane landmarks matter; everything else is
// parked far away so the layout stays non-degenerate.
KeypointFrame palm_fixture(const Eigen::Vector3d& wrist,
                           const Eigen::Vector3d& middle_base,
                           const Eigen::Vector3d& ring_base,
                           const Eigen::Vector3d& index_base) {
  KeypointFrame frame;
  for (int i = 0; i < kLandmarkCount; ++i) {
    frame.points[i] = Eigen::Vector3d(10.0 + i, 5.0, -3.0);
  }
  const auto layout = HandSkeletonLayout::standard();
  frame.points[layout.wrist] = wrist;
  frame.points[layout.chain(Finger::kMiddle)[0]] = middle_base;
  frame.points[layout.palm_plane_ring_base] = ring_base;
  frame.points[layout.palm_plane_index_base] = index_base;
  return frame;
}

}  // namespace

TEST_CASE("palm_normal: unit cross product of the palm triangle") {
  // Anchor = midpoint(wrist, middle base) = origin.
  const auto layout = HandSkeletonLayout::standard();
  const auto frame = palm_fixture({0, -1, 0}, {0, 1, 0}, {1, 0, 0}, {0, 1, 0});
  const PalmFrame palm = palm_normal(frame, layout);
  CHECK_THAT((palm.normal - Eigen::Vector3d(0, 0, 1)).norm(),
             WithinAbs(0.0, 1e-12));
  CHECK_THAT(palm.anchor.norm(), WithinAbs(0.0, 1e-15));
}

TEST_CASE("palm_normal: scale and translation invariant") {
  const auto layout = HandSkeletonLayout::standard();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector3d w(coord(rng), coord(rng), coord(rng));
    const Eigen::Vector3d m(coord(rng), coord(rng), coord(rng));
    const Eigen::Vector3d r(coord(rng), coord(rng), coord(rng));
    const Eigen::Vector3d i(coord(rng), coord(rng), coord(rng));

    PalmFrame base;
    try {
      base = palm_normal(palm_fixture(w, m, r, i), layout);
    } catch (const DegeneratePalm&) {
      continue;
    }
    // Independent oracle: raw cross product divided by its norm.
    const Eigen::Vector3d anchor = 0.5 * (w + m);
    const Eigen::Vector3d cross = (r - anchor).cross(i - anchor);
    CHECK_THAT((base.normal - cross / cross.norm()).norm(),
               WithinAbs(0.0, 1e-12));

    const double s = scale(rng);
    const Eigen::Vector3d t(coord(rng), coord(rng), coord(rng));
    const PalmFrame scaled =
        palm_normal(palm_fixture(s * w + t, s * m + t, s * r + t, s * i + t),
                    layout);
    CHECK_THAT((scaled.normal - base.normal).norm(), WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("palm_normal: collinear landmarks are degenerate") {
  const auto layout = HandSkeletonLayout::standard();
  const auto frame = palm_fixture({0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {2, 0, 0});
  CHECK_THROWS_AS(palm_normal(frame, layout), DegeneratePalm);
}

TEST_CASE("flexion_angle: parallel, orthogonal, antiparallel") {
  CHECK_THAT(flexion_angle({1, 0, 0}, {1, 0, 0}), WithinAbs(0.0, 1e-15));
  CHECK_THAT(flexion_angle({1, 0, 0}, {0, 1, 0}), WithinAbs(kPi / 2, 1e-15));
  CHECK_THAT(flexion_angle({1, 0, 0}, {-1, 0, 0}), WithinAbs(kPi, 1e-15));
}

TEST_CASE("flexion_angle: degenerate segment") {
  CHECK_THROWS_AS(flexion_angle({0, 0, 0}, {1, 0, 0}), DegenerateSegment);
  CHECK_THROWS_AS(flexion_angle({1, 0, 0}, {1e-13, 0, 0}), DegenerateSegment);
}

TEST_CASE("flexion_angle: symmetric in its arguments") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d a(gauss(rng), gauss(rng), gauss(rng));
    const Eigen::Vector3d b(gauss(rng), gauss(rng), gauss(rng));
    if (a.norm() < 1e-6 || b.norm() < 1e-6) continue;
    CHECK_THAT(flexion_angle(a, b) - flexion_angle(b, a),
               WithinAbs(0.0, 1e-12));
    const double angle = flexion_angle(a, b);
    CHECK(angle >= 0.0);
    CHECK(angle <= kPi);
  }
}

TEST_CASE("abduction_angle: in-plane parallel segment") {
  const PalmFrame palm{{0, 0, 1}, {0, 0, 0}};
  CHECK_THAT(abduction_angle({1, 0, 0}, {1, 0, 0}, palm),
             WithinAbs(0.0, 1e-15));
}

TEST_CASE("abduction_angle: projection then arccos") {
  // (1,1,1) projected along (0,0,1) is (1,1,0); angle to (1,0,0) is pi/4.
  const PalmFrame palm{{0, 0, 1}, {0, 0, 0}};
  CHECK_THAT(abduction_angle({1, 0, 0}, {1, 1, 1}, palm),
             WithinAbs(kPi / 4, 1e-12));
}

TEST_CASE("abduction_angle: segment parallel to the normal is degenerate") {
  const PalmFrame palm{{0, 0, 1}, {0, 0, 0}};
  CHECK_THROWS_AS(abduction_angle({1, 0, 0}, {0, 0, 1}, palm),
                  DegenerateProjection);
  CHECK_THROWS_AS(abduction_angle({0, 0, 0}, {1, 0, 0}, palm),
                  DegenerateSegment);
}

TEST_CASE("extract_angles: flat hand has all-zero angles") {
  const auto layout = HandSkeletonLayout::standard();
  const HumanHandAngles angles =
      extract_angles(dexmap_test::flat_hand(), layout);
  CHECK(angles.flatten().lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("extract_angles: bent index PIP shows up in exactly one angle") {
  HandShape shape;
  shape.fingers[static_cast<int>(Finger::kIndex)].bends = {0.0, kPi / 2, 0.0};
  const auto layout = HandSkeletonLayout::standard();
  const HumanHandAngles angles =
      extract_angles(make_radial_hand(shape), layout);

  CHECK_THAT(angles.flexion(Finger::kIndex, 1), WithinAbs(kPi / 2, 1e-9));
  CHECK_THAT(angles.flexion(Finger::kIndex, 0), WithinAbs(0.0, 1e-9));
  CHECK_THAT(angles.flexion(Finger::kIndex, 2), WithinAbs(0.0, 1e-9));
  CHECK_THAT(angles.abduction(Finger::kIndex), WithinAbs(0.0, 1e-9));
  for (Finger f : {Finger::kThumb, Finger::kMiddle, Finger::kRing,
                   Finger::kLittle}) {
    for (int j = 0; j < 3; ++j) {
      CHECK_THAT(angles.flexion(f, j), WithinAbs(0.0, 1e-9));
    }
  }
}

TEST_CASE("extract_angles: per-joint oracle for a shaped finger") {
  // With zero splay the construction makes each reported flexion exactly the
  // commanded bend, and the abduction exactly the splay magnitude.
  HandShape shape;
  auto& index = shape.fingers[static_cast<int>(Finger::kIndex)];
  index.splay = 0.2;
  index.bends = {0.4, 0.7, 0.3};
  const auto layout = HandSkeletonLayout::standard();
  const HumanHandAngles angles =
      extract_angles(make_radial_hand(shape), layout);

  CHECK_THAT(angles.abduction(Finger::kIndex), WithinAbs(0.2, 1e-12));
  // MCP flexion mixes splay and first bend: cos = cos(b0) cos(splay).
  CHECK_THAT(angles.flexion(Finger::kIndex, 0),
             WithinAbs(std::acos(std::cos(0.4) * std::cos(0.2)), 1e-12));
  CHECK_THAT(angles.flexion(Finger::kIndex, 1), WithinAbs(0.7, 1e-12));
  CHECK_THAT(angles.flexion(Finger::kIndex, 2), WithinAbs(0.3, 1e-12));
}

TEST_CASE("extract_angles: coincident keypoints name the finger") {
  const auto layout = HandSkeletonLayout::standard();
  KeypointFrame frame = dexmap_test::flat_hand();
  const auto& chain = layout.chain(Finger::kRing);
  frame.points[chain[2]] = frame.points[chain[1]];
  try {
    extract_angles(frame, layout);
    FAIL("expected DegenerateSegment");
  } catch (const DegenerateSegment& e) {
    CHECK(std::string(e.what()).find("ring") != std::string::npos);
  }
}

TEST_CASE("extract_angles: rotation and translation equivariant") {
  const auto layout = HandSkeletonLayout::standard();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> shift(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const KeypointFrame frame =
        make_radial_hand(dexmap_test::random_hand_shape(rng));
    const Eigen::VectorXd base = extract_angles(frame, layout).flatten();
    CHECK(base.minCoeff() >= 0.0);
    CHECK(base.maxCoeff() <= kPi);

    const Eigen::Matrix3d r = dexmap_test::random_rotation(rng);
    const Eigen::Vector3d t(shift(rng), shift(rng), shift(rng));
    const Eigen::VectorXd moved =
        extract_angles(dexmap_test::transform_frame(frame, r, t), layout)
            .flatten();
    CHECK((moved - base).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("layout validity") {
  CHECK(HandSkeletonLayout::standard().valid());
  HandSkeletonLayout bad = HandSkeletonLayout::standard();
  bad.finger_landmarks[1][0] = bad.finger_landmarks[0][0];
  CHECK_FALSE(bad.valid());
  HandSkeletonLayout out_of_range = HandSkeletonLayout::standard();
  out_of_range.finger_landmarks[4][3] = 21;
  CHECK_FALSE(out_of_range.valid());
}

TEST_CASE("HumanHandAngles: flatten round trip and bad sizes") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, 3.0);
  HumanHandAngles angles;
  for (auto& finger : angles.by_finger) {
    for (auto& a : finger) a = angle(rng);
  }
  const HumanHandAngles back = HumanHandAngles::from_flat(angles.flatten());
  CHECK(back.flatten() == angles.flatten());
  CHECK_THROWS_AS(HumanHandAngles::from_flat(Eigen::VectorXd::Zero(19)),
                  DimensionMismatch);
}
