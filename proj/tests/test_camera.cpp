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

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "dexmap/camera.hpp"

using dexmap::CameraIntrinsics;
using dexmap::deproject;
using dexmap::project;

TEST_CASE("deproject: principal-point ray goes straight down the axis") {
  const CameraIntrinsics k{600, 600, 320, 240};
  const Eigen::Vector3d p = deproject({320, 240}, 1.0, k);
  CHECK(p.x() == 0.0);
  CHECK(p.y() == 0.0);
  CHECK(p.z() == 1.0);
}

TEST_CASE("deproject: off-axis pixel") {
  // x = (920 - 320) * 1.0 / 600 = 1.
  const CameraIntrinsics k{600, 600, 320, 240};
  const Eigen::Vector3d p = deproject({920, 240}, 1.0, k);
  CHECK_THAT(p.x(), Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(p.y(), Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK(p.z() == 1.0);
}

TEST_CASE("deproject: non-positive depth is rejected") {
  const CameraIntrinsics k{600, 600, 320, 240};
  CHECK_THROWS_AS(deproject({10, 10}, 0.0, k), dexmap::NonPositiveDepth);
  CHECK_THROWS_AS(deproject({10, 10}, -0.5, k), dexmap::NonPositiveDepth);
}

TEST_CASE("deproject: invalid intrinsics are rejected") {
  CHECK_THROWS_AS(deproject({10, 10}, 1.0, CameraIntrinsics{0, 600, 320, 240}),
                  dexmap::InputError);
  CHECK_THROWS_AS(deproject({10, 10}, 1.0, CameraIntrinsics{600, -1, 320, 240}),
                  dexmap::InputError);
}

TEST_CASE("project o deproject is the identity") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> px(0.0, 1280.0);
  std::uniform_real_distribution<double> py(0.0, 960.0);
  std::uniform_real_distribution<double> depth(0.05, 5.0);
  std::uniform_real_distribution<double> focal(300.0, 900.0);

  for (int i = 0; i < 500; ++i) {
    const CameraIntrinsics k{focal(rng), focal(rng), px(rng), py(rng)};
    const Eigen::Vector2d pixel(px(rng), py(rng));
    const double d = depth(rng);
    const Eigen::Vector2d back = project(deproject(pixel, d, k), k);
    CHECK((back - pixel).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}
