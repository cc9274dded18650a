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

#ifndef DEXMAP_ERRORS_HPP_
#define DEXMAP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dexmap {

// Two failure families, matching the CLI exit-code contract:
// InputError (bad files, bad arguments, degenerate sensor data) -> exit 1,
// NumericalError (rank deficiency and friends) -> exit 2.

class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class NonPositiveDepth : public InputError {
 public:
  explicit NonPositiveDepth(const std::string& msg) : InputError(msg) {}
};

class DegeneratePalm : public InputError {
 public:
  explicit DegeneratePalm(const std::string& msg) : InputError(msg) {}
};

class DegenerateSegment : public InputError {
 public:
  explicit DegenerateSegment(const std::string& msg) : InputError(msg) {}
};

class DegenerateProjection : public InputError {
 public:
  explicit DegenerateProjection(const std::string& msg) : InputError(msg) {}
};

class DimensionMismatch : public InputError {
 public:
  explicit DimensionMismatch(const std::string& msg) : InputError(msg) {}
};

class NegativeFriction : public InputError {
 public:
  explicit NegativeFriction(const std::string& msg) : InputError(msg) {}
};

class EmptyContactSet : public InputError {
 public:
  explicit EmptyContactSet(const std::string& msg) : InputError(msg) {}
};

class EmptyManifest : public InputError {
 public:
  explicit EmptyManifest(const std::string& msg) : InputError(msg) {}
};

class ProfileMismatch : public InputError {
 public:
  explicit ProfileMismatch(const std::string& msg) : InputError(msg) {}
};

class RankDeficient : public NumericalError {
 public:
  explicit RankDeficient(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace dexmap

#endif  // DEXMAP_ERRORS_HPP_
