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

#ifndef DEXMAP_ANNOTATE_HPP_
#define DEXMAP_ANNOTATE_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dexmap/actuation.hpp"
#include "dexmap/dataset.hpp"
#include "dexmap/force_closure.hpp"
#include "dexmap/hand_kinematics.hpp"
#include "dexmap/profile.hpp"
#include "dexmap/stream_io.hpp"

namespace dexmap {

// Annotation pipeline: keypoints -> human angles -> retargeted robot angles
// -> actuator commands -> closure verdict -> grasp record. Frames that fail
// extraction are skipped with a logged reason, never fatal. Output order
// matches input order regardless of the worker count.

struct AnnotateOptions {
  int cone_edges = kDefaultConeEdges;
  double closure_tol = 1e-9;
  double torque_scale = 1.0;  // characteristic length for torque rows
  int jobs = 1;
};

struct ObjectMeta {
  std::string object_id;
  std::string category;
};

using FrameContacts = std::map<std::int64_t, std::vector<Contact>>;

struct AnnotateResult {
  std::vector<GraspRecord> records;
  std::vector<std::string> skipped;      // one reason per dropped frame
  std::vector<std::string> diagnostics;  // saturation / coupling notes
  std::size_t input_frames = 0;          // records + skipped
};

namespace detail {

struct FrameOutcome {
  std::optional<GraspRecord> record;
  std::string skip_reason;
  std::vector<std::string> diagnostics;
};

inline FrameOutcome annotate_frame(const StreamFrame& sf,
                                   const HandProfile& profile,
                                   const ObjectMeta& meta,
                                   const FrameContacts* contacts,
                                   const AnnotateOptions& opts,
                                   const HandSkeletonLayout& layout) {
  FrameOutcome outcome;
  const std::int64_t idx = sf.frame.frame_index;
  const std::string tag = "frame " + std::to_string(idx) + ": ";
  try {
    const HumanHandAngles angles = extract_angles(sf.frame, layout);
    const RetargetOutcome retargeted = retarget_with_limits(profile, angles);
    if (!retargeted.saturated.empty()) {
      outcome.diagnostics.push_back(
          tag + std::to_string(retargeted.saturated.size()) +
          " joint(s) clamped to limits");
    }
    if (profile.coupling) {
      const ActuatorCommand cmd =
          joints_to_actuators(retargeted.q, *profile.coupling);
      if (cmd.coupling_inconsistent) {
        outcome.diagnostics.push_back(
            tag + "joint target outside coupling range (gap " +
            jsonl::format_double(cmd.residual) + " rad)");
      }
      if (!cmd.saturated.empty()) {
        outcome.diagnostics.push_back(
            tag + std::to_string(cmd.saturated.size()) +
            " actuator(s) saturated");
      }
    }

    GraspRecord record;
    record.object_id = meta.object_id;
    record.category = meta.category;
    record.hand_id = profile.hand_id;
    record.joints = retargeted.q;
    record.source_frame = idx;
    if (sf.pose) {
      const double norm = sf.pose->rotation.norm();
      if (std::abs(norm - 1.0) > 1e-2) {
        outcome.skip_reason = tag + "pose quaternion norm " +
                              jsonl::format_double(norm) + " too far from 1";
        return outcome;
      }
      record.rotation = sf.pose->rotation / norm;
      record.translation = sf.pose->translation;
    }
    if (contacts) {
      auto it = contacts->find(idx);
      if (it != contacts->end() && !it->second.empty()) {
        const ClosureVerdict verdict = check_force_closure(
            grasp_matrix(it->second, opts.cone_edges, opts.torque_scale),
            opts.closure_tol);
        record.closure = ClosureSummary{verdict.closed, verdict.margin};
      }
    }
    outcome.record = std::move(record);
  } catch (const InputError& e) {
    outcome.skip_reason = tag + e.what();
  }
  return outcome;
}

}  // namespace detail

inline AnnotateResult annotate_stream(const KeypointStream& stream,
                                      const HandProfile& profile,
                                      const ObjectMeta& meta,
                                      const FrameContacts* contacts = nullptr,
                                      const AnnotateOptions& opts = {},
                                      const HandSkeletonLayout& layout =
                                          HandSkeletonLayout::standard()) {
  profile.validate();
  AnnotateResult result;
  result.input_frames = stream.data_lines;
  result.skipped = stream.errors;  // lines that never parsed into frames

  const std::size_t n = stream.frames.size();
  std::vector<detail::FrameOutcome> outcomes(n);
  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      outcomes[i] = detail::annotate_frame(stream.frames[i], profile, meta,
                                           contacts, opts, layout);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int worker_count = static_cast<int>(
        std::min(static_cast<std::size_t>(jobs), n));
    workers.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w) {
      workers.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          outcomes[i] = detail::annotate_frame(stream.frames[i], profile,
                                               meta, contacts, opts, layout);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  for (auto& outcome : outcomes) {
    if (outcome.record) {
      result.records.push_back(std::move(*outcome.record));
    } else {
      result.skipped.push_back(outcome.skip_reason);
    }
    for (auto& d : outcome.diagnostics) {
      result.diagnostics.push_back(std::move(d));
    }
  }
  return result;
}

}  // namespace dexmap

#endif  // DEXMAP_ANNOTATE_HPP_
