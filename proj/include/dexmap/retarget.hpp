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

#ifndef DEXMAP_RETARGET_HPP_
#define DEXMAP_RETARGET_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "dexmap/errors.hpp"
#include "dexmap/hand_kinematics.hpp"

namespace dexmap {

// Linear human-to-robot joint retargeting: theta_rh = W * theta_hh + bias.
// W is block-diagonal per finger; finger f's robot joints depend only on
// finger f's four human angles [abd, mcp, pip, dip].

/// One finger's block of the mapping matrix.
struct FingerMap {
  Eigen::MatrixXd w;     // robot finger DoF x 4, dimensionless gains
  Eigen::VectorXd bias;  // robot finger DoF, radians (default zero)
};

struct MappingMatrix {
  std::array<FingerMap, kFingerCount> fingers;

  int robot_dof() const {
    int total = 0;
    for (const auto& f : fingers) total += static_cast<int>(f.w.rows());
    return total;
  }

  void validate() const {
    for (int f = 0; f < kFingerCount; ++f) {
      const auto& block = fingers[f];
      if (block.w.cols() != kAnglesPerFinger) {
        throw DimensionMismatch(
            std::string("MappingMatrix: ") +
            finger_name(static_cast<Finger>(f)) + " block must have " +
            std::to_string(kAnglesPerFinger) + " columns, got " +
            std::to_string(block.w.cols()));
      }
      if (block.bias.size() != block.w.rows()) {
        throw DimensionMismatch(
            std::string("MappingMatrix: ") +
            finger_name(static_cast<Finger>(f)) +
            " bias length does not match block rows");
      }
      if (!block.w.allFinite() || !block.bias.allFinite()) {
        throw InputError(std::string("MappingMatrix: ") +
                         finger_name(static_cast<Finger>(f)) +
                         " block contains non-finite entries");
      }
    }
  }

  /// Dense block-diagonal robot_dof x 20 matrix.
  Eigen::MatrixXd assemble() const {
    const int rows = robot_dof();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(rows, kHumanDof);
    int row = 0;
    for (int f = 0; f < kFingerCount; ++f) {
      const auto& block = fingers[f].w;
      w.block(row, f * kAnglesPerFinger, block.rows(), kAnglesPerFinger) =
          block;
      row += static_cast<int>(block.rows());
    }
    return w;
  }

  Eigen::VectorXd assemble_bias() const {
    Eigen::VectorXd bias(robot_dof());
    int row = 0;
    for (const auto& f : fingers) {
      bias.segment(row, f.bias.size()) = f.bias;
      row += static_cast<int>(f.bias.size());
    }
    return bias;
  }

  /// Equal-DoF identity map (the square case of the dimension rule).
  static MappingMatrix identity(double scale = 1.0) {
    MappingMatrix m;
    for (auto& f : m.fingers) {
      f.w = scale * Eigen::MatrixXd::Identity(kAnglesPerFinger,
                                              kAnglesPerFinger);
      f.bias = Eigen::VectorXd::Zero(kAnglesPerFinger);
    }
    return m;
  }
};

/// Robot joint angles, partitioned by finger through the owning profile.
struct RobotHandAngles {
  Eigen::VectorXd q;  // radians
};

/// theta_rh = W * theta_hh + bias, exact (no limit clamping here).
inline RobotHandAngles apply_mapping(const HumanHandAngles& human,
                                     const MappingMatrix& w) {
  w.validate();
  RobotHandAngles out;
  out.q.resize(w.robot_dof());
  const Eigen::VectorXd flat = human.flatten();
  int row = 0;
  for (int f = 0; f < kFingerCount; ++f) {
    const auto& block = w.fingers[f];
    out.q.segment(row, block.w.rows()) =
        block.w * flat.segment(f * kAnglesPerFinger, kAnglesPerFinger) +
        block.bias;
    row += static_cast<int>(block.w.rows());
  }
  return out;
}

/// Paired human/robot joint samples for one finger.
struct CalibrationSet {
  Finger finger = Finger::kIndex;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> samples;

  int human_dof() const {
    return samples.empty() ? 0 : static_cast<int>(samples.front().first.size());
  }
  int robot_dof() const {
    return samples.empty() ? 0
                           : static_cast<int>(samples.front().second.size());
  }
};

struct FitResult {
  Eigen::MatrixXd w;                // robot_dof x human_dof
  Eigen::VectorXd per_sample_rms;   // residual per calibration sample
  double rms_error = 0.0;           // RMS over all scalar residuals
};

/// Overall joint-angle prediction error: the root-mean-square over all
/// scalar residuals, sqrt(sum of squared differences / total scalar count).
inline double mapping_error(const std::vector<Eigen::VectorXd>& pred,
                            const std::vector<Eigen::VectorXd>& truth) {
  if (pred.size() != truth.size()) {
    throw DimensionMismatch("mapping_error: list lengths differ");
  }
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].size() != truth[i].size()) {
      throw DimensionMismatch("mapping_error: sample " + std::to_string(i) +
                              " dimensions differ");
    }
    sum_sq += (pred[i] - truth[i]).squaredNorm();
    count += static_cast<std::size_t>(pred[i].size());
  }
  if (count == 0) return 0.0;
  return std::sqrt(sum_sq / static_cast<double>(count));
}

inline double mapping_error(const std::vector<HumanHandAngles>& pred,
                            const std::vector<HumanHandAngles>& truth) {
  std::vector<Eigen::VectorXd> a, b;
  a.reserve(pred.size());
  b.reserve(truth.size());
  for (const auto& p : pred) a.push_back(p.flatten());
  for (const auto& t : truth) b.push_back(t.flatten());
  return mapping_error(a, b);
}

/// Least-squares fit of one finger block: min_W sum ||theta_rh - W theta_hh||^2
/// (+ ridge ||W||_F^2). The fit has no intercept; bias stays zero.
inline FitResult fit_mapping(const CalibrationSet& cal, double ridge = 0.0) {
  if (ridge < 0.0) {
    throw InputError("fit_mapping: ridge must be non-negative");
  }
  const int n = static_cast<int>(cal.samples.size());
  const int h = cal.human_dof();
  const int r = cal.robot_dof();
  if (n == 0 || h == 0 || r == 0) {
    throw RankDeficient("fit_mapping: empty calibration set");
  }
  if (n < h && ridge == 0.0) {
    throw RankDeficient("fit_mapping: " + std::to_string(n) +
                        " samples cannot determine a " + std::to_string(h) +
                        "-DoF finger map");
  }

  Eigen::MatrixXd x(n, h);
  Eigen::MatrixXd y(n, r);
  for (int i = 0; i < n; ++i) {
    const auto& [human, robot] = cal.samples[i];
    if (human.size() != h || robot.size() != r) {
      throw DimensionMismatch("fit_mapping: sample " + std::to_string(i) +
                              " has inconsistent dimensions");
    }
    x.row(i) = human.transpose();
    y.row(i) = robot.transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = 1e-10 * sigma(0);
  if (ridge == 0.0 && (sigma.minCoeff() <= cutoff || sigma(0) == 0.0)) {
    throw RankDeficient("fit_mapping: design matrix is rank-deficient and "
                        "ridge is zero; the normal equations are singular");
  }

  // W^T = V diag(s/(s^2+ridge)) U^T Y, one robot joint per column of Y.
  Eigen::VectorXd gains(sigma.size());
  for (int i = 0; i < sigma.size(); ++i) {
    const double s = sigma(i);
    gains(i) = (s > cutoff) ? s / (s * s + ridge) : 0.0;
  }
  const Eigen::MatrixXd wt = svd.matrixV() * gains.asDiagonal() *
                             svd.matrixU().transpose() * y;

  FitResult result;
  result.w = wt.transpose();
  const Eigen::MatrixXd residual = y - x * wt;
  result.per_sample_rms.resize(n);
  for (int i = 0; i < n; ++i) {
    result.per_sample_rms(i) =
        std::sqrt(residual.row(i).squaredNorm() / static_cast<double>(r));
  }
  result.rms_error =
      std::sqrt(residual.squaredNorm() / static_cast<double>(n * r));
  return result;
}

}  // namespace dexmap

#endif  // DEXMAP_RETARGET_HPP_
