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

#ifndef DEXMAP_ACTUATION_HPP_
#define DEXMAP_ACTUATION_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "dexmap/errors.hpp"

namespace dexmap {

// Joint space <-> actuator space through the coupling matrix J (joints x
// actuators) and its Moore-Penrose pseudoinverse. J is the forward model
// theta = J u; the commanded u for a target theta is the least-squares
// projection u = J+ theta.

/// Singular values below kPinvCutoff * sigma_max are treated as zero.
inline constexpr double kPinvCutoff = 1e-10;

/// Joint targets farther than this (inf-norm, radians) from range(J) get a
/// coupling-consistency warning: the hand cannot reach them exactly.
inline constexpr double kCouplingGapThreshold = 0.05;

struct PseudoinverseResult {
  Eigen::MatrixXd pinv;             // actuator-dim x joint-dim
  Eigen::VectorXd singular_values;  // descending
  int rank = 0;
  bool conditioning_warning = false;  // sigma_min / sigma_max < kPinvCutoff
};

/// Moore-Penrose pseudoinverse via SVD with singular-value cutoff. Defined
/// for every finite matrix, including rank-deficient ones; coincides with
/// (J^T J)^-1 J^T whenever J has full column rank.
inline PseudoinverseResult pseudoinverse(const Eigen::MatrixXd& j) {
  if (!j.allFinite()) {
    throw InputError("pseudoinverse: matrix contains non-finite entries");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      j, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();

  PseudoinverseResult result;
  result.singular_values = sigma;
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double cutoff = kPinvCutoff * sigma_max;

  Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(sigma.size());
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) {
      inv_sigma(i) = 1.0 / sigma(i);
      ++result.rank;
    }
  }
  result.pinv = svd.matrixV() * inv_sigma.asDiagonal() *
                svd.matrixU().transpose();
  const double sigma_min = sigma.size() > 0 ? sigma(sigma.size() - 1) : 0.0;
  result.conditioning_warning =
      sigma_max > 0.0 && sigma_min / sigma_max < kPinvCutoff;
  return result;
}

/// Normal-equation form (J^T J)^-1 J^T. Requires full column rank.
inline Eigen::MatrixXd pseudoinverse_normal_equations(const Eigen::MatrixXd& j) {
  const Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  if (!lu.isInvertible()) {
    throw RankDeficient("pseudoinverse_normal_equations: J^T J is singular "
                        "(J lacks full column rank)");
  }
  return lu.inverse() * j.transpose();
}

struct ActuatorDef {
  std::string name;
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
};

/// Immutable coupling model. The pseudoinverse is computed once on
/// construction and reused for every conversion.
class CouplingMatrix {
 public:
  CouplingMatrix(Eigen::MatrixXd j, std::vector<ActuatorDef> actuators)
      : j_(std::move(j)), actuators_(std::move(actuators)) {
    if (static_cast<int>(actuators_.size()) != j_.cols()) {
      throw DimensionMismatch(
          "CouplingMatrix: actuator count does not match J columns");
    }
    if (j_.cols() > j_.rows()) {
      throw DimensionMismatch(
          "CouplingMatrix: more actuators than joints is unsupported");
    }
    for (int c = 0; c < j_.cols(); ++c) {
      if (j_.col(c).cwiseAbs().maxCoeff() == 0.0) {
        throw InputError("CouplingMatrix: actuator '" + actuators_[c].name +
                         "' drives no joint (zero column)");
      }
    }
    pinv_ = pseudoinverse(j_);
  }

  const Eigen::MatrixXd& j() const { return j_; }
  const Eigen::MatrixXd& j_pinv() const { return pinv_.pinv; }
  const PseudoinverseResult& pinv_info() const { return pinv_; }
  const std::vector<ActuatorDef>& actuators() const { return actuators_; }
  int joint_dim() const { return static_cast<int>(j_.rows()); }
  int actuator_dim() const { return static_cast<int>(j_.cols()); }

 private:
  Eigen::MatrixXd j_;
  std::vector<ActuatorDef> actuators_;
  PseudoinverseResult pinv_;
};

struct ActuatorCommand {
  Eigen::VectorXd u;          // least-squares command, before clamping
  Eigen::VectorXd u_clamped;  // command after actuator limits
  std::vector<int> saturated;
  double residual = 0.0;      // ||J u - theta||_inf, radians
  bool coupling_inconsistent = false;
};

/// u = J+ theta: the command minimizing ||J u - theta|| over all commands.
inline ActuatorCommand joints_to_actuators(const Eigen::VectorXd& theta,
                                           const CouplingMatrix& coupling) {
  if (theta.size() != coupling.joint_dim()) {
    throw DimensionMismatch("joints_to_actuators: expected " +
                            std::to_string(coupling.joint_dim()) +
                            " joint angles, got " +
                            std::to_string(theta.size()));
  }
  ActuatorCommand cmd;
  cmd.u = coupling.j_pinv() * theta;
  cmd.residual = (coupling.j() * cmd.u - theta).lpNorm<Eigen::Infinity>();
  cmd.coupling_inconsistent = cmd.residual > kCouplingGapThreshold;

  cmd.u_clamped = cmd.u;
  for (int i = 0; i < cmd.u.size(); ++i) {
    const auto& def = coupling.actuators()[i];
    const double clamped = std::clamp(cmd.u(i), def.min, def.max);
    if (clamped != cmd.u(i)) {
      cmd.u_clamped(i) = clamped;
      cmd.saturated.push_back(i);
    }
  }
  return cmd;
}

/// Forward coupling model theta = J u.
inline Eigen::VectorXd actuators_to_joints(const Eigen::VectorXd& u,
                                           const CouplingMatrix& coupling) {
  if (u.size() != coupling.actuator_dim()) {
    throw DimensionMismatch("actuators_to_joints: expected " +
                            std::to_string(coupling.actuator_dim()) +
                            " actuator values, got " + std::to_string(u.size()));
  }
  return coupling.j() * u;
}

}  // namespace dexmap

#endif  // DEXMAP_ACTUATION_HPP_
