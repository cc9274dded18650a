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

#ifndef DEXMAP_SIMPLEX_HPP_
#define DEXMAP_SIMPLEX_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dexmap/errors.hpp"

namespace dexmap {

// Small dense two-phase primal simplex for equality-form problems:
//
//   minimize c^T x   subject to   A x = b,  x >= 0.
//
// Phase 1 drives a full artificial basis to zero; phase 2 optimizes c.
// Bland's rule (lowest eligible index enters, lowest basic index breaks
// ratio ties) is used throughout, so the method cannot cycle. Intended for
// the problem sizes that arise in grasp analysis (tens of variables).

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
  int iterations = 0;
};

namespace detail {

inline constexpr double kLpPivotEps = 1e-11;
inline constexpr double kLpFeasEps = 1e-9;

// One simplex pass over the tableau. The objective row is row m; artificial
// columns (>= n_enterable) may leave the basis but never enter.
inline bool simplex_iterate(Eigen::MatrixXd& t, std::vector<int>& basis,
                            int n_enterable, int max_iters, int& iters,
                            bool& unbounded) {
  const int m = static_cast<int>(t.rows()) - 1;
  const int ncols = static_cast<int>(t.cols()) - 1;
  unbounded = false;

  while (iters < max_iters) {
    // Bland: first column with a negative reduced cost.
    int enter = -1;
    for (int j = 0; j < n_enterable && j < ncols; ++j) {
      if (t(m, j) < -kLpPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;  // optimal

    // Ratio test; Bland tie-break on the leaving basic variable index.
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t(i, enter) > kLpPivotEps) {
        const double ratio = t(i, ncols) / t(i, enter);
        if (leave < 0 || ratio < best_ratio - kLpPivotEps ||
            (ratio < best_ratio + kLpPivotEps && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      unbounded = true;
      return false;
    }

    // Pivot on (leave, enter).
    t.row(leave) /= t(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = t(i, enter);
      if (factor != 0.0) t.row(i) -= factor * t.row(leave);
    }
    basis[leave] = enter;
    ++iters;
  }
  return false;  // iteration limit
}

}  // namespace detail

inline LpResult solve_equality_lp(const Eigen::MatrixXd& a,
                                  const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& c,
                                  int max_iters = 10000) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n) {
    throw DimensionMismatch("solve_equality_lp: A, b, c shapes disagree");
  }

  // Tableau: [A | I_artificial | rhs] plus the objective row, with all
  // right-hand sides made non-negative.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  for (int i = 0; i < m; ++i) {
    const double sign = (b(i) < 0.0) ? -1.0 : 1.0;
    t.block(i, 0, 1, n) = sign * a.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * b(i);
  }

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  // Phase-1 objective: minimize the artificial sum. With the artificial
  // basis, reduced costs of the original columns are minus the column sums.
  for (int j = 0; j < n; ++j) t(m, j) = -t.block(0, j, m, 1).sum();
  t(m, n + m) = -t.block(0, n + m, m, 1).sum();

  LpResult result;
  bool unbounded = false;
  if (!detail::simplex_iterate(t, basis, n, max_iters, result.iterations,
                               unbounded)) {
    result.status =
        unbounded ? LpStatus::kUnbounded : LpStatus::kIterationLimit;
    return result;
  }
  if (-t(m, n + m) > detail::kLpFeasEps) {
    result.status = LpStatus::kInfeasible;
    return result;
  }

  // Pivot lingering zero-level artificials out where a real column allows.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t(i, j)) > detail::kLpPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) continue;  // redundant row; artificial stays at zero
    t.row(i) /= t(i, enter);
    for (int k = 0; k <= m; ++k) {
      if (k == i) continue;
      const double factor = t(k, enter);
      if (factor != 0.0) t.row(k) -= factor * t.row(i);
    }
    basis[i] = enter;
  }

  // Phase 2: rebuild the reduced-cost row for the real objective.
  t.row(m).setZero();
  for (int j = 0; j < n; ++j) t(m, j) = c(j);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n && c(basis[i]) != 0.0) {
      t.row(m) -= c(basis[i]) * t.row(i);
    }
  }

  if (!detail::simplex_iterate(t, basis, n, max_iters, result.iterations,
                               unbounded)) {
    result.status =
        unbounded ? LpStatus::kUnbounded : LpStatus::kIterationLimit;
    return result;
  }

  result.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) result.x(basis[i]) = t(i, n + m);
  }
  result.objective = c.dot(result.x);
  result.status = LpStatus::kOptimal;
  return result;
}

}  // namespace dexmap

#endif  // DEXMAP_SIMPLEX_HPP_
