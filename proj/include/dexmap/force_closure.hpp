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

#ifndef DEXMAP_FORCE_CLOSURE_HPP_
#define DEXMAP_FORCE_CLOSURE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "dexmap/errors.hpp"
#include "dexmap/simplex.hpp"

namespace dexmap {

// Geometry-based grasp validation. Each point contact with friction carries
// a cone of transmissible forces; the cone is discretized into m edge
// directions, every edge becomes a 6D wrench [force; torque], and the grasp
// is force-closed when the origin lies strictly inside the convex hull of
// the wrench columns.

inline constexpr int kDefaultConeEdges = 6;

/// A point contact: position (meters), unit inward normal, friction mu.
struct Contact {
  Eigen::Vector3d p{0, 0, 0};
  Eigen::Vector3d n{0, 0, 1};
  double mu = 0.0;
};

struct FrictionCone {
  double half_angle = 0.0;  // radians
  Eigen::Vector3d t1, t2;   // tangent basis, {t1, t2, n} right-handed
  std::vector<Eigen::Vector3d> edges;  // unit edge directions
};

/// Friction cone half-angle theta = arctan(mu).
inline double cone_half_angle(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw NegativeFriction("cone_half_angle: friction coefficient must be "
                           "non-negative and finite");
  }
  return std::atan(mu);
}

/// Deterministic orthonormal tangent basis: the reference vector r is the
/// world axis least aligned with n (ties broken x, y, z), then
/// t1 = n x r / |n x r| and t2 = n x t1.
inline std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(
    const Eigen::Vector3d& n) {
  const double norm = n.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw InputError("tangent_basis: normal must be unit length");
  }
  const Eigen::Vector3d nn = n / norm;

  int axis = 0;
  double smallest = std::abs(nn.x());
  if (std::abs(nn.y()) < smallest) {
    axis = 1;
    smallest = std::abs(nn.y());
  }
  if (std::abs(nn.z()) < smallest) {
    axis = 2;
  }
  const Eigen::Vector3d r = Eigen::Vector3d::Unit(axis);

  Eigen::Vector3d t1 = nn.cross(r);
  t1 /= t1.norm();
  const Eigen::Vector3d t2 = nn.cross(t1);
  return {t1, t2};
}

/// Discretizes the contact's friction cone into m unit edge directions
/// w_j = cos(theta) n + sin(theta) (cos(phi_j) t1 + sin(phi_j) t2) with
/// phi_j = 2 pi (j - 1) / m.
inline FrictionCone cone_edges(const Contact& contact,
                               int m = kDefaultConeEdges) {
  if (m < 1 || (contact.mu > 0.0 && m < 3)) {
    throw InputError("cone_edges: need at least 3 edges for a nondegenerate "
                     "cone with friction");
  }
  const double theta = cone_half_angle(contact.mu);

  FrictionCone cone;
  cone.half_angle = theta;
  const double nnorm = contact.n.norm();
  if (std::abs(nnorm - 1.0) > 1e-6) {
    throw InputError("cone_edges: contact normal must be unit length");
  }
  const Eigen::Vector3d n = contact.n / nnorm;
  std::tie(cone.t1, cone.t2) = tangent_basis(n);

  cone.edges.reserve(m);
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  for (int j = 0; j < m; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / m;
    cone.edges.push_back(cos_t * n +
                         sin_t * (std::cos(phi) * cone.t1 +
                                  std::sin(phi) * cone.t2));
  }
  return cone;
}

/// The 6 x (m * n) grasp matrix: column (i, j) is [w_ij; (p_i x w_ij) / rho].
/// rho is an optional characteristic length dividing the torque rows.
struct WrenchMatrix {
  Eigen::Matrix<double, 6, Eigen::Dynamic> g;
  std::vector<std::pair<int, int>> column_map;  // (contact, edge) per column
  int contact_count = 0;
  int edge_count = 0;
  double rho = 1.0;
};

inline WrenchMatrix grasp_matrix(const std::vector<Contact>& contacts,
                                 int m = kDefaultConeEdges, double rho = 1.0) {
  if (contacts.empty()) {
    throw EmptyContactSet("grasp_matrix: need at least one contact");
  }
  if (!(rho > 0.0)) {
    throw InputError("grasp_matrix: characteristic length must be positive");
  }
  WrenchMatrix wm;
  wm.contact_count = static_cast<int>(contacts.size());
  wm.edge_count = m;
  wm.rho = rho;
  wm.g.resize(6, wm.contact_count * m);
  wm.column_map.reserve(wm.g.cols());

  int col = 0;
  for (int i = 0; i < wm.contact_count; ++i) {
    const FrictionCone cone = cone_edges(contacts[i], m);
    for (int j = 0; j < m; ++j, ++col) {
      wm.g.block<3, 1>(0, col) = cone.edges[j];
      wm.g.block<3, 1>(3, col) = contacts[i].p.cross(cone.edges[j]) / rho;
      wm.column_map.emplace_back(i, j);
    }
  }
  return wm;
}

struct ClosureVerdict {
  bool closed = false;
  // Radius of the largest origin-centered ball inside the wrench hull,
  // normalized by the largest column norm. Zero when not closed.
  double margin = 0.0;
  int rank = 0;
  // Convex coefficients with G lambda = 0, lambda >= 0, sum = 1 (closed only).
  Eigen::VectorXd certificate;
  // Optimum of the strict-interior LP: the largest uniform lower bound on
  // the certificate coefficients. Positive iff the origin is interior.
  double interior_eps = 0.0;
};

namespace detail {

// Support of the column set along d: h(d) = max_i d . g_i.
inline double support(const Eigen::MatrixXd& g, const Eigen::VectorXd& d) {
  return (g.transpose() * d).maxCoeff();
}

// Minimizes the support function over unit directions: sampled directions
// (structured + deterministic pseudo-random) followed by an active-set
// polish that solves for the local facet normal. Returns an estimate of the
// inscribed-ball radius; exact hull construction in 6D is deliberately
// avoided.
inline double min_support_over_sphere(const Eigen::MatrixXd& g,
                                      int random_directions = 4096) {
  const int dim = static_cast<int>(g.rows());
  const int cols = static_cast<int>(g.cols());

  std::vector<Eigen::VectorXd> seeds;
  seeds.reserve(2 * dim + cols + random_directions);
  for (int k = 0; k < dim; ++k) {
    seeds.push_back(Eigen::VectorXd::Unit(dim, k));
    seeds.push_back(-Eigen::VectorXd::Unit(dim, k));
  }
  for (int i = 0; i < cols; ++i) {
    const double norm = g.col(i).norm();
    if (norm > 1e-12) seeds.push_back(-g.col(i) / norm);
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  for (int s = 0; s < random_directions; ++s) {
    Eigen::VectorXd d(dim);
    for (int k = 0; k < dim; ++k) d(k) = uniform();
    const double norm = d.norm();
    if (norm > 1e-6) seeds.push_back(d / norm);
  }

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_d;
  std::vector<std::pair<double, Eigen::VectorXd>> ranked;
  ranked.reserve(seeds.size());
  for (const auto& d : seeds) {
    const double h = support(g, d);
    if (h < best) {
      best = h;
      best_d = d;
    }
    ranked.emplace_back(h, d);
  }
  std::partial_sort(ranked.begin(),
                    ranked.begin() + std::min<std::size_t>(8, ranked.size()),
                    ranked.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  // Polish: at a local minimum of the support function the active columns
  // lie on a common hyperplane g_i . u = c; recover (u, c) as the smallest
  // singular direction of [g_i^T | -1].
  const std::size_t polish_count = std::min<std::size_t>(8, ranked.size());
  for (std::size_t s = 0; s < polish_count; ++s) {
    Eigen::VectorXd d = ranked[s].second;
    double h = ranked[s].first;
    for (int round = 0; round < 8; ++round) {
      const double gap = std::max(1e-9, 1e-3 * std::abs(h));
      std::vector<int> active;
      const Eigen::VectorXd dots = g.transpose() * d;
      for (int i = 0; i < cols; ++i) {
        if (dots(i) >= h - gap) active.push_back(i);
      }
      if (active.size() < 2) break;
      Eigen::MatrixXd plane(active.size(), dim + 1);
      for (std::size_t i = 0; i < active.size(); ++i) {
        plane.block(i, 0, 1, dim) = g.col(active[i]).transpose();
        plane(i, dim) = -1.0;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(plane, Eigen::ComputeFullV);
      const Eigen::VectorXd v = svd.matrixV().col(dim);
      Eigen::VectorXd u = v.head(dim);
      const double unorm = u.norm();
      if (unorm < 1e-12) break;
      u /= unorm;
      const double h_pos = support(g, u);
      const double h_neg = support(g, -u);
      const Eigen::VectorXd candidate = (h_pos <= h_neg) ? u : -u;
      const double h_candidate = std::min(h_pos, h_neg);
      if (h_candidate < h - 1e-15) {
        d = candidate;
        h = h_candidate;
      } else {
        break;
      }
    }
    if (h < best) best = h;
  }
  return best;
}

}  // namespace detail

/// Decides force closure: rank(G) must be 6 and the origin strictly inside
/// the hull of the columns. Interiority is certified by the LP
/// max eps s.t. G lambda = 0, sum lambda = 1, lambda_i >= eps; the margin is
/// the inscribed-ball radius of the hull, normalized by the largest column
/// norm, and must exceed tol.
inline ClosureVerdict check_force_closure(const WrenchMatrix& wm,
                                          double tol = 1e-9) {
  ClosureVerdict verdict;
  const int cols = static_cast<int>(wm.g.cols());
  if (cols == 0) return verdict;

  double scale = 0.0;
  for (int i = 0; i < cols; ++i) scale = std::max(scale, wm.g.col(i).norm());
  if (scale <= 0.0) return verdict;
  const Eigen::MatrixXd g = wm.g / scale;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const Eigen::VectorXd& sigma = svd.singularValues();
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > 1e-10 * sigma(0)) ++verdict.rank;
  }
  if (verdict.rank < 6) return verdict;

  // Strict-interior LP in variables [nu; a; b] with lambda = nu + (a - b) 1:
  //   G nu + (G 1)(a - b) = 0,  1^T nu + K (a - b) = 1,  all vars >= 0,
  // maximizing eps = a - b.
  const Eigen::VectorXd g_row_sums = g.rowwise().sum();
  Eigen::MatrixXd a(7, cols + 2);
  a.block(0, 0, 6, cols) = g;
  a.block(0, cols, 6, 1) = g_row_sums;
  a.block(0, cols + 1, 6, 1) = -g_row_sums;
  a.block(6, 0, 1, cols).setOnes();
  a(6, cols) = static_cast<double>(cols);
  a(6, cols + 1) = -static_cast<double>(cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(7);
  b(6) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols + 2);
  c(cols) = -1.0;
  c(cols + 1) = 1.0;

  const LpResult lp = solve_equality_lp(a, b, c);
  if (lp.status != LpStatus::kOptimal) return verdict;
  verdict.interior_eps = -lp.objective;
  if (verdict.interior_eps <= 1e-10) return verdict;

  const double margin = detail::min_support_over_sphere(g);
  if (!(margin > tol)) return verdict;

  verdict.closed = true;
  verdict.margin = margin;
  Eigen::VectorXd lambda =
      lp.x.head(cols).array() + (lp.x(cols) - lp.x(cols + 1));
  lambda = lambda.cwiseMax(0.0);
  lambda /= lambda.sum();
  verdict.certificate = lambda;
  return verdict;
}

/// Convenience: contacts straight to verdict.
inline ClosureVerdict check_force_closure(const std::vector<Contact>& contacts,
                                          int m = kDefaultConeEdges,
                                          double tol = 1e-9, double rho = 1.0) {
  return check_force_closure(grasp_matrix(contacts, m, rho), tol);
}

}  // namespace dexmap

#endif  // DEXMAP_FORCE_CLOSURE_HPP_
