/*
 * Copyright 2026 The cartelc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CARTELC_GEOMETRY_HPP_
#define CARTELC_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cartelc/data.hpp"
#include "cartelc/errors.hpp"

namespace cartelc {

// Largest hyperplane order handled with stack-only storage.
inline constexpr int kMaxOrder = 32;

template <typename Scalar>
using SmallMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxOrder, kMaxOrder>;
template <typename Scalar>
using SmallVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxOrder, 1>;

/// Split boundary w.x = b. `active_features` lists the indices of the
/// non-zero coefficients in ascending order; every projection sums over
/// them in that order so that search, partitioning and prediction see
/// bit-identical values.
struct Hyperplane {
  Eigen::VectorXd coefficients;
  double bias = 0.0;
  std::vector<int> active_features;

  // Recomputes the active set and applies the canonical orientation.
  static Hyperplane from_coefficients(Eigen::VectorXd coefficients, double bias);

  // Axis-aligned plane e_feature . x = threshold.
  static Hyperplane axis(int m, int feature, double threshold);

  int dimension() const { return static_cast<int>(coefficients.size()); }

  bool operator==(const Hyperplane& other) const {
    return bias == other.bias && coefficients.size() == other.coefficients.size() &&
           coefficients == other.coefficients && active_features == other.active_features;
  }
};

enum class Side { Left, Right };

// Flips (w, b) so the lowest-index non-zero coefficient is positive.
// Returns true when a flip happened.
template <typename Derived>
bool canonicalize_orientation(Eigen::MatrixBase<Derived>& coefficients, double& bias) {
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    if (coefficients(i) == 0) continue;
    if (coefficients(i) < 0) {
      coefficients = -coefficients;
      bias = -bias;
      return true;
    }
    return false;
  }
  return false;
}

inline void canonicalize(Hyperplane& plane) {
  canonicalize_orientation(plane.coefficients, plane.bias);
}

// w.x summed over the active features; NaN when any of them is missing.
template <typename Derived>
double project(const Hyperplane& plane, const Eigen::DenseBase<Derived>& sample) {
  double acc = 0.0;
  for (int f : plane.active_features) acc += plane.coefficients[f] * sample(f);
  return acc;
}

/// Left when the sample lies on or above the plane (w.x >= b). A sample
/// missing any active feature goes Right.
template <typename Derived>
Side side_of(const Hyperplane& plane, const Eigen::DenseBase<Derived>& sample) {
  for (int f : plane.active_features) {
    if (is_missing(sample(f))) return Side::Right;
  }
  return project(plane, sample) >= plane.bias ? Side::Left : Side::Right;
}

template <typename Scalar, int MaxSize = Eigen::Dynamic>
struct SymmetricEigen {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, MaxSize, MaxSize>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, MaxSize, 1>;

  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // column j pairs with eigenvalues(j)
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for small symmetric matrices.
///
/// Rotations are applied in fixed row-major (p, q) order until the
/// off-diagonal Frobenius norm drops below 1e-12 (or below round-off for
/// badly scaled inputs). Eigenvalues are returned in ascending order with a
/// stable sort, so exact ties keep the lower original index. Each
/// eigenvector is sign-normalised so its first non-zero entry is positive.
/// Identical input always yields identical output.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar, Derived::MaxRowsAtCompileTime> symmetric_eigen(
    const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Result = SymmetricEigen<Scalar, Derived::MaxRowsAtCompileTime>;
  using Matrix = typename Result::Matrix;
  constexpr int kMaxSweeps = 100;

  const Eigen::Index n = input.rows();
  if (n < 1 || input.cols() != n) throw ContractError("symmetric_eigen: matrix must be square");
  const Scalar scale = std::max<Scalar>(Scalar(1), input.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > Scalar(1e-9) * scale) {
        throw ContractError("symmetric_eigen: matrix is not symmetric");
      }
    }
  }

  Matrix a = input;
  Matrix v = Matrix::Identity(n, n);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar frobenius = a.norm();
  Result result;

  for (; result.sweeps < kMaxSweeps; ++result.sweeps) {
    Scalar off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += 2 * a(p, q) * a(p, q);
    off = std::sqrt(off);
    if (off < Scalar(1e-12) || off <= eps * eps * frobenius) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == 0) continue;
        // Entries far below both diagonal terms cannot move them; drop them.
        const Scalar g = 100 * std::abs(apq);
        if (result.sweeps > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = a(q, p) = 0;
          continue;
        }
        const Scalar theta = (a(q, q) - a(p, p)) / (2 * apq);
        Scalar t;
        if (std::abs(theta) > Scalar(1e150)) {
          t = Scalar(1) / (2 * theta);
        } else {
          t = Scalar(1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
          if (theta < 0) t = -t;
        }
        const Scalar c = Scalar(1) / std::sqrt(t * t + 1);
        const Scalar s = t * c;

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    result.eigenvalues(j) = a(order[j], order[j]);
    result.eigenvectors.col(j) = v.col(order[j]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar x = result.eigenvectors(i, j);
      if (x == 0) continue;
      if (x < 0) result.eigenvectors.col(j) = -result.eigenvectors.col(j);
      break;
    }
  }
  return result;
}

/// H = I - 2uu^T / (u^T u) with u = direction - e_axis, so that
/// H * direction = e_axis. Identity when direction already is e_axis.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> householder_reflection(
    const Eigen::MatrixBase<Derived>& direction, Eigen::Index axis) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index m = direction.size();
  if (axis < 0 || axis >= m) throw ContractError("householder_reflection: axis out of range");
  if (std::abs(direction.norm() - Scalar(1)) > Scalar(1e-9)) {
    throw ContractError("householder_reflection: direction must have unit norm");
  }
  Vector u = direction;
  u(axis) -= Scalar(1);
  const Scalar uu = u.squaredNorm();
  if (std::sqrt(uu) < Scalar(1e-12)) return Matrix::Identity(m, m);
  Matrix h = Matrix::Identity(m, m);
  h.noalias() -= (Scalar(2) / uu) * u * u.transpose();
  return h;
}

/// Plane through the r rows of `points`, whose columns are the coordinates
/// of `selected_features` (ascending) in an m-dimensional space.
///
/// The rows are centred on their column means, the r x r covariance
/// (divided by r - 1; zero for r = 1) is diagonalised, and the eigenvector
/// of the smallest eigenvalue becomes the normal. The bias is w . mean.
Hyperplane fit_hyperplane(const Eigen::Ref<const Eigen::MatrixXd>& points,
                          std::span<const int> selected_features, int m);

// Same construction without embedding: unit normal in the r-dim subspace
// (canonically oriented) and its bias. Allocation-free for r <= kMaxOrder.
struct LocalPlane {
  SmallVector<double> normal;
  double bias = 0.0;
};
LocalPlane fit_local_plane(const SmallMatrix<double>& points);

}  // namespace cartelc

#endif  // CARTELC_GEOMETRY_HPP_
