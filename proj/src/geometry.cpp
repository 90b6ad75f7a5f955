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

#include "cartelc/geometry.hpp"

namespace cartelc {

Hyperplane Hyperplane::from_coefficients(Eigen::VectorXd coefficients, double bias) {
  Hyperplane plane;
  plane.coefficients = std::move(coefficients);
  plane.bias = bias;
  canonicalize(plane);
  for (Eigen::Index f = 0; f < plane.coefficients.size(); ++f) {
    if (plane.coefficients[f] != 0.0) plane.active_features.push_back(static_cast<int>(f));
  }
  return plane;
}

Hyperplane Hyperplane::axis(int m, int feature, double threshold) {
  Hyperplane plane;
  plane.coefficients = Eigen::VectorXd::Zero(m);
  plane.coefficients[feature] = 1.0;
  plane.bias = threshold;
  plane.active_features = {feature};
  return plane;
}

LocalPlane fit_local_plane(const SmallMatrix<double>& points) {
  const Eigen::Index r = points.rows();
  SmallVector<double> mean = points.colwise().mean().transpose();
  SmallMatrix<double> cov = SmallMatrix<double>::Zero(r, r);
  if (r > 1) {
    SmallMatrix<double> centered = points.rowwise() - mean.transpose();
    cov.noalias() = centered.transpose() * centered;
    cov /= static_cast<double>(r - 1);
  }
  auto eig = symmetric_eigen(cov);
  LocalPlane plane;
  plane.normal = eig.eigenvectors.col(0);
  plane.bias = plane.normal.dot(mean);
  canonicalize_orientation(plane.normal, plane.bias);
  return plane;
}

Hyperplane fit_hyperplane(const Eigen::Ref<const Eigen::MatrixXd>& points,
                          std::span<const int> selected_features, int m) {
  const Eigen::Index r = points.rows();
  if (r < 1 || r > kMaxOrder || points.cols() != r ||
      static_cast<Eigen::Index>(selected_features.size()) != r) {
    throw ConfigError("fit_hyperplane: need r points with r selected coordinates, 1 <= r <= 32");
  }
  if (r > m) throw ConfigError("fit_hyperplane: r exceeds the feature count");
  for (std::size_t i = 0; i < selected_features.size(); ++i) {
    if (selected_features[i] < 0 || selected_features[i] >= m ||
        (i > 0 && selected_features[i] <= selected_features[i - 1])) {
      throw ConfigError("fit_hyperplane: selected features must be sorted, distinct, < m");
    }
  }
  if (points.array().isNaN().any()) {
    throw PreprocessingError("fit_hyperplane: a selected coordinate is missing");
  }
  LocalPlane local = fit_local_plane(points);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < r; ++i) w[selected_features[i]] = local.normal[i];
  return Hyperplane::from_coefficients(std::move(w), local.bias);
}

}  // namespace cartelc
