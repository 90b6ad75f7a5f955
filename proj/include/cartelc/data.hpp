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

#ifndef CARTELC_DATA_HPP_
#define CARTELC_DATA_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cartelc {

// Missing cells are stored as quiet NaN inside the feature matrix.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

// Per-class sample tally.
struct ClassCounts {
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;

  ClassCounts() = default;
  explicit ClassCounts(int num_classes) : counts(num_classes, 0) {}

  static ClassCounts from_labels(std::span<const int> labels, int num_classes);

  void add(int class_id, std::int64_t n = 1) {
    counts[class_id] += n;
    total += n;
  }
  int num_classes() const { return static_cast<int>(counts.size()); }
  // Most frequent class; ties go to the lowest id.
  int majority() const;

  bool operator==(const ClassCounts&) const = default;
};

// Numeric feature grid without labels.
struct FeatureTable {
  Eigen::MatrixXd features;  // n x m
  std::vector<std::string> feature_names;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index cols() const { return features.cols(); }
  int column_index(std::string_view name) const;  // throws ConfigError
};

// Labelled classification dataset. Immutable by convention once built.
struct Dataset {
  Eigen::MatrixXd features;  // n x m, NaN marks a missing cell
  std::vector<int> labels;   // dense ids into class_names
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index cols() const { return features.cols(); }
  int num_classes() const { return static_cast<int>(class_names.size()); }
  bool has_missing() const;
  int column_index(std::string_view name) const;  // throws ConfigError

  // Rows in the given order; class names are kept so ids stay stable.
  Dataset subset(std::span<const int> row_indices) const;

  // Throws if the structural invariants do not hold.
  void validate() const;
};

struct CsvOptions {
  // Column name, or "last".
  std::string label_column = "last";
  std::vector<std::string> missing_tokens = {"", "NA", "NaN", "?"};
};

// Header row is mandatory. Class ids follow first appearance of each label.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(std::string_view text, const CsvOptions& options = {});

// Every column is a feature.
FeatureTable load_feature_csv(const std::filesystem::path& path,
                              const std::vector<std::string>& missing_tokens =
                                  CsvOptions{}.missing_tokens);
FeatureTable parse_feature_csv(std::string_view text,
                               const std::vector<std::string>& missing_tokens =
                                   CsvOptions{}.missing_tokens);

// Class 0 ("one") for value < threshold, class 1 ("two") otherwise.
std::vector<int> discretize_label(std::span<const double> values, double threshold);

// Turns a continuous column of `table` into a two-class label and drops it
// from the features.
Dataset label_by_threshold(const FeatureTable& table, std::string_view column,
                           double threshold);

Dataset remove_rows_missing(const Dataset& dataset, std::string_view feature);

Dataset mean_impute(const Dataset& dataset);

}  // namespace cartelc

#endif  // CARTELC_DATA_HPP_
