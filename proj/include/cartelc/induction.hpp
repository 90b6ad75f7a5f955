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

#ifndef CARTELC_INDUCTION_HPP_
#define CARTELC_INDUCTION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cartelc/criteria.hpp"
#include "cartelc/data.hpp"
#include "cartelc/geometry.hpp"

namespace cartelc {

enum class Algorithm { CartElc, CartAxis, HHCartD, HHCartA };

// "cart-elc", "cart-axis", "hhcart-d", "hhcart-a".
Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);
// Only CART-ELC accepts missing cells.
inline bool accepts_missing(Algorithm a) { return a == Algorithm::CartElc; }

struct InductionConfig {
  CriterionKind criterion = CriterionKind::Gini;
  int r = 1;          // CART-ELC only
  int max_depth = 5;  // split levels below the root
  Algorithm algorithm = Algorithm::CartElc;
};

// Execution knobs that never change results.
struct ExecutionOptions {
  int workers = 1;
};

struct SplitCandidate {
  Hyperplane plane;
  double score = 0.0;
  // Rank of the candidate in the algorithm's deterministic enumeration
  // order; among equal scores the smallest rank wins.
  std::uint64_t enumeration_index = 0;
};

struct TreeNode {
  enum class Kind { Leaf, Split };

  Kind kind = Kind::Leaf;
  // Leaf: predicted class. Split: majority class of the training samples
  // that reached the node (-1 when unknown, e.g. after deserialisation).
  int class_id = 0;
  Hyperplane plane;  // Split only
  int left = -1;     // node indices, Split only
  int right = -1;

  bool is_leaf() const { return kind == Kind::Leaf; }
};

// Binary tree stored in pre-order; nodes[0] is the root.
struct Tree {
  int m = 0;
  std::vector<std::string> classes;
  std::vector<TreeNode> nodes;

  const TreeNode& root() const { return nodes.front(); }

  // Structural equality: shape, planes, leaf classes, m and class names.
  bool operator==(const Tree& other) const;
};

PartitionCounts evaluate_split(const Hyperplane& plane, const Eigen::MatrixXd& samples,
                               std::span<const int> labels, int num_classes);

/// Exhaustive CART-ELC search: every r-subset of samples (outer,
/// lexicographic) crossed with every r-subset of features (inner,
/// lexicographic). Selections touching a missing cell are skipped. Returns
/// nullopt when no selection is valid. Parallel runs reduce to the same
/// candidate as the sequential scan.
std::optional<SplitCandidate> best_split_elc(const Eigen::MatrixXd& samples,
                                             std::span<const int> labels, int num_classes,
                                             int r, CriterionKind criterion,
                                             const ExecutionOptions& exec = {});

// Axis-aligned CART search: samples outer, features inner, thresholds at
// the sample values.
std::optional<SplitCandidate> best_split_axis(const Eigen::MatrixXd& samples,
                                              std::span<const int> labels, int num_classes,
                                              CriterionKind criterion);

enum class HHCartVariant { Dominant, All };

/// HHCART pool: the original-space axis splits, then for each class (id
/// order) with at least two samples and each considered eigenvector of its
/// covariance (dominant only, or all in descending eigenvalue order), the
/// axis splits of the Householder-reflected space mapped back to oblique
/// planes. Eigenvectors within 1e-6 of a coordinate axis are skipped.
std::optional<SplitCandidate> best_split_hhcart(const Eigen::MatrixXd& samples,
                                                std::span<const int> labels, int num_classes,
                                                CriterionKind criterion, HHCartVariant variant);

Tree fit(const InductionConfig& config, const Eigen::MatrixXd& samples,
         std::span<const int> labels, int num_classes, const ExecutionOptions& exec = {});

// Uses the dataset's class set and records its class names in the tree.
Tree fit(const InductionConfig& config, const Dataset& dataset,
         const ExecutionOptions& exec = {});

template <typename Derived>
int predict(const Tree& tree, const Eigen::DenseBase<Derived>& sample) {
  int node = 0;
  while (!tree.nodes[node].is_leaf()) {
    const TreeNode& n = tree.nodes[node];
    node = side_of(n.plane, sample) == Side::Left ? n.left : n.right;
  }
  return tree.nodes[node].class_id;
}

std::vector<int> predict(const Tree& tree, const Eigen::MatrixXd& samples);
double accuracy(const Tree& tree, const Eigen::MatrixXd& samples, std::span<const int> labels);

// Leaf count.
int tree_size(const Tree& tree);
// Longest root-to-leaf edge count.
int tree_depth(const Tree& tree);

// The tree `fit` would have grown with a smaller max_depth: every node at
// `max_depth` becomes a leaf of its stored majority class. Requires a tree
// fresh from `fit`.
Tree truncated(const Tree& tree, int max_depth);

// JSON form {"m":..,"classes":[..],"root":node}; reals printed with 17
// significant digits.
std::string serialize(const Tree& tree);
Tree deserialize(std::string_view json);

}  // namespace cartelc

#endif  // CARTELC_INDUCTION_HPP_
