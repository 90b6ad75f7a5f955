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

#include "cartelc/induction.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <numeric>
#include <thread>

#include "cartelc/errors.hpp"
#include "combinations.hpp"

namespace cartelc {
namespace {

using detail::binomial;

// Node samples regrouped by class so side counts reduce to contiguous
// per-class ranges.
struct GroupedSamples {
  Eigen::MatrixXd features;        // rows ordered by class id (stable)
  std::vector<int> class_begin;    // size num_classes + 1
  std::vector<std::int64_t> totals;
};

GroupedSamples group_by_class(const Eigen::MatrixXd& samples, std::span<const int> labels,
                              int num_classes) {
  GroupedSamples g;
  g.totals.assign(num_classes, 0);
  for (int y : labels) ++g.totals[y];
  g.class_begin.assign(num_classes + 1, 0);
  for (int c = 0; c < num_classes; ++c) g.class_begin[c + 1] = g.class_begin[c] + g.totals[c];
  std::vector<int> order(labels.size());
  std::vector<int> next(g.class_begin.begin(), g.class_begin.end() - 1);
  for (std::size_t i = 0; i < labels.size(); ++i) order[next[labels[i]]++] = static_cast<int>(i);
  g.features = samples(order, Eigen::all);
  return g;
}

// Number of rows in [begin, end) with sum_t w[t] * cols[t][i] >= bias.
// The accumulation order matches `project`, so results agree with side_of.
template <int K>
std::int64_t count_at_or_above(const double* const* cols, const double* w, double bias,
                               int begin, int end) {
  std::int64_t count = 0;
  for (int i = begin; i < end; ++i) {
    double acc = 0.0;
    for (int t = 0; t < K; ++t) acc += w[t] * cols[t][i];
    count += acc >= bias;
  }
  return count;
}

std::int64_t count_at_or_above(const double* const* cols, const double* w, int k, double bias,
                               int begin, int end) {
  switch (k) {
    case 1:
      return count_at_or_above<1>(cols, w, bias, begin, end);
    case 2:
      return count_at_or_above<2>(cols, w, bias, begin, end);
    case 3:
      return count_at_or_above<3>(cols, w, bias, begin, end);
    case 4:
      return count_at_or_above<4>(cols, w, bias, begin, end);
    default:
      break;
  }
  std::int64_t count = 0;
  for (int i = begin; i < end; ++i) {
    double acc = 0.0;
    for (int t = 0; t < k; ++t) acc += w[t] * cols[t][i];
    count += acc >= bias;
  }
  return count;
}

struct ElcBest {
  double score = 0.0;
  std::uint64_t index = 0;
  bool found = false;
  std::vector<int> sample_combo;
  int feature_combo = -1;
};

// Strictly better score, or the same score found earlier in enumeration.
bool precedes(CriterionKind kind, const ElcBest& a, const ElcBest& b) {
  if (!a.found) return false;
  if (!b.found) return true;
  if (is_better(kind, a.score, b.score)) return true;
  return a.score == b.score && a.index < b.index;
}

class ElcSearch {
 public:
  ElcSearch(const Eigen::MatrixXd& samples, std::span<const int> labels, int num_classes, int r,
            CriterionKind kind)
      : samples_(samples),
        grouped_(group_by_class(samples, labels, num_classes)),
        num_classes_(num_classes),
        r_(r),
        kind_(kind),
        feature_combos_(detail::all_combinations(static_cast<int>(samples.cols()), r)) {
    const int n = static_cast<int>(samples.rows());
    block_base_.assign(n - r + 2, 0);
    for (int i0 = 0; i0 <= n - r; ++i0) {
      block_base_[i0 + 1] = block_base_[i0] + binomial(n - 1 - i0, r - 1);
    }
  }

  int num_blocks() const { return static_cast<int>(samples_.rows()) - r_ + 1; }

  // All sample combinations whose first member is i0.
  void run_block(int i0, ElcBest& best) const {
    const int n = static_cast<int>(samples_.rows());
    const int r = r_;
    const std::uint64_t feature_combo_count = feature_combos_.size();
    SmallMatrix<double> points(r, r);
    std::vector<std::int64_t> left(num_classes_), right(num_classes_);
    std::vector<const double*> cols(r);
    std::vector<double> weights(r);

    std::vector<int> combo(r);
    combo[0] = i0;
    for (int t = 1; t < r; ++t) combo[t] = i0 + t;
    std::uint64_t rank = block_base_[i0];
    do {
      for (std::size_t fc = 0; fc < feature_combos_.size(); ++fc) {
        const std::vector<int>& features = feature_combos_[fc];
        bool complete = true;
        for (int i = 0; i < r && complete; ++i) {
          for (int j = 0; j < r; ++j) {
            const double v = samples_(combo[i], features[j]);
            if (is_missing(v)) {
              complete = false;
              break;
            }
            points(i, j) = v;
          }
        }
        if (!complete) continue;

        LocalPlane plane = fit_local_plane(points);
        int k = 0;
        for (int j = 0; j < r; ++j) {
          if (plane.normal[j] == 0.0) continue;
          cols[k] = grouped_.features.col(features[j]).data();
          weights[k] = plane.normal[j];
          ++k;
        }
        for (int c = 0; c < num_classes_; ++c) {
          left[c] = count_at_or_above(cols.data(), weights.data(), k, plane.bias,
                                      grouped_.class_begin[c], grouped_.class_begin[c + 1]);
          right[c] = grouped_.totals[c] - left[c];
        }
        const double s = score(kind_, left, right);
        if (!best.found || is_better(kind_, s, best.score)) {
          best.found = true;
          best.score = s;
          best.index = rank * feature_combo_count + fc;
          best.sample_combo = combo;
          best.feature_combo = static_cast<int>(fc);
        }
      }
      ++rank;
    } while (next_in_block(combo, n));
  }

  SplitCandidate materialise(const ElcBest& best) const {
    const std::vector<int>& features = feature_combos_[best.feature_combo];
    Eigen::MatrixXd points(r_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < r_; ++j) points(i, j) = samples_(best.sample_combo[i], features[j]);
    SplitCandidate out;
    out.plane = fit_hyperplane(points, features, static_cast<int>(samples_.cols()));
    out.score = best.score;
    out.enumeration_index = best.index;
    return out;
  }

 private:
  // Lexicographic successor that keeps combo[0] fixed.
  bool next_in_block(std::vector<int>& combo, int n) const {
    const int k = r_;
    int i = k - 1;
    while (i >= 1 && combo[i] == n - k + i) --i;
    if (i < 1) return false;
    ++combo[i];
    for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    return true;
  }

  const Eigen::MatrixXd& samples_;
  GroupedSamples grouped_;
  int num_classes_;
  int r_;
  CriterionKind kind_;
  std::vector<std::vector<int>> feature_combos_;
  std::vector<std::uint64_t> block_base_;
};

// Runs body(block, local_best) over all blocks on `workers` threads and
// reduces with `precedes`; the result does not depend on scheduling.
template <typename Best, typename Body, typename Precedes>
Best parallel_reduce_blocks(int num_blocks, int workers, Best init, Body body, Precedes precedes) {
  workers = std::max(1, std::min(workers, num_blocks));
  if (workers == 1) {
    Best best = init;
    for (int b = 0; b < num_blocks; ++b) body(b, best);
    return best;
  }
  std::vector<Best> partial(workers, init);
  std::atomic<int> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int b = next.fetch_add(1); b < num_blocks; b = next.fetch_add(1)) body(b, partial[w]);
      });
    }
  }
  Best best = init;
  for (const Best& p : partial) {
    if (precedes(p, best)) best = p;
  }
  return best;
}

// Split score of `values >= values[j]` for every j. Values must be finite.
void threshold_scores(const double* values, std::span<const int> labels,
                      std::span<const std::int64_t> totals, CriterionKind kind,
                      std::vector<int>& order, std::vector<double>& out) {
  const int n = static_cast<int>(labels.size());
  const int num_classes = static_cast<int>(totals.size());
  order.resize(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a] > values[b] || (values[a] == values[b] && a < b);
  });
  out.resize(n);
  std::vector<std::int64_t> above(num_classes, 0), below(num_classes);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j < n && values[order[j]] == values[order[i]]) {
      ++above[labels[order[j]]];
      ++j;
    }
    for (int c = 0; c < num_classes; ++c) below[c] = totals[c] - above[c];
    const double s = score(kind, above, below);
    for (int t = i; t < j; ++t) out[order[t]] = s;
    i = j;
  }
}

void require_complete(const Eigen::MatrixXd& samples, const char* who) {
  if (samples.array().isNaN().any()) {
    throw PreprocessingError(std::string(who) + " cannot handle missing cells; impute first");
  }
}

void require_labels(const Eigen::MatrixXd& samples, std::span<const int> labels,
                    int num_classes) {
  if (static_cast<Eigen::Index>(labels.size()) != samples.rows()) {
    throw ConfigError("label count does not match sample count");
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes) throw ConfigError("label id out of range");
  }
}

struct Incumbent {
  double score = 0.0;
  std::uint64_t index = 0;
  bool found = false;
  Hyperplane plane;

  void offer(CriterionKind kind, double s, std::uint64_t idx,
             const std::function<Hyperplane()>& make_plane) {
    if (!found || is_better(kind, s, score)) {
      found = true;
      score = s;
      index = idx;
      plane = make_plane();
    }
  }

  std::optional<SplitCandidate> result() const {
    if (!found) return std::nullopt;
    return SplitCandidate{plane, score, index};
  }
};

std::vector<std::int64_t> class_totals(std::span<const int> labels, int num_classes) {
  std::vector<std::int64_t> totals(num_classes, 0);
  for (int y : labels) ++totals[y];
  return totals;
}

// Axis sweep over the columns of `projected`; column k of the candidate
// plane set is planes[k], and sample j's threshold is projected(j, k).
void sweep_projection_block(const Eigen::MatrixXd& projected, std::span<const int> labels,
                            std::span<const std::int64_t> totals, CriterionKind kind,
                            std::uint64_t block_offset,
                            const std::function<Hyperplane(int k, double threshold)>& plane_for,
                            Incumbent& best) {
  const int n = static_cast<int>(projected.rows());
  const int m = static_cast<int>(projected.cols());
  std::vector<std::vector<double>> scores(m);
  std::vector<int> order;
  for (int k = 0; k < m; ++k) {
    threshold_scores(projected.col(k).data(), labels, totals, kind, order, scores[k]);
  }
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) {
      const double threshold = projected(j, k);
      best.offer(kind, scores[k][j], block_offset + static_cast<std::uint64_t>(j) * m + k,
                 [&] { return plane_for(k, threshold); });
    }
  }
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "cart-elc") return Algorithm::CartElc;
  if (name == "cart-axis") return Algorithm::CartAxis;
  if (name == "hhcart-d") return Algorithm::HHCartD;
  if (name == "hhcart-a") return Algorithm::HHCartA;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (cart-elc, cart-axis, hhcart-d, hhcart-a)");
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::CartElc:
      return "cart-elc";
    case Algorithm::CartAxis:
      return "cart-axis";
    case Algorithm::HHCartD:
      return "hhcart-d";
    case Algorithm::HHCartA:
      return "hhcart-a";
  }
  return "?";
}

PartitionCounts evaluate_split(const Hyperplane& plane, const Eigen::MatrixXd& samples,
                               std::span<const int> labels, int num_classes) {
  require_labels(samples, labels, num_classes);
  PartitionCounts counts{ClassCounts(num_classes), ClassCounts(num_classes)};
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    if (side_of(plane, samples.row(i)) == Side::Left) {
      counts.left.add(labels[i]);
    } else {
      counts.right.add(labels[i]);
    }
  }
  return counts;
}

std::optional<SplitCandidate> best_split_elc(const Eigen::MatrixXd& samples,
                                             std::span<const int> labels, int num_classes,
                                             int r, CriterionKind criterion,
                                             const ExecutionOptions& exec) {
  require_labels(samples, labels, num_classes);
  const int n = static_cast<int>(samples.rows());
  const int m = static_cast<int>(samples.cols());
  if (r < 1 || r > m) throw ConfigError("r must satisfy 1 <= r <= m");
  if (r > n) throw ConfigError("r exceeds the number of samples");
  if (r > kMaxOrder) throw ConfigError("r above 32 is not supported");

  ElcSearch search(samples, labels, num_classes, r, criterion);
  ElcBest init;
  init.score = worst_score(criterion);
  ElcBest best = parallel_reduce_blocks(
      search.num_blocks(), exec.workers, init,
      [&](int block, ElcBest& local) { search.run_block(block, local); },
      [&](const ElcBest& a, const ElcBest& b) { return precedes(criterion, a, b); });
  if (!best.found) return std::nullopt;
  return search.materialise(best);
}

std::optional<SplitCandidate> best_split_axis(const Eigen::MatrixXd& samples,
                                              std::span<const int> labels, int num_classes,
                                              CriterionKind criterion) {
  require_labels(samples, labels, num_classes);
  require_complete(samples, "axis-aligned CART");
  if (samples.rows() == 0) return std::nullopt;
  const int m = static_cast<int>(samples.cols());
  Incumbent best;
  best.score = worst_score(criterion);
  sweep_projection_block(samples, labels, class_totals(labels, num_classes), criterion, 0,
                         [m](int k, double t) { return Hyperplane::axis(m, k, t); }, best);
  return best.result();
}

std::optional<SplitCandidate> best_split_hhcart(const Eigen::MatrixXd& samples,
                                                std::span<const int> labels, int num_classes,
                                                CriterionKind criterion, HHCartVariant variant) {
  require_labels(samples, labels, num_classes);
  require_complete(samples, "HHCART");
  const int n = static_cast<int>(samples.rows());
  const int m = static_cast<int>(samples.cols());
  if (n == 0) return std::nullopt;
  constexpr double kAxisTolerance = 1e-6;

  const std::vector<std::int64_t> totals = class_totals(labels, num_classes);
  const std::uint64_t block_size = static_cast<std::uint64_t>(n) * m;
  Incumbent best;
  best.score = worst_score(criterion);
  sweep_projection_block(samples, labels, totals, criterion, 0,
                         [m](int k, double t) { return Hyperplane::axis(m, k, t); }, best);

  std::uint64_t block = 1;
  Eigen::MatrixXd projected(n, m);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    if (members.size() < 2) continue;
    Eigen::MatrixXd x = samples(members, Eigen::all);
    Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(x.rows() - 1);
    auto eig = symmetric_eigen(cov);

    const int considered = variant == HHCartVariant::Dominant ? 1 : m;
    for (int e = 0; e < considered; ++e, ++block) {
      Eigen::VectorXd direction = eig.eigenvectors.col(m - 1 - e);
      direction.normalize();
      if (direction.cwiseAbs().maxCoeff() > 1.0 - kAxisTolerance) continue;
      const Eigen::MatrixXd h = householder_reflection(direction, 0);

      // Reflected coordinate k of x is (H x)_k = H.col(k) . x since H is
      // symmetric; each column is taken in canonical orientation and
      // projected exactly as side_of will later project it.
      std::vector<Hyperplane> planes;
      planes.reserve(m);
      for (int k = 0; k < m; ++k) {
        planes.push_back(Hyperplane::from_coefficients(h.col(k), 0.0));
        for (int i = 0; i < n; ++i) projected(i, k) = project(planes[k], samples.row(i));
      }
      sweep_projection_block(projected, labels, totals, criterion, block * block_size,
                             [&](int k, double t) {
                               Hyperplane p = planes[k];
                               p.bias = t;
                               return p;
                             },
                             best);
    }
  }
  return best.result();
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const InductionConfig& config, const Eigen::MatrixXd& samples,
              std::span<const int> labels, int num_classes, const ExecutionOptions& exec)
      : config_(config), samples_(samples), labels_(labels), num_classes_(num_classes),
        exec_(exec) {}

  int build(const std::vector<int>& rows, int depth, std::vector<TreeNode>& nodes) {
    std::vector<int> node_labels;
    node_labels.reserve(rows.size());
    for (int i : rows) node_labels.push_back(labels_[i]);
    const ClassCounts counts = ClassCounts::from_labels(node_labels, num_classes_);
    const int majority = counts.majority();

    const int index = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{TreeNode::Kind::Leaf, majority, {}, -1, -1});

    const bool homogeneous = counts.counts[majority] == counts.total;
    if (homogeneous || depth >= config_.max_depth) return index;

    Eigen::MatrixXd x = samples_(rows, Eigen::all);
    std::optional<SplitCandidate> best = search(x, node_labels);
    if (!best) return index;

    std::vector<int> left_rows, right_rows;
    for (int i : rows) {
      (side_of(best->plane, samples_.row(i)) == Side::Left ? left_rows : right_rows).push_back(i);
    }
    if (left_rows.empty() || right_rows.empty()) return index;

    nodes[index].kind = TreeNode::Kind::Split;
    nodes[index].plane = std::move(best->plane);
    const int left = build(left_rows, depth + 1, nodes);
    const int right = build(right_rows, depth + 1, nodes);
    nodes[index].left = left;
    nodes[index].right = right;
    return index;
  }

 private:
  std::optional<SplitCandidate> search(const Eigen::MatrixXd& x,
                                       const std::vector<int>& node_labels) const {
    switch (config_.algorithm) {
      case Algorithm::CartElc:
        // Too few samples to pass a plane through r of them.
        if (x.rows() < config_.r) return std::nullopt;
        return best_split_elc(x, node_labels, num_classes_, config_.r, config_.criterion, exec_);
      case Algorithm::CartAxis:
        return best_split_axis(x, node_labels, num_classes_, config_.criterion);
      case Algorithm::HHCartD:
        return best_split_hhcart(x, node_labels, num_classes_, config_.criterion,
                                 HHCartVariant::Dominant);
      case Algorithm::HHCartA:
        return best_split_hhcart(x, node_labels, num_classes_, config_.criterion,
                                 HHCartVariant::All);
    }
    return std::nullopt;
  }

  const InductionConfig& config_;
  const Eigen::MatrixXd& samples_;
  std::span<const int> labels_;
  int num_classes_;
  ExecutionOptions exec_;
};

}  // namespace

Tree fit(const InductionConfig& config, const Eigen::MatrixXd& samples,
         std::span<const int> labels, int num_classes, const ExecutionOptions& exec) {
  if (samples.rows() == 0) throw ConfigError("cannot fit a tree on an empty dataset");
  if (num_classes < 1) throw ConfigError("need at least one class");
  require_labels(samples, labels, num_classes);
  if (config.max_depth < 1) throw ConfigError("max depth must be at least 1");
  if (config.algorithm == Algorithm::CartElc) {
    if (config.r < 1 || config.r > samples.cols()) {
      throw ConfigError("r must satisfy 1 <= r <= m (m = " + std::to_string(samples.cols()) + ")");
    }
    if (config.r > kMaxOrder) throw ConfigError("r above 32 is not supported");
  } else {
    require_complete(samples, std::string(to_string(config.algorithm)).c_str());
  }

  Tree tree;
  tree.m = static_cast<int>(samples.cols());
  tree.classes.resize(num_classes);
  for (int c = 0; c < num_classes; ++c) tree.classes[c] = std::to_string(c);
  std::vector<int> rows(samples.rows());
  std::iota(rows.begin(), rows.end(), 0);
  TreeBuilder(config, samples, labels, num_classes, exec).build(rows, 0, tree.nodes);
  return tree;
}

Tree fit(const InductionConfig& config, const Dataset& dataset, const ExecutionOptions& exec) {
  Tree tree = fit(config, dataset.features, dataset.labels, dataset.num_classes(), exec);
  tree.classes = dataset.class_names;
  return tree;
}

bool Tree::operator==(const Tree& other) const {
  if (m != other.m || classes != other.classes || nodes.size() != other.nodes.size()) {
    return false;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& a = nodes[i];
    const TreeNode& b = other.nodes[i];
    if (a.kind != b.kind) return false;
    if (a.is_leaf()) {
      if (a.class_id != b.class_id) return false;
    } else if (!(a.plane == b.plane) || a.left != b.left || a.right != b.right) {
      return false;
    }
  }
  return true;
}

std::vector<int> predict(const Tree& tree, const Eigen::MatrixXd& samples) {
  std::vector<int> out(samples.rows());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) out[i] = predict(tree, samples.row(i));
  return out;
}

double accuracy(const Tree& tree, const Eigen::MatrixXd& samples, std::span<const int> labels) {
  if (samples.rows() == 0) return 0.0;
  std::int64_t correct = 0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    correct += predict(tree, samples.row(i)) == labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(samples.rows());
}

int tree_size(const Tree& tree) {
  return static_cast<int>(std::count_if(tree.nodes.begin(), tree.nodes.end(),
                                        [](const TreeNode& n) { return n.is_leaf(); }));
}

int tree_depth(const Tree& tree) {
  std::function<int(int)> depth = [&](int i) -> int {
    const TreeNode& n = tree.nodes[i];
    return n.is_leaf() ? 0 : 1 + std::max(depth(n.left), depth(n.right));
  };
  return tree.nodes.empty() ? 0 : depth(0);
}

Tree truncated(const Tree& tree, int max_depth) {
  Tree out;
  out.m = tree.m;
  out.classes = tree.classes;
  std::function<int(int, int)> copy = [&](int i, int depth) -> int {
    const TreeNode& n = tree.nodes[i];
    const int index = static_cast<int>(out.nodes.size());
    out.nodes.push_back(n);
    if (n.is_leaf()) return index;
    if (depth >= max_depth) {
      if (n.class_id < 0) throw ContractError("truncated: split node has no majority class");
      out.nodes[index] = TreeNode{TreeNode::Kind::Leaf, n.class_id, {}, -1, -1};
      return index;
    }
    const int left = copy(n.left, depth + 1);
    const int right = copy(n.right, depth + 1);
    out.nodes[index].left = left;
    out.nodes[index].right = right;
    return index;
  };
  copy(0, 0);
  return out;
}

}  // namespace cartelc
