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

#ifndef CARTELC_EVALUATION_HPP_
#define CARTELC_EVALUATION_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cartelc/data.hpp"
#include "cartelc/induction.hpp"

namespace cartelc {

struct CVConfig {
  int folds = 5;
  int repeats = 10;
  std::uint64_t seed = 0;
  int grid_r_max = 1;      // largest r tried (CART-ELC only)
  int grid_depth_max = 5;  // largest max depth tried
};

// Per-repeat means over the folds of one repeat.
struct CVResult {
  std::vector<double> accuracies;
  std::vector<double> sizes;
};

struct CVCell {
  int r = 1;
  int depth = 1;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_tree_size = 0.0;
  double std_tree_size = 0.0;
  std::vector<double> accuracies;  // one per repeat
  std::vector<double> sizes;
};

struct CVReport {
  Algorithm algorithm = Algorithm::CartElc;
  CriterionKind criterion = CriterionKind::Gini;
  CVConfig cv;
  std::vector<CVCell> cells;  // r-major, then depth
  std::pair<int, int> selected{1, 1};

  const CVCell& cell(int r, int depth) const;
  const CVCell& selected_cell() const { return cell(selected.first, selected.second); }
};

// Independent generator for one CV repeat, derived from (seed, repeat).
std::mt19937_64 repeat_rng(std::uint64_t seed, int repeat);

// Uniform integer in [0, bound) by rejection; portable across standard
// libraries, unlike std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Fisher-Yates shuffle of 0..n-1 cut into `folds` contiguous blocks; the
/// first n % folds blocks get one extra sample. Returns the fold of every
/// sample.
std::vector<int> partition_folds(int n, int folds, std::mt19937_64& rng);

CVResult cross_validate(const Dataset& dataset, const InductionConfig& config,
                        const CVConfig& cv, const ExecutionOptions& exec = {});

/// Repeated k-fold CV over every (r, depth) with r <= grid_r_max and
/// depth <= grid_depth_max. Each repeat draws one partition shared by all
/// cells. Algorithms without an r parameter get a single r = 1 row.
CVReport grid_search(const Dataset& dataset, const CVConfig& cv, CriterionKind criterion,
                     Algorithm algorithm, const ExecutionOptions& exec = {});

/// Highest mean accuracy (ties within 1e-12), then smaller mean tree size,
/// then smaller r, then smaller depth.
std::pair<int, int> select_best(std::span<const CVCell> cells);

std::string report_json(const CVReport& report);
std::string report_csv(const CVReport& report);
CVReport parse_report_json(std::string_view text);

}  // namespace cartelc

#endif  // CARTELC_EVALUATION_HPP_
