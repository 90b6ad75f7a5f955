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

#include "cartelc/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "cartelc/errors.hpp"
#include "cartelc/statistics.hpp"

namespace cartelc {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void validate(const Dataset& dataset, const CVConfig& cv) {
  if (cv.folds < 2) throw ConfigError("folds must be at least 2");
  if (cv.repeats < 1) throw ConfigError("repeats must be at least 1");
  if (dataset.rows() < cv.folds) throw ConfigError("fewer samples than folds");
  dataset.validate();
}

// Runs job(i) for i in [0, count) on up to `workers` threads.
template <typename Job>
void run_jobs(int count, int workers, Job job) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
        } catch (...) {
          errors[w] = std::current_exception();
          next = count;
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct FoldSplit {
  Dataset train;
  Dataset test;
};

std::vector<std::vector<FoldSplit>> make_splits(const Dataset& dataset, const CVConfig& cv) {
  std::vector<std::vector<FoldSplit>> splits(cv.repeats);
  for (int rep = 0; rep < cv.repeats; ++rep) {
    auto rng = repeat_rng(cv.seed, rep);
    const std::vector<int> fold_of =
        partition_folds(static_cast<int>(dataset.rows()), cv.folds, rng);
    for (int f = 0; f < cv.folds; ++f) {
      std::vector<int> train_rows, test_rows;
      for (int i = 0; i < static_cast<int>(fold_of.size()); ++i) {
        (fold_of[i] == f ? test_rows : train_rows).push_back(i);
      }
      splits[rep].push_back({dataset.subset(train_rows), dataset.subset(test_rows)});
    }
  }
  return splits;
}

void fill_summary(CVCell& cell) {
  cell.mean_accuracy = mean(cell.accuracies);
  cell.std_accuracy = sample_std(cell.accuracies);
  cell.mean_tree_size = mean(cell.sizes);
  cell.std_tree_size = sample_std(cell.sizes);
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::mt19937_64 repeat_rng(std::uint64_t seed, int repeat) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(repeat)));
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

std::vector<int> partition_folds(int n, int folds, std::mt19937_64& rng) {
  if (folds < 1) throw ConfigError("folds must be positive");
  if (n < folds) throw ConfigError("fewer samples than folds");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[uniform_below(rng, static_cast<std::uint64_t>(i) + 1)]);
  }
  std::vector<int> fold_of(n);
  const int base = n / folds;
  const int extra = n % folds;
  int pos = 0;
  for (int f = 0; f < folds; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    for (int t = 0; t < size; ++t) fold_of[perm[pos++]] = f;
  }
  return fold_of;
}

CVResult cross_validate(const Dataset& dataset, const InductionConfig& config,
                        const CVConfig& cv, const ExecutionOptions& exec) {
  validate(dataset, cv);
  const auto splits = make_splits(dataset, cv);
  const int jobs = cv.repeats * cv.folds;
  std::vector<double> acc(jobs), size(jobs);
  const ExecutionOptions inner{jobs >= exec.workers ? 1 : exec.workers};
  run_jobs(jobs, exec.workers, [&](int job) {
    const FoldSplit& s = splits[job / cv.folds][job % cv.folds];
    const Tree tree = fit(config, s.train, inner);
    acc[job] = accuracy(tree, s.test.features, s.test.labels);
    size[job] = tree_size(tree);
  });
  CVResult result;
  for (int rep = 0; rep < cv.repeats; ++rep) {
    std::span<const double> a(acc.data() + rep * cv.folds, cv.folds);
    std::span<const double> z(size.data() + rep * cv.folds, cv.folds);
    result.accuracies.push_back(mean(a));
    result.sizes.push_back(mean(z));
  }
  return result;
}

CVReport grid_search(const Dataset& dataset, const CVConfig& cv, CriterionKind criterion,
                     Algorithm algorithm, const ExecutionOptions& exec) {
  validate(dataset, cv);
  if (cv.grid_r_max < 1 || cv.grid_depth_max < 1) throw ConfigError("grid bounds must be >= 1");
  const int r_max = algorithm == Algorithm::CartElc ? cv.grid_r_max : 1;
  if (r_max > dataset.cols()) throw ConfigError("grid r exceeds the feature count");
  const int d_max = cv.grid_depth_max;

  const auto splits = make_splits(dataset, cv);
  const int jobs = cv.repeats * cv.folds * r_max;
  // results[job][depth - 1] = (accuracy, size). A depth-d tree is the
  // depth-d_max tree cut at d, so each (repeat, fold, r) is fitted once.
  std::vector<std::vector<std::pair<double, double>>> results(jobs);
  const ExecutionOptions inner{jobs >= exec.workers ? 1 : exec.workers};
  run_jobs(jobs, exec.workers, [&](int job) {
    const int r = job % r_max + 1;
    const int fold_job = job / r_max;
    const FoldSplit& s = splits[fold_job / cv.folds][fold_job % cv.folds];
    const InductionConfig config{criterion, r, d_max, algorithm};
    const Tree full = fit(config, s.train, inner);
    auto& out = results[job];
    out.resize(d_max);
    for (int d = 1; d <= d_max; ++d) {
      const Tree tree = d == d_max ? full : truncated(full, d);
      out[d - 1] = {accuracy(tree, s.test.features, s.test.labels),
                    static_cast<double>(tree_size(tree))};
    }
  });

  CVReport report;
  report.algorithm = algorithm;
  report.criterion = criterion;
  report.cv = cv;
  report.cv.grid_r_max = r_max;
  for (int r = 1; r <= r_max; ++r) {
    for (int d = 1; d <= d_max; ++d) {
      CVCell cell;
      cell.r = r;
      cell.depth = d;
      for (int rep = 0; rep < cv.repeats; ++rep) {
        double acc = 0.0, size = 0.0;
        for (int f = 0; f < cv.folds; ++f) {
          const auto& v = results[(rep * cv.folds + f) * r_max + (r - 1)][d - 1];
          acc += v.first;
          size += v.second;
        }
        cell.accuracies.push_back(acc / cv.folds);
        cell.sizes.push_back(size / cv.folds);
      }
      fill_summary(cell);
      report.cells.push_back(std::move(cell));
    }
  }
  report.selected = select_best(report.cells);
  return report;
}

std::pair<int, int> select_best(std::span<const CVCell> cells) {
  if (cells.empty()) throw ConfigError("select_best: no cells");
  constexpr double kTie = 1e-12;
  const CVCell* best = &cells.front();
  for (const CVCell& c : cells) {
    if (c.mean_accuracy > best->mean_accuracy + kTie) {
      best = &c;
      continue;
    }
    if (c.mean_accuracy < best->mean_accuracy - kTie) continue;
    if (std::tie(c.mean_tree_size, c.r, c.depth) <
        std::tie(best->mean_tree_size, best->r, best->depth)) {
      best = &c;
    }
  }
  return {best->r, best->depth};
}

const CVCell& CVReport::cell(int r, int depth) const {
  for (const CVCell& c : cells) {
    if (c.r == r && c.depth == depth) return c;
  }
  throw ConfigError("report has no cell (r=" + std::to_string(r) +
                    ", depth=" + std::to_string(depth) + ")");
}

std::string report_json(const CVReport& report) {
  nlohmann::ordered_json doc;
  doc["algorithm"] = std::string(to_string(report.algorithm));
  doc["criterion"] = std::string(to_string(report.criterion));
  doc["folds"] = report.cv.folds;
  doc["repeats"] = report.cv.repeats;
  doc["seed"] = report.cv.seed;
  doc["grid_r_max"] = report.cv.grid_r_max;
  doc["grid_depth_max"] = report.cv.grid_depth_max;
  auto& cells = doc["cells"] = nlohmann::ordered_json::array();
  for (const CVCell& c : report.cells) {
    nlohmann::ordered_json cell;
    cell["r"] = c.r;
    cell["depth"] = c.depth;
    cell["mean_accuracy"] = c.mean_accuracy;
    cell["std_accuracy"] = c.std_accuracy;
    cell["mean_tree_size"] = c.mean_tree_size;
    cell["std_tree_size"] = c.std_tree_size;
    cell["accuracies"] = c.accuracies;
    cell["tree_sizes"] = c.sizes;
    cells.push_back(std::move(cell));
  }
  doc["selected"] = {{"r", report.selected.first}, {"depth", report.selected.second}};
  return doc.dump(2) + "\n";
}

std::string report_csv(const CVReport& report) {
  std::string out = "r,depth,mean_acc,std_acc,mean_size,std_size\n";
  for (const CVCell& c : report.cells) {
    out += std::to_string(c.r) + ',' + std::to_string(c.depth) + ',' +
           format_real(c.mean_accuracy) + ',' + format_real(c.std_accuracy) + ',' +
           format_real(c.mean_tree_size) + ',' + format_real(c.std_tree_size) + '\n';
  }
  return out;
}

CVReport parse_report_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text.begin(), text.end());
    CVReport report;
    report.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    report.criterion = parse_criterion(doc.at("criterion").get<std::string>());
    report.cv.folds = doc.at("folds").get<int>();
    report.cv.repeats = doc.at("repeats").get<int>();
    report.cv.seed = doc.at("seed").get<std::uint64_t>();
    report.cv.grid_r_max = doc.at("grid_r_max").get<int>();
    report.cv.grid_depth_max = doc.at("grid_depth_max").get<int>();
    for (const auto& c : doc.at("cells")) {
      CVCell cell;
      cell.r = c.at("r").get<int>();
      cell.depth = c.at("depth").get<int>();
      cell.mean_accuracy = c.at("mean_accuracy").get<double>();
      cell.std_accuracy = c.at("std_accuracy").get<double>();
      cell.mean_tree_size = c.at("mean_tree_size").get<double>();
      cell.std_tree_size = c.at("std_tree_size").get<double>();
      cell.accuracies = c.at("accuracies").get<std::vector<double>>();
      cell.sizes = c.at("tree_sizes").get<std::vector<double>>();
      report.cells.push_back(std::move(cell));
    }
    report.selected = {doc.at("selected").at("r").get<int>(),
                       doc.at("selected").at("depth").get<int>()};
    report.selected_cell();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report JSON: ") + e.what());
  }
}

}  // namespace cartelc
