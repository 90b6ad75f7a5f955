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

// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance [criterion numbers...]   (default: all)

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cartelc/cartelc.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace cartelc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args, const fs::path& cwd = {}) {
  std::string cmd = std::string(CARTELC_CLI) + " " + args + " 2>/dev/null";
  if (!cwd.empty()) cmd = "cd '" + cwd.string() + "' && " + cmd;
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Operation-count table.

const std::vector<std::int64_t> kTableN{100, 500, 1000, 5000, 10000, 20000};
const char* const kTable1[10][6] = {
    {"1.01e+04", "2.50e+05", "1.00e+06", "2.50e+07", "1.00e+08", "4.00e+08"},
    {"1.03e+06", "1.26e+08", "1.00e+09", "1.25e+11", "1.00e+12", "8.00e+12"},
    {"5.29e+07", "3.16e+10", "5.03e+11", "3.13e+14", "5.00e+15", "8.00e+16"},
    {"1.82e+09", "5.31e+12", "1.68e+14", "5.22e+17", "1.67e+19", "5.34e+20"},
    {"4.71e+10", "6.70e+14", "4.23e+16", "6.53e+20", "4.17e+22", "2.67e+24"},
    {"9.73e+11", "6.77e+16", "8.50e+18", "6.54e+23", "8.35e+25", "1.07e+28"},
    {"1.67e+13", "5.71e+18", "1.43e+21", "5.46e+26", "1.39e+29", "3.56e+31"},
    {"2.44e+14", "4.13e+20", "2.05e+23", "3.90e+29", "1.99e+32", "1.02e+35"},
    {"3.10e+15", "2.62e+22", "2.59e+25", "2.44e+32", "2.49e+35", "2.55e+38"},
    {"3.46e+16", "1.47e+24", "2.90e+27", "1.36e+35", "2.77e+38", "5.66e+41"},
};

Outcome ac1() {
  const auto start = Clock::now();
  Run r = run_cli("opcount --format csv");
  const double elapsed = seconds_since(start);
  if (r.code != 0) return {false, "opcount exited with " + std::to_string(r.code)};
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  int matched = 0;
  std::string first_miss;
  for (int i = 0; i < 10 && std::getline(lines, line); ++i) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    for (int j = 0; j < 6; ++j) {
      if (cells.size() == 7 && cells[j + 1] == kTable1[i][j]) {
        ++matched;
      } else if (first_miss.empty()) {
        first_miss = " first mismatch r=" + std::to_string(i + 1) + " n=" +
                     std::to_string(kTableN[j]);
      }
    }
  }
  return {matched == 60 && elapsed < 1.0,
          std::to_string(matched) + "/60 cells via cli opcount" + first_miss + ", " +
              fmt("%.3f", elapsed) + " s (limit 1 s)"};
}

// ---------------------------------------------------------------------------
// 2. Welch p-values and Cohen's d from reference accuracy summaries.

struct Summary {
  double mean, std;
};
// Accuracy mean and std per dataset: S/G Bright, S/G Dim, Cancer, Iris,
// Housing, Diabetes.
const Summary kElc[6] = {{98.9, 0.2}, {95.2, 0.5}, {96.3, 0.4},
                         {95.1, 0.8}, {83.5, 0.7}, {74.5, 1.3}};
struct Row {
  const char* name;
  Summary acc[6];
  double p[6];
  double d[6];
};
const Row kRows[7] = {
    {"HHCART(A)",
     {{98.3, 0.5}, {93.7, 0.8}, {96.9, 0.3}, {95.5, 1.4}, {83.9, 0.8}, {73.2, 1.2}},
     {0.004, 0.000, 0.001, 0.446, 0.250, 0.032},
     {1.576, 2.249, -1.697, -0.351, -0.532, 1.039}},
    {"HHCART(D)",
     {{98.1, 0.4}, {93.7, 0.9}, {96.9, 0.3}, {94.3, 1.5}, {82.2, 1.4}, {73.2, 1.2}},
     {0.000, 0.000, 0.001, 0.159, 0.021, 0.032},
     {2.530, 2.060, -1.697, 0.666, 1.175, 1.039}},
    {"OC1",
     {{98.9, 0.2}, {95.0, 0.3}, {96.2, 0.3}, {94.7, 3.1}, {82.4, 0.8}, {74.4, 1.0}},
     {1.000, 0.296, 0.536, 0.701, 0.004, 0.849},
     {0.000, 0.485, 0.283, 0.177, 1.463, 0.086}},
    {"OC1-AP",
     {{98.1, 0.2}, {94.0, 0.2}, {94.5, 0.5}, {92.7, 2.4}, {81.8, 1.0}, {73.8, 1.0}},
     {0.000, 0.000, 0.000, 0.012, 0.000, 0.195},
     {4.000, 3.151, 3.976, 1.342, 1.970, 0.604}},
    {"CART-LC",
     {{98.8, 0.2}, {92.8, 0.5}, {95.3, 0.6}, {93.5, 2.9}, {81.4, 1.2}, {73.7, 1.2}},
     {0.278, 0.000, 0.000, 0.122, 0.000, 0.170},
     {0.500, 4.800, 1.961, 0.752, 2.138, 0.639}},
    {"CART",
     {{98.5, 0.5}, {94.2, 0.7}, {95.0, 1.6}, {93.8, 3.7}, {82.1, 3.5}, {73.9, 3.4}},
     {0.037, 0.002, 0.032, 0.303, 0.244, 0.612},
     {1.050, 1.644, 1.115, 0.486, 0.555, 0.233}},
    {"C4.5",
     {{98.5, 0.5}, {93.3, 0.8}, {95.3, 2.0}, {95.1, 3.2}, {83.2, 3.1}, {71.4, 3.3}},
     {0.037, 0.000, 0.153, 1.000, 0.771, 0.017},
     {1.050, 2.848, 0.693, 0.000, 0.133, 1.236}},
};

Outcome ac2() {
  const auto start = Clock::now();
  int p_ok = 0, d_ok = 0;
  std::string first_miss;
  for (const Row& row : kRows) {
    for (int j = 0; j < 6; ++j) {
      const WelchTest w =
          welch_t_test(kElc[j].mean, kElc[j].std, 10, row.acc[j].mean, row.acc[j].std, 10);
      const double d = cohens_d(kElc[j].mean, kElc[j].std, row.acc[j].mean, row.acc[j].std);
      const bool p_hit = std::abs(w.p_value - row.p[j]) <= 0.001 + 1e-12;
      const bool d_hit = std::abs(d - row.d[j]) <= 0.001 + 1e-12;
      p_ok += p_hit;
      d_ok += d_hit;
      if ((!p_hit || !d_hit) && first_miss.empty()) {
        first_miss = std::string(" first miss ") + row.name + " column " + std::to_string(j);
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {p_ok == 42 && d_ok == 42 && elapsed < 1.0,
          "p " + std::to_string(p_ok) + "/42, d " + std::to_string(d_ok) + "/42" + first_miss +
              ", " + fmt("%.4f", elapsed) + " s (limit 1 s)"};
}

// ---------------------------------------------------------------------------
// 3. Exhaustive search against the brute-force enumerator.

Outcome ac3() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260101);
  int datasets = 0, agreed = 0, comparisons = 0;
  while (datasets < 200) {
    const int m = 1 + static_cast<int>(rng() % 3);
    const int r = std::min(m, 1 + static_cast<int>(rng() % 2));
    const int n = 2 + static_cast<int>(rng() % 11);
    auto p = testing::random_problem(rng, n, m, 2);
    ++datasets;
    bool all = true;
    for (auto kind : {CriterionKind::Twoing, CriterionKind::Gini, CriterionKind::InfoGain}) {
      auto ours = best_split_elc(p.samples, p.labels, 2, r, kind);
      auto ref = testing::brute_force_best_score(p.samples, p.labels, 2, r, kind);
      ++comparisons;
      all = all && ours.has_value() == ref.has_value() && (!ours || ours->score == *ref);
    }
    agreed += all;
  }
  const double elapsed = seconds_since(start);
  return {agreed == 200 && elapsed < 60.0,
          std::to_string(agreed) + "/200 datasets exact over " + std::to_string(comparisons) +
              " comparisons, " + fmt("%.2f", elapsed) + " s (limit 60 s)"};
}

// ---------------------------------------------------------------------------
// 4. Plane incidence and eigensolver reconstruction.

Outcome ac4() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst_incidence = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const int r = 1 + static_cast<int>(rng() % 8);
    const int m = r + static_cast<int>(rng() % 3);
    Eigen::MatrixXd pts(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) pts(i, j) = u(rng);
    std::vector<int> cols(m);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(cols.begin(), cols.end(), rng);
    cols.resize(r);
    std::sort(cols.begin(), cols.end());
    const Hyperplane h = fit_hyperplane(pts, cols, m);
    for (int i = 0; i < r; ++i) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
      for (int k = 0; k < r; ++k) x[cols[k]] = pts(i, k);
      worst_incidence = std::max(worst_incidence, std::abs(project(h, x) - h.bias));
    }
  }
  double worst_recon = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const int n = 1 + static_cast<int>(rng() % 8);
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = u(rng);
    const Eigen::MatrixXd a = (b + b.transpose()) / 2;
    const auto e = symmetric_eigen(a);
    const Eigen::MatrixXd recon =
        e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.transpose();
    worst_recon = std::max(worst_recon, (recon - a).cwiseAbs().maxCoeff());
  }
  const double elapsed = seconds_since(start);
  return {worst_incidence <= 1e-9 && worst_recon <= 1e-8 && elapsed < 30.0,
          "max |w.x-b| " + fmt("%.2e", worst_incidence) + " (limit 1e-9), max reconstruction " +
              fmt("%.2e", worst_recon) + " (limit 1e-8), " + fmt("%.2f", elapsed) +
              " s (limit 30 s)"};
}

// ---------------------------------------------------------------------------
// 5. r = 1 trees equal axis-aligned CART trees.

Outcome ac5() {
  const auto start = Clock::now();
  std::mt19937_64 rng(5);
  int same = 0;
  const CriterionKind kinds[3] = {CriterionKind::Twoing, CriterionKind::Gini,
                                  CriterionKind::InfoGain};
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 39);
    const int m = 1 + static_cast<int>(rng() % 4);
    const int depth = 1 + static_cast<int>(rng() % 4);
    auto p = testing::random_problem(rng, n, m, 2 + static_cast<int>(rng() % 2));
    const CriterionKind kind = kinds[trial % 3];
    const Tree elc = fit({kind, 1, depth, Algorithm::CartElc}, p.samples, p.labels, p.num_classes);
    const Tree axis = fit({kind, 1, depth, Algorithm::CartAxis}, p.samples, p.labels, p.num_classes);
    same += serialize(elc) == serialize(axis);
  }
  const double elapsed = seconds_since(start);
  return {same == 50 && elapsed < 60.0, std::to_string(same) +
                                            "/50 serialized trees identical, " +
                                            fmt("%.2f", elapsed) + " s (limit 60 s)"};
}

// ---------------------------------------------------------------------------
// 6-8. End-to-end cross-validation.

std::string describe(const CVReport& report, double elapsed) {
  const CVCell& c = report.selected_cell();
  return "selected r=" + std::to_string(c.r) + " depth=" + std::to_string(c.depth) +
         ", accuracy " + fmt("%.4f", c.mean_accuracy) + " +/- " + fmt("%.4f", c.std_accuracy) +
         ", size " + fmt("%.2f", c.mean_tree_size) + " +/- " + fmt("%.2f", c.std_tree_size) +
         ", " + fmt("%.1f", elapsed) + " s";
}

Outcome ac6() {
  const auto start = Clock::now();
  const Dataset iris = load_csv(testing::data_path("iris.csv"));
  const CVReport report =
      grid_search(iris, {5, 10, 0, 2, 5}, CriterionKind::Twoing, Algorithm::CartElc);
  const double elapsed = seconds_since(start);
  const CVCell& c = report.selected_cell();
  const bool ok = c.mean_accuracy >= 0.92 && c.mean_accuracy <= 0.98 &&
                  c.mean_tree_size <= 8.0 && elapsed < 600.0;
  return {ok, describe(report, elapsed) + " (band [0.92, 0.98], size <= 8, limit 600 s)"};
}

Outcome ac7() {
  const Dataset raw = load_csv(testing::data_path("breast_cancer_wisconsin.csv"));
  const Dataset cancer = remove_rows_missing(raw, "Bare Nuclei");
  const bool rows_ok = cancer.rows() == 683;

  auto fast_start = Clock::now();
  const CVReport fast =
      grid_search(cancer, {5, 10, 0, 1, 5}, CriterionKind::Twoing, Algorithm::CartElc);
  const double fast_elapsed = seconds_since(fast_start);
  const bool fast_ok = fast.selected_cell().mean_accuracy >= 0.93 && fast_elapsed < 300.0;

  auto full_start = Clock::now();
  const CVReport full =
      grid_search(cancer, {5, 10, 0, 2, 5}, CriterionKind::Twoing, Algorithm::CartElc);
  const double full_elapsed = seconds_since(full_start);
  const double acc = full.selected_cell().mean_accuracy;
  const bool full_ok = acc >= 0.94 && acc <= 0.98 && full_elapsed <= 3 * 3600.0;

  return {rows_ok && fast_ok && full_ok,
          std::to_string(cancer.rows()) + " rows (expect 683); full r<=2: " +
              describe(full, full_elapsed) + " (band [0.94, 0.98], limit 3 h); fast r=1: " +
              describe(fast, fast_elapsed) + " (>= 0.93, limit 300 s)"};
}

Outcome ac8() {
  const auto start = Clock::now();
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const int m = 2 + static_cast<int>(rng() % 9);
    Eigen::VectorXd d(m);
    for (int i = 0; i < m; ++i) d(i) = g(rng);
    d.normalize();
    const int axis = static_cast<int>(rng() % m);
    const Eigen::MatrixXd h = householder_reflection(d, axis);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
    worst = std::max({worst, (h - h.transpose()).cwiseAbs().maxCoeff(),
                      (h.transpose() * h - id).cwiseAbs().maxCoeff(),
                      (h * d - id.col(axis)).cwiseAbs().maxCoeff()});
  }
  const Dataset raw = load_csv(testing::data_path("breast_cancer_wisconsin.csv"));
  const Dataset imputed = mean_impute(raw);
  const CVReport report =
      grid_search(imputed, {5, 10, 0, 1, 5}, CriterionKind::Twoing, Algorithm::HHCartD);
  const double elapsed = seconds_since(start);
  const bool ok = worst <= 1e-9 && report.selected_cell().mean_accuracy >= 0.94 && elapsed < 600;
  return {ok, "Householder max deviation " + fmt("%.2e", worst) + " (limit 1e-9); HHCART-D on " +
                  std::to_string(imputed.rows()) + " imputed rows: " + describe(report, elapsed) +
                  " (>= 0.94, limit 600 s)"};
}

// ---------------------------------------------------------------------------
// 10. Byte-identical outputs at different worker counts.

Outcome ac10() {
  const auto start = Clock::now();
  const fs::path dir = fs::temp_directory_path() / ("cartelc_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string iris = testing::data_path("iris.csv");
  const std::string cancer = testing::data_path("breast_cancer_wisconsin.csv");
  const std::string housing = testing::data_path("boston_housing.csv");

  // Each worker count runs in its own directory with relative output paths,
  // so the manifests can be compared byte for byte too.
  struct Command {
    std::string tag;
    std::string args;
    std::vector<std::string> files;
  };
  const std::vector<Command> commands{
      {"iris_cv", "cv --data " + iris + " --criterion twoing --grid-r 2 --grid-depth 5 --seed 1" +
                      " --out-json {p}.json --out-csv {p}.csv",
       {".json", ".csv"}},
      {"cancer_cv", "cv --data " + cancer + " --preset cancer --criterion twoing --grid-depth 5" +
                        " --seed 2 --out-json {p}.json --out-csv {p}.csv",
       {".json", ".csv"}},
      {"housing_cv", "cv --data " + housing + " --preset housing --algorithm hhcart-a" +
                         " --criterion twoing --seed 3 --out-json {p}.json --out-csv {p}.csv",
       {".json", ".csv"}},
      {"cancer_train", "train --data " + cancer + " --preset cancer --max-depth 5" +
                           " --out {p}.json",
       {".json"}},
      {"iris_predict", "predict --tree {p0}.json --data " + iris + " --label species --out {p}.csv",
       {".csv"}},
      {"compare", "compare --a 98.9,0.2,10 --b 98.3,0.5,10", {}},
      {"opcount", "opcount", {}},
  };

  std::map<int, std::map<std::string, std::string>> outputs;
  for (int workers : {1, 3}) {
    const fs::path cwd = dir / ("w" + std::to_string(workers));
    fs::create_directories(cwd);
    const std::string ws = " --workers " + std::to_string(workers);
    run_cli("train --data " + iris + " --r 2 --max-depth 3 --out iris_tree.json" + ws, cwd);
    outputs[workers]["iris_tree.json"] = slurp(cwd / "iris_tree.json");
    for (const Command& c : commands) {
      std::string args = c.args;
      for (auto pos = args.find("{p0}"); pos != std::string::npos; pos = args.find("{p0}"))
        args.replace(pos, 4, "iris_tree");
      for (auto pos = args.find("{p}"); pos != std::string::npos; pos = args.find("{p}"))
        args.replace(pos, 3, c.tag);
      const Run r = run_cli(args + ws, cwd);
      outputs[workers][c.tag + ".stdout"] = std::to_string(r.code) + "\n" + r.out;
      for (const std::string& ext : c.files) {
        outputs[workers][c.tag + ext] = slurp(cwd / (c.tag + ext));
        outputs[workers][c.tag + ext + ".manifest"] = slurp(cwd / (c.tag + ext + ".manifest.json"));
      }
    }
  }

  int identical = 0;
  std::string first_diff;
  for (const auto& [name, text] : outputs[1]) {
    const bool same = !text.empty() && outputs[3][name] == text;
    identical += same;
    if (!same && first_diff.empty()) first_diff = " first difference: " + name;
  }
  bool all_ran = true;
  for (const auto& [name, text] : outputs[1]) {
    if (name.ends_with(".stdout") && text.rfind("0\n", 0) != 0) all_ran = false;
  }

  // In-library check on the parallel split search and grid search.
  const Dataset iris_data = load_csv(iris);
  const CVConfig cv{5, 3, 9, 2, 3};
  const bool lib_same =
      report_json(grid_search(iris_data, cv, CriterionKind::Gini, Algorithm::CartElc, {1})) ==
      report_json(grid_search(iris_data, cv, CriterionKind::Gini, Algorithm::CartElc, {4}));
  fs::remove_all(dir);

  const double elapsed = seconds_since(start);
  const int total = static_cast<int>(outputs[1].size());
  return {identical == total && all_ran && lib_same && elapsed < 60.0,
          std::to_string(identical) + "/" + std::to_string(total) +
              " cli artifacts byte-identical at 1 vs 3 workers" + first_diff +
              (all_ran ? "" : ", a command failed") +
              (lib_same ? ", library grid identical at 1 vs 4 workers" : ", library grid differs") +
              ", " + fmt("%.1f", elapsed) + " s (limit 60 s)"};
}

// ---------------------------------------------------------------------------
// 9. Declared gaps, covered by the substitutes above.

Outcome ac9(bool substitutes_ok) {
  return {substitutes_ok,
          "star/galaxy bright and dim data are unavailable and OC1, CART-LC and C4.5 are out of "
          "scope; substituted by AC1-AC8 and AC2's reference accuracy summaries"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  bool substitutes_ok = true;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto wanted = [&](int n) { return selected.empty() || selected.count(n); };

  const std::vector<std::pair<int, std::pair<const char*, std::function<Outcome()>>>> criteria{
      {1, {"operation-count grid", ac1}},
      {2, {"Welch p-values and Cohen's d", ac2}},
      {3, {"split search equals brute force", ac3}},
      {4, {"plane incidence and eigensolver", ac4}},
      {5, {"r=1 equals axis-aligned CART", ac5}},
      {6, {"Iris cross-validation", ac6}},
      {7, {"breast cancer cross-validation", ac7}},
      {8, {"HHCART properties", ac8}},
      {9, {"declared not reproducible at desk scale", [&] { return ac9(substitutes_ok); }}},
      {10, {"determinism across worker counts", ac10}},
  };

  int failures = 0;
  for (const auto& [number, entry] : criteria) {
    if (!wanted(number)) continue;
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("AC%d %s %s: %s\n", number, o.pass ? "PASS" : "FAIL", entry.first,
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
    if (number <= 8) substitutes_ok = substitutes_ok && o.pass;
  }
  return failures == 0 ? 0 : 1;
}
