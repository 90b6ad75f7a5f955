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

// cartelc: train, apply and evaluate CART-ELC oblique decision trees.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or input error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cartelc/cartelc.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace cartelc::cli {
namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr double kHousingThreshold = 21000.0;

struct DataOptions {
  std::string path;
  std::string label = "last";
  std::string preset = "none";
  std::vector<std::string> missing_tokens = CsvOptions{}.missing_tokens;
  bool impute = false;
};

struct TreeOptions {
  std::string algorithm = "cart-elc";
  std::string criterion = "gini";
  int r = 1;
  int max_depth = 5;
};

struct CvOptions {
  std::string algorithm = "cart-elc";
  std::string criterion = "gini";
  int grid_r = 1;
  int grid_depth = 5;
  int folds = 5;
  int repeats = 10;
  std::uint64_t seed = 0;
  std::string out_json;
  std::string out_csv;
};

struct CompareOptions {
  std::string a, b;
  std::string report_a, report_b;
  std::string format = "text";
};

struct OpcountOptions {
  std::string n_list = "100,500,1000,5000,10000,20000";
  std::string r_list = "1,2,3,4,5,6,7,8,9,10";
  std::string format = "text";
  std::string out;
};

struct Common {
  int workers = 1;
  std::string manifest;
};

fs::path out_dir() {
  const char* env = std::getenv("CARTELC_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve_output(const std::string& flag, const char* default_name) {
  return flag.empty() ? out_dir() / default_name : fs::path(flag);
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void add_data_options(CLI::App& cmd, DataOptions& d, bool label_optional) {
  cmd.add_option("--data", d.path, "Input CSV file")->required()->check(CLI::ExistingFile);
  auto* label = cmd.add_option("--label", d.label, "Label column name, or 'last'");
  if (!label_optional) label->capture_default_str();
  cmd.add_option("--preset", d.preset, "Dataset preprocessing preset")
      ->check(CLI::IsMember({"none", "cancer", "housing"}))
      ->capture_default_str();
  cmd.add_option("--missing", d.missing_tokens, "Cell tokens read as missing (repeatable)")
      ->delimiter(',');
  cmd.add_flag("--impute", d.impute, "Replace missing cells with column means");
}

void record_data(RunManifest& m, const DataOptions& d) {
  m.flags["data"] = d.path;
  m.flags["label"] = d.label;
  m.flags["preset"] = d.preset;
  m.flags["missing"] = d.missing_tokens;
  m.flags["impute"] = d.impute;
  m.add_input("data", d.path);
}

Dataset load_dataset(const DataOptions& d, Algorithm algorithm) {
  Dataset dataset;
  if (d.preset == "housing") {
    const FeatureTable table = load_feature_csv(d.path, d.missing_tokens);
    dataset = label_by_threshold(table, d.label == "last" ? "MEDV" : d.label, kHousingThreshold);
    if (!accepts_missing(algorithm) && dataset.has_missing()) dataset = mean_impute(dataset);
  } else {
    CsvOptions csv;
    csv.label_column = d.label;
    csv.missing_tokens = d.missing_tokens;
    dataset = load_csv(d.path, csv);
    if (d.preset == "cancer") dataset = remove_rows_missing(dataset, "Bare Nuclei");
  }
  if (d.impute) dataset = mean_impute(dataset);
  return dataset;
}

void finish_manifest(RunManifest& m, const std::vector<fs::path>& files,
                     const std::string& explicit_path) {
  m.version = CARTELC_VERSION;
  for (const fs::path& f : files) m.outputs.push_back(f.string());
  for (const fs::path& f : files) m.write(f.string() + ".manifest.json");
  if (!explicit_path.empty()) m.write(explicit_path);
}

int cmd_train(const DataOptions& data, const TreeOptions& opt, const std::string& out,
              const Common& common) {
  const InductionConfig config{parse_criterion(opt.criterion), opt.r, opt.max_depth,
                               parse_algorithm(opt.algorithm)};
  const Dataset dataset = load_dataset(data, config.algorithm);
  const Tree tree = fit(config, dataset, {common.workers});

  const fs::path tree_path = resolve_output(out, "tree.json");
  write_file(tree_path, serialize(tree) + "\n");
  std::cout << "training_accuracy=" << format_real(accuracy(tree, dataset.features, dataset.labels))
            << "\ntree_size=" << tree_size(tree) << "\ntree_depth=" << tree_depth(tree) << "\n";

  RunManifest m;
  m.command = "train";
  record_data(m, data);
  m.flags["algorithm"] = opt.algorithm;
  m.flags["criterion"] = opt.criterion;
  m.flags["r"] = opt.r;
  m.flags["max_depth"] = opt.max_depth;
  finish_manifest(m, {tree_path}, common.manifest);
  return 0;
}

int cmd_predict(DataOptions data, bool labelled, const std::string& tree_path,
                const std::string& out, const Common& common) {
  const Tree tree = deserialize(read_file(tree_path));
  Eigen::MatrixXd features;
  std::vector<std::string> truth;
  if (labelled) {
    const Dataset dataset = load_dataset(data, Algorithm::CartElc);
    features = dataset.features;
    for (int y : dataset.labels) truth.push_back(dataset.class_names[y]);
  } else {
    features = load_feature_csv(data.path, data.missing_tokens).features;
    if (data.impute) {
      Dataset d;
      d.features = features;
      d.labels.assign(features.rows(), 0);
      d.class_names = {"_"};
      features = mean_impute(d).features;
    }
  }
  if (features.cols() != tree.m) {
    throw ConfigError("tree expects " + std::to_string(tree.m) + " features, data has " +
                      std::to_string(features.cols()));
  }

  const std::vector<int> pred = predict(tree, features);
  std::string csv = "prediction\n";
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    csv += tree.classes[pred[i]] + "\n";
    if (labelled && tree.classes[pred[i]] == truth[i]) ++correct;
  }
  std::vector<fs::path> files;
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
    files.push_back(out);
  }
  if (labelled) {
    std::cerr << "accuracy=" << format_real(static_cast<double>(correct) / pred.size()) << "\n";
  }

  RunManifest m;
  m.command = "predict";
  if (labelled) {
    record_data(m, data);
  } else {
    m.flags["data"] = data.path;
    m.flags["missing"] = data.missing_tokens;
    m.flags["impute"] = data.impute;
    m.add_input("data", data.path);
  }
  m.flags["tree"] = tree_path;
  m.add_input("tree", tree_path);
  finish_manifest(m, files, common.manifest);
  return 0;
}

int cmd_cv(const DataOptions& data, const CvOptions& opt, const Common& common) {
  const Algorithm algorithm = parse_algorithm(opt.algorithm);
  const CriterionKind criterion = parse_criterion(opt.criterion);
  const Dataset dataset = load_dataset(data, algorithm);
  const CVConfig cv{opt.folds, opt.repeats, opt.seed, opt.grid_r, opt.grid_depth};
  const CVReport report = grid_search(dataset, cv, criterion, algorithm, {common.workers});

  const fs::path json_path = resolve_output(opt.out_json, "cv_report.json");
  const fs::path csv_path = resolve_output(opt.out_csv, "cv_report.csv");
  write_file(json_path, report_json(report));
  write_file(csv_path, report_csv(report));
  const CVCell& best = report.selected_cell();
  std::cout << "rows=" << dataset.rows() << "\nselected_r=" << best.r
            << "\nselected_depth=" << best.depth
            << "\nmean_accuracy=" << format_real(best.mean_accuracy)
            << "\nstd_accuracy=" << format_real(best.std_accuracy)
            << "\nmean_tree_size=" << format_real(best.mean_tree_size)
            << "\nstd_tree_size=" << format_real(best.std_tree_size) << "\n";

  RunManifest m;
  m.command = "cv";
  record_data(m, data);
  m.flags["algorithm"] = opt.algorithm;
  m.flags["criterion"] = opt.criterion;
  m.flags["grid_r"] = opt.grid_r;
  m.flags["grid_depth"] = opt.grid_depth;
  m.flags["folds"] = opt.folds;
  m.flags["repeats"] = opt.repeats;
  m.seed = opt.seed;
  finish_manifest(m, {json_path, csv_path}, common.manifest);
  return 0;
}

struct Summary {
  double mean = 0.0;
  double std = 0.0;
  int n = 0;
};

Summary parse_triple(const std::string& text, const char* flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
  const std::string hint = std::string(flag) + " expects 'mean,std,n', got '" + text + "'";
  if (parts.size() != 3) throw ConfigError(hint);
  Summary s;
  try {
    std::size_t used = 0;
    s.mean = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw ConfigError(hint);
    s.std = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw ConfigError(hint);
    s.n = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw ConfigError(hint);
  } catch (const std::logic_error&) {
    throw ConfigError(hint);
  }
  return s;
}

Summary summary_of(const std::string& path) {
  const CVReport report = parse_report_json(read_file(path));
  const CVCell& c = report.selected_cell();
  return {c.mean_accuracy, c.std_accuracy, static_cast<int>(c.accuracies.size())};
}

int cmd_compare(const CompareOptions& opt, const Common& common) {
  RunManifest m;
  m.command = "compare";
  Summary a, b;
  if (!opt.a.empty()) {
    a = parse_triple(opt.a, "--a");
    m.flags["a"] = opt.a;
  } else {
    a = summary_of(opt.report_a);
    m.flags["report_a"] = opt.report_a;
    m.add_input("report-a", opt.report_a);
  }
  if (!opt.b.empty()) {
    b = parse_triple(opt.b, "--b");
    m.flags["b"] = opt.b;
  } else {
    b = summary_of(opt.report_b);
    m.flags["report_b"] = opt.report_b;
    m.add_input("report-b", opt.report_b);
  }
  m.flags["format"] = opt.format;

  const WelchTest w = welch_t_test(a.mean, a.std, a.n, b.mean, b.std, b.n);
  const double d = cohens_d(a.mean, a.std, b.mean, b.std);
  char buf[256];
  if (opt.format == "csv") {
    std::snprintf(buf, sizeof buf, "t,df,p_value,cohens_d\n%.10g,%.10g,%.10g,%.10g\n", w.t, w.df,
                  w.p_value, d);
  } else {
    // Zero-valued effects print unsigned.
    std::snprintf(buf, sizeof buf, "t=%.4f df=%.4f p_value=%.3f cohens_d=%.3f\n", w.t, w.df,
                  w.p_value, d == 0.0 ? 0.0 : d);
  }
  std::cout << buf;
  finish_manifest(m, {}, common.manifest);
  return 0;
}

std::vector<std::int64_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::int64_t> values;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    std::size_t used = 0;
    try {
      values.push_back(std::stoll(part, &used));
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || values.back() < 1) {
      throw ConfigError(std::string(flag) + ": '" + part + "' is not a positive integer");
    }
  }
  if (values.empty()) throw ConfigError(std::string(flag) + " must not be empty");
  return values;
}

int cmd_opcount(const OpcountOptions& opt, const Common& common) {
  const auto n_values = parse_list(opt.n_list, "--n-list");
  const auto r_values = parse_list(opt.r_list, "--r-list");
  const std::string text = format_table(table1(n_values, r_values), opt.format == "csv");
  std::vector<fs::path> files;
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    write_file(opt.out, text);
    files.push_back(opt.out);
  }
  RunManifest m;
  m.command = "opcount";
  m.flags["n_list"] = opt.n_list;
  m.flags["r_list"] = opt.r_list;
  m.flags["format"] = opt.format;
  finish_manifest(m, files, common.manifest);
  return 0;
}

void add_common(CLI::App& cmd, Common& common) {
  cmd.add_option("--workers", common.workers, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  cmd.add_option("--manifest", common.manifest, "Also write the run manifest to this path");
}

int run(int argc, char** argv) {
  CLI::App app{"CART-ELC oblique decision trees"};
  app.set_version_flag("--version", CARTELC_VERSION);
  app.require_subcommand(1);
  Common common;

  DataOptions train_data;
  TreeOptions tree;
  std::string train_out;
  auto* train = app.add_subcommand("train", "Fit a tree and write it as JSON");
  add_data_options(*train, train_data, false);
  train->add_option("--algorithm", tree.algorithm)
      ->check(CLI::IsMember({"cart-elc", "cart-axis", "hhcart-d", "hhcart-a"}))
      ->capture_default_str();
  train->add_option("--criterion", tree.criterion)
      ->check(CLI::IsMember({"twoing", "gini", "igain"}))
      ->capture_default_str();
  train->add_option("--r", tree.r, "Hyperplane order (cart-elc)")->capture_default_str();
  train->add_option("--max-depth", tree.max_depth)->capture_default_str();
  train->add_option("--out", train_out, "Tree JSON path (default $CARTELC_OUT_DIR/tree.json)");
  add_common(*train, common);

  DataOptions predict_data;
  predict_data.label.clear();
  std::string tree_path, predict_out;
  auto* pred = app.add_subcommand("predict", "Apply a tree to a CSV file");
  add_data_options(*pred, predict_data, true);
  pred->add_option("--tree", tree_path, "Tree JSON")->required()->check(CLI::ExistingFile);
  pred->add_option("--out", predict_out, "Predictions CSV path (default stdout)");
  add_common(*pred, common);

  DataOptions cv_data;
  CvOptions cv;
  auto* cvc = app.add_subcommand("cv", "Repeated k-fold grid search over (r, depth)");
  add_data_options(*cvc, cv_data, false);
  cvc->add_option("--algorithm", cv.algorithm)
      ->check(CLI::IsMember({"cart-elc", "cart-axis", "hhcart-d", "hhcart-a"}))
      ->capture_default_str();
  cvc->add_option("--criterion", cv.criterion)
      ->check(CLI::IsMember({"twoing", "gini", "igain"}))
      ->capture_default_str();
  cvc->add_option("--grid-r", cv.grid_r)->capture_default_str();
  cvc->add_option("--grid-depth", cv.grid_depth)->capture_default_str();
  cvc->add_option("--folds", cv.folds)->capture_default_str();
  cvc->add_option("--repeats", cv.repeats)->capture_default_str();
  cvc->add_option("--seed", cv.seed)->capture_default_str();
  cvc->add_option("--out-json", cv.out_json, "Report JSON (default $CARTELC_OUT_DIR/cv_report.json)");
  cvc->add_option("--out-csv", cv.out_csv, "Grid CSV (default $CARTELC_OUT_DIR/cv_report.csv)");
  add_common(*cvc, common);

  CompareOptions cmp;
  auto* compare = app.add_subcommand("compare", "Welch t-test and Cohen's d for two results");
  auto* a = compare->add_option("--a", cmp.a, "First group as mean,std,n");
  auto* ra = compare->add_option("--report-a", cmp.report_a, "First group from a cv report")
                 ->check(CLI::ExistingFile);
  auto* b = compare->add_option("--b", cmp.b, "Second group as mean,std,n");
  auto* rb = compare->add_option("--report-b", cmp.report_b, "Second group from a cv report")
                 ->check(CLI::ExistingFile);
  a->excludes(ra);
  b->excludes(rb);
  compare->add_option("--format", cmp.format)
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  add_common(*compare, common);

  OpcountOptions ops;
  auto* opcount = app.add_subcommand("opcount", "Operation counts for one CART-ELC split");
  opcount->add_option("--n-list", ops.n_list, "Comma-separated sample counts")
      ->capture_default_str();
  opcount->add_option("--r-list", ops.r_list, "Comma-separated orders (m = r)")
      ->capture_default_str();
  opcount->add_option("--format", ops.format)
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  opcount->add_option("--out", ops.out, "Write the grid here instead of stdout");
  add_common(*opcount, common);

  try {
    app.parse(argc, argv);
    if (compare->parsed() && ((cmp.a.empty() && cmp.report_a.empty()) ||
                              (cmp.b.empty() && cmp.report_b.empty()))) {
      throw CLI::RequiredError("compare needs --a or --report-a, and --b or --report-b");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (train->parsed()) return cmd_train(train_data, tree, train_out, common);
  if (pred->parsed()) {
    const bool labelled = !predict_data.label.empty() || predict_data.preset != "none";
    if (predict_data.label.empty()) predict_data.label = "last";
    return cmd_predict(predict_data, labelled, tree_path, predict_out, common);
  }
  if (cvc->parsed()) return cmd_cv(cv_data, cv, common);
  if (compare->parsed()) return cmd_compare(cmp, common);
  return cmd_opcount(ops, common);
}

}  // namespace
}  // namespace cartelc::cli

int main(int argc, char** argv) {
  try {
    return cartelc::cli::run(argc, argv);
  } catch (const cartelc::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cartelc::cli::kExitRuntime;
  } catch (const cartelc::Error& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return cartelc::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cartelc::cli::kExitRuntime;
  }
}
