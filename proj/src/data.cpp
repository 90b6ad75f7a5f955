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

#include "cartelc/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cartelc/errors.hpp"

namespace cartelc {
namespace {

using Row = std::vector<std::string>;

struct RawTable {
  Row header;
  std::vector<Row> rows;
  std::vector<int> line_numbers;  // 1-based source line of each row
};

// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF endings.
RawTable read_table(std::string_view text) {
  RawTable table;
  Row row;
  std::string cell;
  bool in_quotes = false;
  bool row_has_content = false;
  int line = 1;
  int row_start_line = 1;

  auto end_row = [&] {
    row.push_back(std::move(cell));
    cell.clear();
    bool blank = row.size() == 1 && row[0].empty() && !row_has_content;
    if (!blank) {
      if (table.header.empty()) {
        table.header = std::move(row);
      } else {
        table.rows.push_back(std::move(row));
        table.line_numbers.push_back(row_start_line);
      }
    }
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(cell));
        cell.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row_start_line = line;
        break;
      default:
        cell.push_back(c);
        break;
    }
  }
  if (in_quotes) throw FormatError("unterminated quoted field starting on line " +
                                   std::to_string(row_start_line));
  if (!cell.empty() || !row.empty() || row_has_content) end_row();

  if (table.header.empty()) throw FormatError("missing header row");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size()) {
      throw FormatError("line " + std::to_string(table.line_numbers[r]) + ": expected " +
                        std::to_string(table.header.size()) + " cells, found " +
                        std::to_string(table.rows[r].size()));
    }
  }
  return table;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_cell(const std::string& raw, const std::vector<std::string>& missing_tokens,
                  int line, const std::string& column) {
  std::string_view s = trim(raw);
  if (std::find(missing_tokens.begin(), missing_tokens.end(), s) != missing_tokens.end()) {
    return kMissing;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(value)) {
    throw FormatError("line " + std::to_string(line) + ", column '" + column +
                      "': cannot parse '" + raw + "' as a number");
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int find_column(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError("unknown column '" + std::string(name) + "'");
  return static_cast<int>(it - names.begin());
}

}  // namespace

ClassCounts ClassCounts::from_labels(std::span<const int> labels, int num_classes) {
  ClassCounts c(num_classes);
  for (int y : labels) c.add(y);
  return c;
}

int ClassCounts::majority() const {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

int FeatureTable::column_index(std::string_view name) const {
  return find_column(feature_names, name);
}

int Dataset::column_index(std::string_view name) const {
  return find_column(feature_names, name);
}

bool Dataset::has_missing() const { return features.array().isNaN().any(); }

Dataset Dataset::subset(std::span<const int> row_indices) const {
  Dataset out;
  out.features = features(std::vector<int>(row_indices.begin(), row_indices.end()),
                          Eigen::all);
  out.labels.reserve(row_indices.size());
  for (int i : row_indices) out.labels.push_back(labels[i]);
  out.class_names = class_names;
  out.feature_names = feature_names;
  return out;
}

void Dataset::validate() const {
  if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
    throw ConfigError("label count does not match feature rows");
  }
  if (static_cast<Eigen::Index>(feature_names.size()) != features.cols()) {
    throw ConfigError("feature name count does not match feature columns");
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes()) throw ConfigError("label id out of range");
  }
}

Dataset parse_csv(std::string_view text, const CsvOptions& options) {
  RawTable raw = read_table(text);
  const int width = static_cast<int>(raw.header.size());
  int label_col = options.label_column == "last" ? width - 1
                                                 : find_column(raw.header, options.label_column);
  if (width < 2) throw ConfigError("need at least one feature column besides the label");
  if (raw.rows.empty()) throw EmptyDatasetError("dataset has no data rows");

  Dataset d;
  for (int c = 0; c < width; ++c) {
    if (c != label_col) d.feature_names.push_back(raw.header[c]);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(raw.rows.size());
  d.features.resize(n, width - 1);
  d.labels.reserve(n);
  std::unordered_map<std::string, int> class_ids;
  for (Eigen::Index r = 0; r < n; ++r) {
    const Row& row = raw.rows[r];
    int out_col = 0;
    for (int c = 0; c < width; ++c) {
      if (c == label_col) continue;
      d.features(r, out_col++) =
          parse_cell(row[c], options.missing_tokens, raw.line_numbers[r], raw.header[c]);
    }
    std::string label(trim(row[label_col]));
    auto [it, inserted] = class_ids.try_emplace(label, static_cast<int>(d.class_names.size()));
    if (inserted) d.class_names.push_back(label);
    d.labels.push_back(it->second);
  }
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  return parse_csv(read_file(path), options);
}

FeatureTable parse_feature_csv(std::string_view text,
                               const std::vector<std::string>& missing_tokens) {
  RawTable raw = read_table(text);
  FeatureTable t;
  t.feature_names = raw.header;
  t.features.resize(static_cast<Eigen::Index>(raw.rows.size()),
                    static_cast<Eigen::Index>(raw.header.size()));
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    for (std::size_t c = 0; c < raw.header.size(); ++c) {
      t.features(r, c) =
          parse_cell(raw.rows[r][c], missing_tokens, raw.line_numbers[r], raw.header[c]);
    }
  }
  return t;
}

FeatureTable load_feature_csv(const std::filesystem::path& path,
                              const std::vector<std::string>& missing_tokens) {
  return parse_feature_csv(read_file(path), missing_tokens);
}

std::vector<int> discretize_label(std::span<const double> values, double threshold) {
  std::vector<int> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (is_missing(values[i])) {
      throw PreprocessingError("label value missing at row " + std::to_string(i));
    }
    out.push_back(values[i] < threshold ? 0 : 1);
  }
  return out;
}

Dataset label_by_threshold(const FeatureTable& table, std::string_view column,
                           double threshold) {
  const int col = table.column_index(column);
  if (table.rows() == 0) throw EmptyDatasetError("dataset has no data rows");
  Eigen::VectorXd values = table.features.col(col);
  Dataset d;
  d.labels = discretize_label(std::span<const double>(values.data(), values.size()), threshold);
  d.class_names = {"one", "two"};
  std::vector<int> keep;
  for (int c = 0; c < table.cols(); ++c) {
    if (c == col) continue;
    keep.push_back(c);
    d.feature_names.push_back(table.feature_names[c]);
  }
  d.features = table.features(Eigen::all, keep);
  return d;
}

Dataset remove_rows_missing(const Dataset& dataset, std::string_view feature) {
  const int col = dataset.column_index(feature);
  std::vector<int> keep;
  for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
    if (!is_missing(dataset.features(r, col))) keep.push_back(static_cast<int>(r));
  }
  if (keep.empty()) {
    throw EmptyDatasetError("every row is missing '" + std::string(feature) + "'");
  }
  return dataset.subset(keep);
}

Dataset mean_impute(const Dataset& dataset) {
  Dataset out = dataset;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    auto column = out.features.col(c);
    double sum = 0.0;
    Eigen::Index present = 0;
    for (Eigen::Index r = 0; r < column.size(); ++r) {
      if (!is_missing(column[r])) {
        sum += column[r];
        ++present;
      }
    }
    if (present == column.size()) continue;
    if (present == 0) {
      throw PreprocessingError("column '" + out.feature_names[c] + "' has no present values");
    }
    const double mean = sum / static_cast<double>(present);
    for (Eigen::Index r = 0; r < column.size(); ++r) {
      if (is_missing(column[r])) column[r] = mean;
    }
  }
  return out;
}

}  // namespace cartelc
