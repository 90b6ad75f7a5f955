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

#include "cartelc/criteria.hpp"

#include <cmath>
#include <limits>

#include "cartelc/errors.hpp"

namespace cartelc {
namespace {

std::int64_t sum(CountSpan counts) {
  std::int64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

CountSpan view(const ClassCounts& c) { return CountSpan(c.counts.data(), c.counts.size()); }

}  // namespace

double twoing(CountSpan left, CountSpan right) {
  const std::int64_t nl = sum(left);
  const std::int64_t nr = sum(right);
  if (nl == 0 || nr == 0) return 0.0;
  const double n = static_cast<double>(nl + nr);
  const double pl = static_cast<double>(nl) / n;
  const double pr = static_cast<double>(nr) / n;
  double diff = 0.0;
  for (std::size_t j = 0; j < left.size(); ++j) {
    diff += std::abs(static_cast<double>(left[j]) / static_cast<double>(nl) -
                     static_cast<double>(right[j]) / static_cast<double>(nr));
  }
  return pl * pr / 4.0 * diff * diff;
}

double gini(CountSpan left, CountSpan right) {
  const std::int64_t nl = sum(left);
  const std::int64_t nr = sum(right);
  const double n = static_cast<double>(nl + nr);
  auto impurity = [](CountSpan side, std::int64_t total) {
    if (total == 0) return 0.0;
    double sq = 0.0;
    for (auto c : side) {
      const double p = static_cast<double>(c) / static_cast<double>(total);
      sq += p * p;
    }
    return 1.0 - sq;
  };
  return static_cast<double>(nl) / n * impurity(left, nl) +
         static_cast<double>(nr) / n * impurity(right, nr);
}

double entropy(CountSpan counts) {
  const std::int64_t total = sum(counts);
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double info_gain(CountSpan left, CountSpan right) {
  const std::int64_t nl = sum(left);
  const std::int64_t nr = sum(right);
  const double n = static_cast<double>(nl + nr);
  double parent = 0.0;
  for (std::size_t j = 0; j < left.size(); ++j) {
    const std::int64_t c = left[j] + right[j];
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    parent -= p * std::log2(p);
  }
  return parent - (static_cast<double>(nl) / n * entropy(left) +
                   static_cast<double>(nr) / n * entropy(right));
}

double twoing(const PartitionCounts& c) { return twoing(view(c.left), view(c.right)); }
double gini(const PartitionCounts& c) { return gini(view(c.left), view(c.right)); }
double info_gain(const PartitionCounts& c) { return info_gain(view(c.left), view(c.right)); }

double score(CriterionKind kind, CountSpan left, CountSpan right) {
  switch (kind) {
    case CriterionKind::Twoing:
      return twoing(left, right);
    case CriterionKind::Gini:
      return gini(left, right);
    case CriterionKind::InfoGain:
      return info_gain(left, right);
  }
  return 0.0;
}

double score(CriterionKind kind, const PartitionCounts& c) {
  return score(kind, view(c.left), view(c.right));
}

double worst_score(CriterionKind kind) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return kind == CriterionKind::Gini ? inf : -inf;
}

CriterionKind parse_criterion(std::string_view name) {
  if (name == "twoing") return CriterionKind::Twoing;
  if (name == "gini") return CriterionKind::Gini;
  if (name == "igain") return CriterionKind::InfoGain;
  throw ConfigError("unknown criterion '" + std::string(name) + "' (twoing, gini, igain)");
}

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::Twoing:
      return "twoing";
    case CriterionKind::Gini:
      return "gini";
    case CriterionKind::InfoGain:
      return "igain";
  }
  return "?";
}

}  // namespace cartelc
