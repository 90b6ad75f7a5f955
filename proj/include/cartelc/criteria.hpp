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

#ifndef CARTELC_CRITERIA_HPP_
#define CARTELC_CRITERIA_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "cartelc/data.hpp"

namespace cartelc {

// Per-class counts on each side of a candidate split. Both sides index the
// same class set.
struct PartitionCounts {
  ClassCounts left;
  ClassCounts right;

  bool operator==(const PartitionCounts&) const = default;
};

// Twoing and InfoGain are maximised, Gini is minimised.
enum class CriterionKind { Twoing, Gini, InfoGain };

using CountSpan = std::span<const std::int64_t>;

// (pL pR / 4) (sum_j |pLj - pRj|)^2. An empty side scores 0.
double twoing(CountSpan left, CountSpan right);
// pL (1 - sum_j pLj^2) + pR (1 - sum_j pRj^2).
double gini(CountSpan left, CountSpan right);
// H(S) - (|SL|/|S| H(SL) + |SR|/|S| H(SR)), entropies in bits.
double info_gain(CountSpan left, CountSpan right);

double twoing(const PartitionCounts& counts);
double gini(const PartitionCounts& counts);
double info_gain(const PartitionCounts& counts);

double score(CriterionKind kind, CountSpan left, CountSpan right);
double score(CriterionKind kind, const PartitionCounts& counts);

// Shannon entropy in bits of a class histogram; 0 for an empty one.
double entropy(CountSpan counts);

// Strict comparison in the criterion's direction; ties favour the incumbent.
inline bool is_better(CriterionKind kind, double candidate, double incumbent) {
  return kind == CriterionKind::Gini ? candidate < incumbent : candidate > incumbent;
}

double worst_score(CriterionKind kind);

// "twoing", "gini", "igain".
CriterionKind parse_criterion(std::string_view name);
std::string_view to_string(CriterionKind kind);

}  // namespace cartelc

#endif  // CARTELC_CRITERIA_HPP_
