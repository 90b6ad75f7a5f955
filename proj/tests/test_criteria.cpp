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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "cartelc/criteria.hpp"
#include "cartelc/errors.hpp"

using namespace cartelc;
using Counts = std::vector<std::int64_t>;

TEST_CASE("twoing values") {
  CHECK(twoing(Counts{2, 0}, Counts{0, 2}) == doctest::Approx(0.25));
  CHECK(twoing(Counts{1, 1}, Counts{1, 1}) == doctest::Approx(0.0));
  CHECK(twoing(Counts{3, 1}, Counts{1, 3}) == doctest::Approx(0.0625));
  CHECK(twoing(Counts{4, 0}, Counts{0, 0}) == 0.0);
}

TEST_CASE("gini values") {
  CHECK(gini(Counts{2, 0}, Counts{0, 2}) == doctest::Approx(0.0));
  CHECK(gini(Counts{1, 1}, Counts{1, 1}) == doctest::Approx(0.5));
  CHECK(gini(Counts{4, 0}, Counts{0, 0}) == 0.0);
}

TEST_CASE("info gain values") {
  CHECK(info_gain(Counts{2, 0}, Counts{0, 2}) == doctest::Approx(1.0));
  CHECK(info_gain(Counts{1, 1}, Counts{1, 1}) == doctest::Approx(0.0));
  CHECK(info_gain(Counts{2, 0}, Counts{1, 1}) == doctest::Approx(0.31128).epsilon(1e-4));
  CHECK(entropy(Counts{3, 1}) == doctest::Approx(0.8112781245));
  CHECK(entropy(Counts{0, 0}) == 0.0);
}

TEST_CASE("PartitionCounts overloads agree with spans") {
  PartitionCounts pc{ClassCounts(3), ClassCounts(3)};
  pc.left.add(0, 3);
  pc.left.add(2, 1);
  pc.right.add(1, 2);
  for (auto kind : {CriterionKind::Twoing, CriterionKind::Gini, CriterionKind::InfoGain}) {
    CHECK(score(kind, pc) == score(kind, pc.left.counts, pc.right.counts));
  }
  CHECK(twoing(pc) == twoing(pc.left.counts, pc.right.counts));
  CHECK(gini(pc) == gini(pc.left.counts, pc.right.counts));
  CHECK(info_gain(pc) == info_gain(pc.left.counts, pc.right.counts));
}

TEST_CASE("is_better and worst_score") {
  CHECK_FALSE(is_better(CriterionKind::Twoing, 0.2, 0.2));
  CHECK(is_better(CriterionKind::Gini, 0.1, 0.3));
  CHECK(is_better(CriterionKind::InfoGain, 0.9, 0.5));
  CHECK(worst_score(CriterionKind::Twoing) == -std::numeric_limits<double>::infinity());
  CHECK(worst_score(CriterionKind::InfoGain) == -std::numeric_limits<double>::infinity());
  CHECK(worst_score(CriterionKind::Gini) == std::numeric_limits<double>::infinity());
  for (auto kind : {CriterionKind::Twoing, CriterionKind::Gini, CriterionKind::InfoGain}) {
    CHECK(is_better(kind, score(kind, Counts{1, 1}, Counts{1, 1}), worst_score(kind)));
    CHECK(is_better(kind, score(kind, Counts{0, 0}, Counts{5, 1}), worst_score(kind)));
  }
}

TEST_CASE("criterion names") {
  CHECK(parse_criterion("twoing") == CriterionKind::Twoing);
  CHECK(parse_criterion("gini") == CriterionKind::Gini);
  CHECK(parse_criterion("igain") == CriterionKind::InfoGain);
  CHECK_THROWS_AS(parse_criterion("entropy"), ConfigError);
  for (auto kind : {CriterionKind::Twoing, CriterionKind::Gini, CriterionKind::InfoGain}) {
    CHECK(parse_criterion(to_string(kind)) == kind);
  }
}

TEST_CASE("criterion properties on random partitions") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> classes_dist(1, 6);
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = classes_dist(rng);
    std::uniform_int_distribution<int> side_total(0, 100);
    Counts left(k, 0), right(k, 0);
    const int nl = side_total(rng), nr = side_total(rng);
    std::uniform_int_distribution<int> cls(0, k - 1);
    for (int i = 0; i < nl; ++i) ++left[cls(rng)];
    for (int i = 0; i < nr; ++i) ++right[cls(rng)];
    if (nl + nr == 0) ++left[0];

    Counts parent(k);
    for (int j = 0; j < k; ++j) parent[j] = left[j] + right[j];
    const double t = twoing(left, right);
    const double g = gini(left, right);
    const double ig = info_gain(left, right);
    const double h = entropy(parent);

    CHECK(t >= 0.0);
    CHECK(t <= 0.25 + 1e-15);
    CHECK(g >= 0.0);
    if (nl > 0 && nr > 0) CHECK(g <= 1.0 - 1.0 / k + 1e-12);
    CHECK(ig >= -1e-12);
    CHECK(ig <= h + 1e-12);

    CHECK(twoing(right, left) == doctest::Approx(t).epsilon(1e-12));
    CHECK(gini(right, left) == doctest::Approx(g).epsilon(1e-12));
    CHECK(info_gain(right, left) == doctest::Approx(ig).epsilon(1e-12));

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Counts pl(k), pr(k);
    for (int j = 0; j < k; ++j) {
      pl[perm[j]] = left[j];
      pr[perm[j]] = right[j];
    }
    CHECK(twoing(pl, pr) == doctest::Approx(t).epsilon(1e-12));
    CHECK(gini(pl, pr) == doctest::Approx(g).epsilon(1e-12));
    CHECK(info_gain(pl, pr) == doctest::Approx(ig).epsilon(1e-12));
  }
}

TEST_CASE("pure sides give zero Gini and full information gain") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 5);
    Counts left(k, 0), right(k, 0);
    const int a = static_cast<int>(rng() % k);
    const int b = static_cast<int>(rng() % k);
    left[a] = 1 + static_cast<int>(rng() % 50);
    right[b] = 1 + static_cast<int>(rng() % 50);
    Counts parent(k);
    for (int j = 0; j < k; ++j) parent[j] = left[j] + right[j];
    CHECK(gini(left, right) == doctest::Approx(0.0));
    CHECK(info_gain(left, right) == doctest::Approx(entropy(parent)).epsilon(1e-12));
  }
}
