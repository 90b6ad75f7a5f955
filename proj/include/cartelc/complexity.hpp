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

#ifndef CARTELC_COMPLEXITY_HPP_
#define CARTELC_COMPLEXITY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cartelc {

using BigCount = boost::multiprecision::cpp_int;

struct OpCountQuery {
  std::int64_t n = 1;  // samples
  std::int64_t m = 1;  // features
  std::int64_t r = 1;  // hyperplane order
};

BigCount binomial(std::int64_t n, std::int64_t k);

// C(n,r) * C(m,r) * r * (r^2 + n): cost of finding and executing one split
// with unit constants. Throws DomainError unless 1 <= r <= min(n, m).
BigCount op_count(const OpCountQuery& query);

// "1.01e+04"-style rendering with round-half-even on the exact value.
std::string to_scientific(const BigCount& value, int significant_digits = 3);

struct OpCountTable {
  std::vector<std::int64_t> r_values;  // rows
  std::vector<std::int64_t> n_values;  // columns
  // cells[i][j] for (r_values[i], n_values[j]); empty when outside the domain.
  std::vector<std::vector<std::optional<BigCount>>> cells;
};

// Evaluates op_count with m = r for every (r, n) pair.
OpCountTable table1(std::span<const std::int64_t> n_values,
                    std::span<const std::int64_t> r_values);

// Aligned text grid or CSV; out-of-domain cells read "domain-error".
std::string format_table(const OpCountTable& table, bool csv);

}  // namespace cartelc

#endif  // CARTELC_COMPLEXITY_HPP_
