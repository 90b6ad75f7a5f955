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

#include "cartelc/complexity.hpp"

#include <algorithm>
#include <cstdio>

#include "cartelc/errors.hpp"

namespace cartelc {

BigCount binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) throw DomainError("binomial: need 0 <= k <= n");
  k = std::min(k, n - k);
  BigCount result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigCount op_count(const OpCountQuery& q) {
  if (q.r < 1 || q.r > q.n || q.r > q.m) {
    throw DomainError("op_count: need 1 <= r <= min(n, m)");
  }
  BigCount per_plane = BigCount(q.r) * (BigCount(q.r) * q.r + q.n);
  return binomial(q.n, q.r) * binomial(q.m, q.r) * per_plane;
}

std::string to_scientific(const BigCount& value, int significant_digits) {
  if (significant_digits < 1) throw DomainError("to_scientific: need at least one digit");
  if (value < 0) return "-" + to_scientific(-value, significant_digits);
  std::string digits = value.str();
  int exponent = static_cast<int>(digits.size()) - 1;
  std::string kept = digits.substr(0, std::min<std::size_t>(digits.size(), significant_digits));
  kept.resize(significant_digits, '0');
  if (digits.size() > static_cast<std::size_t>(significant_digits)) {
    const std::string rest = digits.substr(significant_digits);
    const bool above_half = rest[0] > '5' ||
                            (rest[0] == '5' && rest.find_first_not_of('0', 1) != std::string::npos);
    const bool tie = rest[0] == '5' && !above_half;
    const bool odd = (kept.back() - '0') % 2 == 1;
    if (above_half || (tie && odd)) {
      int i = significant_digits - 1;
      while (i >= 0 && kept[i] == '9') kept[i--] = '0';
      if (i >= 0) {
        ++kept[i];
      } else {
        kept.insert(kept.begin(), '1');
        kept.pop_back();
        ++exponent;
      }
    }
  }
  std::string out(1, kept[0]);
  if (significant_digits > 1) out += "." + kept.substr(1);
  char exp_buf[16];
  std::snprintf(exp_buf, sizeof exp_buf, "e%c%02d", exponent < 0 ? '-' : '+', std::abs(exponent));
  return out + exp_buf;
}

OpCountTable table1(std::span<const std::int64_t> n_values,
                    std::span<const std::int64_t> r_values) {
  OpCountTable t;
  t.n_values.assign(n_values.begin(), n_values.end());
  t.r_values.assign(r_values.begin(), r_values.end());
  for (std::int64_t r : r_values) {
    auto& row = t.cells.emplace_back();
    for (std::int64_t n : n_values) {
      try {
        row.push_back(op_count({n, r, r}));
      } catch (const DomainError&) {
        row.push_back(std::nullopt);
      }
    }
  }
  return t;
}

std::string format_table(const OpCountTable& table, bool csv) {
  auto cell_text = [](const std::optional<BigCount>& c) {
    return c ? to_scientific(*c) : std::string("domain-error");
  };
  std::string out;
  if (csv) {
    out = "r";
    for (auto n : table.n_values) out += "," + std::to_string(n);
    out += "\n";
    for (std::size_t i = 0; i < table.r_values.size(); ++i) {
      out += std::to_string(table.r_values[i]);
      for (const auto& c : table.cells[i]) out += "," + cell_text(c);
      out += "\n";
    }
    return out;
  }
  constexpr int kWidth = 13;
  auto pad = [](std::string s, std::size_t w) {
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
  };
  out = pad("r \\ n", 6);
  for (auto n : table.n_values) out += pad(std::to_string(n), kWidth);
  out += "\n";
  for (std::size_t i = 0; i < table.r_values.size(); ++i) {
    out += pad(std::to_string(table.r_values[i]), 6);
    for (const auto& c : table.cells[i]) out += pad(cell_text(c), kWidth);
    out += "\n";
  }
  return out;
}

}  // namespace cartelc
