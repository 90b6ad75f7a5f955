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

#ifndef CARTELC_STATISTICS_HPP_
#define CARTELC_STATISTICS_HPP_

#include <span>

namespace cartelc {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation with
// relative accuracy near 1e-14.
double incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with `df` degrees of freedom (df > 0, real).
double student_t_cdf(double t, double df);

// P(|T| >= |t|).
double student_t_two_sided(double t, double df);

struct WelchTest {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

/// Welch's unequal-variance t-test from summary statistics, two-sided.
/// With both standard deviations zero the p-value is 1 for equal means and
/// 0 otherwise.
WelchTest welch_t_test(double mean_a, double std_a, int n_a, double mean_b, double std_b,
                       int n_b);

/// (mean_a - mean_b) / sqrt((std_a^2 + std_b^2) / 2). Positive when the
/// first group is larger. Throws DomainError when both stds are zero.
double cohens_d(double mean_a, double std_a, double mean_b, double std_b);

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> values);

}  // namespace cartelc

#endif  // CARTELC_STATISTICS_HPP_
