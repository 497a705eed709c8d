/*
 * Copyright 2026 The PhishBench Authors.
 *
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

#pragma once

#include <cstddef>
#include <span>

namespace phishbench {

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;  // Welch-Satterthwaite
  double p_value = 1.0;             // two-sided
};

// Regularized incomplete beta I_x(a, b) by the continued fraction evaluated
// with the modified Lentz method; uses the symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
// where the fraction converges slowly.
double RegularizedIncompleteBeta(double a, double b, double x);

// Student-t distribution function P(T <= t) with `df` degrees of freedom.
double StudentTCdf(double t, double df);

// Welch's unequal-variance t-test, two-sided. Each sample needs >= 2 values
// and the combined variance must be nonzero.
TTestResult WelchTTest(std::span<const double> a, std::span<const double> b);

// Same test from summary statistics (sample standard deviations).
TTestResult WelchTTestFromSummary(double mean_a, double sd_a, std::size_t n_a, double mean_b,
                                  double sd_b, std::size_t n_b);

}  // namespace phishbench
