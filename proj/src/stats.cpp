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

#include "phishbench/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "phishbench/error.hpp"

namespace phishbench {

namespace {

double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  Fail(ErrorKind::kRuntime, "incomplete beta continued fraction did not converge");
}

struct Summary {
  double mean;
  double variance;
  std::size_t n;
};

Summary Summarize(std::span<const double> s, const char* name) {
  Require(s.size() >= 2, ErrorKind::kValidation,
          std::string("t-test sample ") + name + " needs at least 2 values");
  double mean = 0.0;
  for (const double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  double ss = 0.0;
  for (const double v : s) ss += (v - mean) * (v - mean);
  return {mean, ss / static_cast<double>(s.size() - 1), s.size()};
}

TTestResult Welch(const Summary& a, const Summary& b) {
  const double va = a.variance / static_cast<double>(a.n);
  const double vb = b.variance / static_cast<double>(b.n);
  Require(va + vb > 0.0, ErrorKind::kValidation,
          "t-test samples a and b both have zero variance");
  TTestResult r;
  r.t_statistic = (a.mean - b.mean) / std::sqrt(va + vb);
  r.degrees_of_freedom = (va + vb) * (va + vb) /
                         (va * va / static_cast<double>(a.n - 1) +
                          vb * vb / static_cast<double>(b.n - 1));
  const double t2 = r.t_statistic * r.t_statistic;
  r.p_value = RegularizedIncompleteBeta(r.degrees_of_freedom / 2.0, 0.5,
                                        r.degrees_of_freedom / (r.degrees_of_freedom + t2));
  return r;
}

}  // namespace

double RegularizedIncompleteBeta(double a, double b, double x) {
  Require(a > 0.0 && b > 0.0, ErrorKind::kValidation, "incomplete beta needs a, b > 0");
  Require(x >= 0.0 && x <= 1.0, ErrorKind::kValidation, "incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * BetaContinuedFraction(a, b, x) / a;
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double StudentTCdf(double t, double df) {
  Require(df > 0.0, ErrorKind::kValidation, "Student-t needs df > 0");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * RegularizedIncompleteBeta(df / 2.0, 0.5, df / (df + t * t));
  return t > 0 ? 1.0 - tail : tail;
}

TTestResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  return Welch(Summarize(a, "a"), Summarize(b, "b"));
}

TTestResult WelchTTestFromSummary(double mean_a, double sd_a, std::size_t n_a, double mean_b,
                                  double sd_b, std::size_t n_b) {
  Require(n_a >= 2, ErrorKind::kValidation, "t-test sample a needs at least 2 values");
  Require(n_b >= 2, ErrorKind::kValidation, "t-test sample b needs at least 2 values");
  Require(sd_a >= 0.0 && sd_b >= 0.0, ErrorKind::kValidation, "standard deviations must be >= 0");
  return Welch({mean_a, sd_a * sd_a, n_a}, {mean_b, sd_b * sd_b, n_b});
}

}  // namespace phishbench
