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

#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <vector>

#include "phishbench/error.hpp"
#include "phishbench/rng.hpp"
#include "oracles.hpp"
#include "phishbench/stats.hpp"

namespace phishbench {
namespace {

TEST(IncompleteBeta, MatchesBoost) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.Uniform(0.05, 60.0);
    const double b = rng.Uniform(0.05, 60.0);
    const double x = rng.Uniform();
    ASSERT_NEAR(RegularizedIncompleteBeta(a, b, x), boost::math::ibeta(a, b, x), 1e-10)
        << a << " " << b << " " << x;
  }
}

TEST(StudentT, CdfMatchesBoost) {
  for (const double df : {1.0, 2.5, 10.0, 77.7}) {
    boost::math::students_t dist(df);
    for (const double t : {-8.0, -1.5, 0.0, 0.3, 2.0, 12.0}) {
      EXPECT_NEAR(StudentTCdf(t, df), boost::math::cdf(dist, t), 1e-10);
    }
  }
}

TEST(WelchTTest, MatchesReferenceOnRandomPairs) {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a(2 + rng.Below(40));
    std::vector<double> b(2 + rng.Below(40));
    const double shift = rng.Uniform(-1.0, 1.0);
    const double sa = rng.Uniform(0.01, 2.0);
    const double sb = rng.Uniform(0.01, 2.0);
    for (double& v : a) v = rng.Uniform(-1.0, 1.0) * sa;
    for (double& v : b) v = shift + rng.Uniform(-1.0, 1.0) * sb;
    const auto r = WelchTTest(a, b);
    ASSERT_NEAR(r.p_value, oracle::WelchP(a, b), 1e-6);
    ASSERT_GE(r.p_value, 0.0);
    ASSERT_LE(r.p_value, 1.0);
    const auto swapped = WelchTTest(b, a);
    ASSERT_DOUBLE_EQ(swapped.t_statistic, -r.t_statistic);
    ASSERT_DOUBLE_EQ(swapped.p_value, r.p_value);
  }
}

TEST(WelchTTest, IdenticalSamplesGiveUnitP) {
  const std::vector<double> a = {0.91, 0.95, 0.97, 0.93};
  const auto r = WelchTTest(a, a);
  EXPECT_EQ(r.t_statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(WelchTTest, SummaryStatisticsAreEquivalent) {
  const auto r = WelchTTestFromSummary(0.977, 0.016, 40, 0.978, 0.011, 40);
  EXPECT_GT(r.p_value, 0.05);
  const double sa = 0.016 * 0.016 / 40;
  const double sb = 0.011 * 0.011 / 40;
  const double t = (0.977 - 0.978) / std::sqrt(sa + sb);
  const double df = (sa + sb) * (sa + sb) / (sa * sa / 39 + sb * sb / 39);
  boost::math::students_t dist(df);
  EXPECT_NEAR(r.p_value, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 1e-6);
  EXPECT_NEAR(r.t_statistic, t, 1e-12);
  EXPECT_NEAR(r.degrees_of_freedom, df, 1e-9);
}

TEST(WelchTTest, SeparatedJitteredSamples) {
  const std::vector<double> a = {0.0, 1e-6, -1e-6, 2e-6};
  const std::vector<double> b = {1.0, 1.0 + 1e-6, 1.0 - 2e-6, 1.0 + 1e-6};
  const auto r = WelchTTest(a, b);
  EXPECT_LT(r.p_value, 0.001);
  EXPECT_NEAR(r.p_value, oracle::WelchP(a, b), 1e-6);
}

TEST(WelchTTest, DegenerateInputsNameTheSample) {
  const std::vector<double> one = {1.0};
  const std::vector<double> two = {1.0, 2.0};
  const std::vector<double> flat = {1.0, 1.0, 1.0};
  try {
    WelchTTest(one, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sample a"), std::string::npos);
  }
  try {
    WelchTTest(two, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sample b"), std::string::npos);
  }
  EXPECT_THROW(WelchTTest(flat, flat), Error);
  EXPECT_NO_THROW(WelchTTest(flat, two));
}

}  // namespace
}  // namespace phishbench
