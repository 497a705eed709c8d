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

// Independent reference implementations shared by unit and acceptance tests.

#include <algorithm>
#include <array>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "phishbench/corpus.hpp"
#include "phishbench/features.hpp"

namespace phishbench::oracle {

// Brute-force TF-IDF over whitespace-separated ASCII words.
struct Tfidf {
  std::vector<std::string> terms;
  std::map<std::string, double> idf;

  Tfidf(const std::vector<std::vector<std::string>>& docs, std::size_t cap, std::size_t min_df) {
    std::map<std::string, std::size_t> df;
    for (const auto& d : docs) {
      std::set<std::string> seen(d.begin(), d.end());
      for (const auto& t : seen) df[t]++;
    }
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [t, c] : df) {
      if (c >= min_df) kept.push_back({t, c});
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (kept.size() > cap) kept.resize(cap);
    for (const auto& [t, c] : kept) {
      terms.push_back(t);
      idf[t] = std::log(static_cast<double>(docs.size() + 1) / static_cast<double>(c + 1)) + 1.0;
    }
    std::sort(terms.begin(), terms.end());
  }

  std::vector<double> Dense(const std::vector<std::string>& doc) const {
    std::vector<double> w(terms.size(), 0.0);
    for (const auto& t : doc) {
      const auto it = std::find(terms.begin(), terms.end(), t);
      if (it != terms.end()) w[it - terms.begin()] += idf.at(t);
    }
    double norm = 0;
    for (double x : w) norm += x * x;
    if (norm > 0) {
      for (double& x : w) x /= std::sqrt(norm);
    }
    return w;
  }
};

// Multinomial NB with Laplace smoothing recomputed from the raw vectors.
struct HandBayes {
  std::array<double, 2> log_prior;
  std::array<std::vector<double>, 2> log_theta;

  HandBayes(const std::vector<SparseVector>& x, const std::vector<Label>& y, std::size_t d, double alpha) {
    std::array<double, 2> n{0, 0};
    std::array<std::vector<double>, 2> count = {std::vector<double>(d), std::vector<double>(d)};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const int c = y[i] == Label::kPhishing ? 0 : 1;
      n[c] += 1;
      for (std::size_t j = 0; j < d; ++j) {
        for (const auto& e : x[i].entries) {
          if (e.index == j) count[c][j] += e.weight;
        }
      }
    }
    for (int c = 0; c < 2; ++c) {
      log_prior[c] = std::log(n[c] / (n[0] + n[1]));
      double sum = 0;
      for (std::size_t j = 0; j < d; ++j) sum += count[c][j] + alpha;
      for (std::size_t j = 0; j < d; ++j) log_theta[c].push_back(std::log((count[c][j] + alpha) / sum));
    }
  }

  std::array<double, 2> LogJoint(const SparseVector& v) const {
    std::array<double, 2> out = log_prior;
    for (int c = 0; c < 2; ++c) {
      for (const auto& e : v.entries) out[c] += e.weight * log_theta[c][e.index];
    }
    return out;
  }
};

// Two-sided Welch p from summary statistics, via Boost's Student-t.
inline double WelchP(double ma, double sda, double na, double mb, double sdb, double nb) {
  const double sa = sda * sda / na;
  const double sb = sdb * sdb / nb;
  const double t = (ma - mb) / std::sqrt(sa + sb);
  const double df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1) + sb * sb / (nb - 1));
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

inline double WelchP(const std::vector<double>& a, const std::vector<double>& b) {
  const auto moments = [](const std::vector<double>& s, double& mean, double& sd) {
    mean = 0;
    for (double v : s) mean += v;
    mean /= s.size();
    double var = 0;
    for (double v : s) var += (v - mean) * (v - mean);
    sd = std::sqrt(var / (s.size() - 1));
  };
  double ma, sa, mb, sb;
  moments(a, ma, sa);
  moments(b, mb, sb);
  return WelchP(ma, sa, a.size(), mb, sb, b.size());
}

}  // namespace phishbench::oracle
