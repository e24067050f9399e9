// Copyright 2026 The streamsampling Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "streamsampling/error.hpp"
#include "streamsampling/rng.hpp"

// Small exact draws shared by the reservoir merge paths and the skip-based
// with-replacement samplers.
namespace streamsampling::detail {

inline void check_capacity(std::size_t capacity) {
  if (capacity == 0) throw Error(Errc::invalid_capacity, "sample size must be at least 1");
}

inline void check_weight(double w) {
  if (!(w > 0.0) || !std::isfinite(w))
    throw Error(Errc::invalid_weight, "weight must be positive and finite");
}

// Binomial(trials, p) conditioned on a result >= 1, by inversion on the
// conditional pmf. One variate; O(result) work.
inline std::size_t conditioned_binomial(Rng& rng, std::size_t trials, double p) {
  if (p >= 1.0 || trials == 1) return trials;
  const double q = 1.0 - p;
  const double log_q = std::log1p(-p);
  // P(X >= 1), kept accurate when p is tiny.
  const double at_least_one = -std::expm1(static_cast<double>(trials) * log_q);
  double pmf = static_cast<double>(trials) * p *
               std::exp(static_cast<double>(trials - 1) * log_q) / at_least_one;
  double cdf = pmf;
  const double u = rng.uniform01();
  std::size_t j = 1;
  const double ratio = p / q;
  while (u > cdf && j < trials) {
    pmf *= static_cast<double>(trials - j) / static_cast<double>(j + 1) * ratio;
    cdf += pmf;
    ++j;
  }
  return j;
}

// Appends `count` distinct indices drawn uniformly from [0, n) (Floyd).
inline void sample_distinct(Rng& rng, std::size_t n, std::size_t count,
                            std::vector<std::size_t>& out) {
  const std::size_t first = out.size();
  for (std::size_t j = n - count; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.uniform_index(j + 1));
    const auto begin = out.begin() + static_cast<std::ptrdiff_t>(first);
    if (std::find(begin, out.end(), t) == out.end())
      out.push_back(t);
    else
      out.push_back(j);
  }
}

// Number of successes when drawing `draws` balls without replacement from an
// urn of `total` balls holding `successes` marked ones.
inline std::uint64_t hypergeometric(Rng& rng, std::uint64_t total, std::uint64_t successes,
                                    std::uint64_t draws) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    if (rng.uniform_index(total - i) < successes - hits) ++hits;
  }
  return hits;
}

inline double standard_normal(Rng& rng) {
  const double u1 = rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang; shape >= 1 only, which is all the callers need.
inline double gamma_variate(Rng& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

inline double beta_variate(Rng& rng, double a, double b) {
  const double x = gamma_variate(rng, a);
  const double y = gamma_variate(rng, b);
  return x / (x + y);
}

// Picks an index with probability weights[i] / sum(weights).
inline std::size_t pick_proportional(Rng& rng, const std::vector<double>& cumulative) {
  const double target = rng.uniform01() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

// Converts a double count to uint64, saturating.
inline std::uint64_t saturating_u64(double x) {
  if (!(x < 1.8e19)) return UINT64_MAX;
  return static_cast<std::uint64_t>(x);
}

}  // namespace streamsampling::detail
