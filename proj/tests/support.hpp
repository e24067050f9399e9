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

#include <gtest/gtest.h>

#include <cstdint>
#include <numeric>
#include <vector>

#include "streamsampling/oracle.hpp"
#include "streamsampling/reservoir.hpp"
#include "streamsampling/rng.hpp"
#include "streamsampling/sequential.hpp"

namespace streamsampling::testing {

inline constexpr std::uint64_t kTrials = 100000;
inline constexpr double kAlpha = 0.001;

inline std::vector<int> iota_items(int n, int first = 0) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), first);
  return v;
}

template <class Trial>
::testing::AssertionResult matches_law(Trial&& trial, const oracle::ExactLaw& law,
                                       std::uint64_t trials = kTrials,
                                       std::uint64_t seed_base = 0) {
  const auto r = oracle::chi_square_with_reseed(trial, law, trials, kAlpha, seed_base);
  if (r.pass) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "chi2=" << r.statistic << " df=" << r.df
                                       << " critical=" << r.critical;
}

// One reservoir run over items 0..n-1 (weights[i] when weighted).
inline oracle::Outcome reservoir_trial(ReservoirMethod m, std::size_t k,
                                       const std::vector<double>& weights, std::uint64_t seed) {
  ReservoirSampler<int> s(m, k, Rng(seed));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (is_weighted(m))
      s.fit(static_cast<int>(i), weights[i]);
    else
      s.fit(static_cast<int>(i));
  }
  return s.value().items;
}

inline oracle::Outcome sequential_trial(SequentialMethod m, std::size_t k, int n,
                                        std::uint64_t seed) {
  const auto items = iota_items(n);
  auto s = make_sequential_sampler(items, m, k, static_cast<std::uint64_t>(n), Rng(seed));
  oracle::Outcome out;
  while (auto e = s.next()) out.insert(out.end(), e->multiplicity, e->item);
  return out;
}

inline oracle::Outcome weighted_sequential_trial(std::size_t k, const std::vector<double>& weights,
                                                 std::uint64_t seed) {
  const auto items = iota_items(static_cast<int>(weights.size()));
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  auto s = make_weighted_sequential_sampler(items, k, total, Rng(seed),
                                            [&](int i) { return weights[std::size_t(i)]; });
  oracle::Outcome out;
  while (auto e = s.next()) out.insert(out.end(), e->multiplicity, e->item);
  return out;
}

}  // namespace streamsampling::testing
