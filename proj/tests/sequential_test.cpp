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

#include <gtest/gtest.h>

#include <cmath>
#include <forward_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "streamsampling/sequential.hpp"
#include "support.hpp"

namespace streamsampling {
namespace {

using testing::iota_items;
using testing::matches_law;
using testing::sequential_trial;
using testing::weighted_sequential_trial;

constexpr SequentialMethod kUnweighted[] = {SequentialMethod::AlgD,
                                            SequentialMethod::AlgHiddenShuffle,
                                            SequentialMethod::AlgORDSWR};

// --- skip law -------------------------------------------------------------------

TEST(Skip, FullSelectionNeverSkips) {
  Rng rng(1);
  for (std::uint64_t n : {1u, 5u, 1000u}) {
    for (int i = 0; i < 100; ++i) EXPECT_EQ(skip_without_replacement(n, n, rng), 0u);
  }
}

TEST(Skip, OneOfTwo) {
  Rng rng(2);
  int zeros = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const auto s = skip_without_replacement(1, 2, rng);
    ASSERT_LE(s, 1u);
    zeros += s == 0;
  }
  const oracle::Counts observed{{{0}, std::uint64_t(zeros)}, {{1}, std::uint64_t(trials - zeros)}};
  EXPECT_TRUE(oracle::chi_square_test(observed, oracle::exact_law_with_replacement_uniform(2, 1),
                                      testing::kAlpha)
                  .pass);
}

// Exact skip pmf by the product formula P(S >= s) = prod_{i<s} (1 - k/(n-i)).
std::vector<double> skip_pmf(std::uint64_t k, std::uint64_t n) {
  std::vector<double> pmf;
  double survive = 1.0;
  for (std::uint64_t s = 0; s <= n - k; ++s) {
    const double next = survive * (1.0 - double(k) / double(n - s));
    pmf.push_back(survive - next);
    survive = next;
  }
  return pmf;
}

TEST(Skip, MatchesProductLawOnBothBranches) {
  // (k, n) pairs exercising sequential search (n < 13k) and Vitter's
  // rejection path (n >= 13k).
  const std::pair<std::uint64_t, std::uint64_t> cases[] = {{2, 4}, {3, 20}, {2, 40}, {5, 200}};
  for (auto [k, n] : cases) {
    const auto pmf = skip_pmf(k, n);
    oracle::ExactLaw law;
    for (std::size_t s = 0; s < pmf.size(); ++s) law.probability[{int(s)}] = pmf[s];
    EXPECT_TRUE(matches_law(
        [&](std::uint64_t seed) {
          Rng rng(seed);
          const auto s = skip_without_replacement(k, n, rng);
          EXPECT_LE(s, n - k);
          return oracle::Outcome{int(s)};
        },
        law, 200000))
        << "k=" << k << " n=" << n;
  }
}

TEST(Skip, LargePopulationBound) {
  Rng rng(9);
  for (int i = 0; i < 10000; ++i) EXPECT_LE(skip_without_replacement(10, 100'000'000, rng),
                                            100'000'000u - 10);
}

// --- sorted thresholds ---------------------------------------------------------

TEST(SortedThresholds, SingleIsUniform) {
  std::vector<double> xs;
  for (std::uint64_t seed = 0; seed < 100000; ++seed) {
    Rng rng(seed);
    SortedUniforms t(1);
    xs.push_back(t.next(rng));
  }
  EXPECT_LT(oracle::ks_statistic(xs, [](double x) { return x; }),
            oracle::ks_critical(xs.size(), 0.001));
}

TEST(SortedThresholds, MinimumOfTwoIsBeta12) {
  std::vector<double> xs;
  for (std::uint64_t seed = 0; seed < 100000; ++seed) {
    Rng rng(seed);
    SortedUniforms t(2);
    xs.push_back(t.next(rng));
  }
  EXPECT_LT(oracle::ks_statistic(xs, [](double x) { return 1.0 - (1.0 - x) * (1.0 - x); }),
            oracle::ks_critical(xs.size(), 0.001));
}

TEST(SortedThresholds, MaximumOfThreeIsCubic) {
  std::vector<double> xs;
  for (std::uint64_t seed = 0; seed < 100000; ++seed) {
    Rng rng(seed);
    SortedUniforms t(3);
    t.next(rng);
    t.next(rng);
    xs.push_back(t.next(rng));
  }
  EXPECT_LT(oracle::ks_statistic(xs, [](double x) { return x * x * x; }),
            oracle::ks_critical(xs.size(), 0.001));
}

TEST(SortedThresholds, Nondecreasing) {
  Rng rng(4);
  SortedUniforms t(10000);
  double last = 0.0;
  while (t.remaining() > 0) {
    const double x = t.next(rng);
    ASSERT_GE(x, last);
    ASSERT_LT(x, 1.0);
    last = x;
  }
}

// --- construction ---------------------------------------------------------------

TEST(Sequential, ConstructsAtHundredMillion) {
  const auto big = std::views::iota(std::uint64_t{1}, std::uint64_t{100'000'001});
  auto s = make_sequential_sampler(big, SequentialMethod::AlgD, 10, 100'000'000, Rng(1));
  std::uint64_t count = 0;
  std::uint64_t last = 0;
  while (auto e = s.next()) {
    EXPECT_GT(e->item, last);
    last = e->item;
    ++count;
  }
  EXPECT_EQ(count, 10u);
}

TEST(Sequential, SampleLargerThanPopulationRejected) {
  const auto items = iota_items(3);
  for (auto m : {SequentialMethod::AlgD, SequentialMethod::AlgHiddenShuffle}) {
    try {
      make_sequential_sampler(items, m, 5, 3, Rng(1));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::invalid_request);
    }
  }
  // With replacement K > N is fine.
  EXPECT_NO_THROW(make_sequential_sampler(items, SequentialMethod::AlgORDSWR, 5, 3, Rng(1)));
}

TEST(Sequential, WeightedWithoutReplacementIsImpossible) {
  try {
    choose_sequential_method(true, false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unsupported_by_impossibility);
  }
  EXPECT_EQ(choose_sequential_method(true, true), SequentialMethod::AlgORDWSWR);
  EXPECT_EQ(choose_sequential_method(false, true), SequentialMethod::AlgORDSWR);
  EXPECT_EQ(choose_sequential_method(false, false), SequentialMethod::AlgD);
}

TEST(Sequential, InvalidTotals) {
  const auto items = iota_items(3);
  auto w = [](int) { return 1.0; };
  for (double total : {0.0, -1.0, double(NAN), double(INFINITY)}) {
    try {
      make_weighted_sequential_sampler(items, 2, total, Rng(1), w);
      FAIL() << total;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::invalid_request);
    }
  }
  try {
    make_sequential_sampler(items, SequentialMethod::AlgD, 0, 3, Rng(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_capacity);
  }
}

// --- emission contracts ---------------------------------------------------------

TEST(Sequential, FullSelectionEmitsEverythingInOrder) {
  const std::vector<std::string> items{"a", "b", "c", "d"};
  for (auto m : {SequentialMethod::AlgD, SequentialMethod::AlgHiddenShuffle}) {
    auto s = make_sequential_sampler(items, m, 4, 4, Rng(3));
    std::vector<std::string> got;
    for (const auto& e : s) {
      EXPECT_EQ(e.multiplicity, 1u);
      got.push_back(e.item);
    }
    EXPECT_EQ(got, items) << method_name(m);
  }
}

TEST(Sequential, OrderAndExactCountProperty) {
  // Random (method, K, N) configurations; every run must emit positions in
  // nondecreasing order with total multiplicity exactly K.
  Rng gen(2024);
  for (int round = 0; round < 2000; ++round) {
    const auto m = kUnweighted[gen.uniform_index(3)];
    const std::uint64_t n = 1 + gen.uniform_index(300);
    const std::uint64_t k = with_replacement(m) ? 1 + gen.uniform_index(400)
                                                : 1 + gen.uniform_index(n);
    const auto items = iota_items(int(n));
    auto s = make_sequential_sampler(items, m, k, n, Rng(round));
    std::uint64_t total = 0;
    std::uint64_t last_pos = 0;
    bool first = true;
    while (auto e = s.next()) {
      ASSERT_GE(e->multiplicity, 1u);
      if (!first) {
        ASSERT_GT(e->position, last_pos) << method_name(m);
      }
      ASSERT_EQ(e->item, int(e->position));
      first = false;
      last_pos = e->position;
      total += e->multiplicity;
    }
    ASSERT_EQ(total, k) << method_name(m) << " k=" << k << " n=" << n;
    ASSERT_FALSE(s.next().has_value()) << "exhausted state is terminal";
  }
}

TEST(Sequential, WeightedOrderAndExactCountProperty) {
  Rng gen(77);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t n = 1 + gen.uniform_index(200);
    const std::uint64_t k = 1 + gen.uniform_index(300);
    std::vector<double> w(n);
    for (auto& x : w) x = 0.01 + 10.0 * gen.uniform01();
    const auto items = iota_items(int(n));
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    auto s = make_weighted_sequential_sampler(items, k, total, Rng(round),
                                              [&](int i) { return w[std::size_t(i)]; });
    std::uint64_t sum = 0;
    std::int64_t last = -1;
    while (auto e = s.next()) {
      ASSERT_GT(std::int64_t(e->position), last);
      last = std::int64_t(e->position);
      sum += e->multiplicity;
    }
    ASSERT_EQ(sum, k);
  }
}

TEST(Sequential, DeclaredTotalSlightlyAboveRoundedSum) {
  // Ten weights of 0.1 sum to 0.9999999999999999 in binary floating point.
  const auto items = iota_items(10);
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    auto s = make_weighted_sequential_sampler(items, 50, 1.0, Rng(seed), [](int) { return 0.1; });
    std::uint64_t sum = 0;
    while (auto e = s.next()) sum += e->multiplicity;
    ASSERT_EQ(sum, 50u);
  }
}

TEST(Sequential, TruncatedStreamRaises) {
  const auto items = iota_items(5);
  for (auto m : kUnweighted) {
    // Declared N=1000 but only 5 elements; K=100 forces a selection past 5.
    auto s = make_sequential_sampler(items, m, 100, 1000, Rng(1));
    try {
      while (s.next()) {
      }
      FAIL() << method_name(m);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::truncated_stream);
      EXPECT_NE(std::string(e.what()).find("owed"), std::string::npos);
    }
    EXPECT_FALSE(s.next().has_value());
  }
  auto ws = make_weighted_sequential_sampler(items, 100, 1000.0, Rng(1), [](int) { return 1.0; });
  try {
    while (ws.next()) {
    }
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::truncated_stream);
  }
}

TEST(Sequential, BadWeightInStream) {
  const std::vector<double> w{1.0, -2.0, 1.0};
  const auto items = iota_items(3);
  auto s = make_weighted_sequential_sampler(items, 5, 4.0, Rng(1),
                                            [&](int i) { return w[std::size_t(i)]; });
  try {
    while (s.next()) {
    }
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_weight);
  }
}

TEST(Sequential, WorksOnSinglePassInput) {
  std::istringstream in("10 20 30 40 50 60");
  auto range = std::ranges::istream_view<int>(in);
  auto s = make_sequential_sampler(range, SequentialMethod::AlgD, 3, 6, Rng(5));
  std::vector<int> got;
  for (const auto& e : s) got.push_back(e.item);
  ASSERT_EQ(got.size(), 3u);
  EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
}

TEST(Sequential, ConstantStateSize) {
  // Live state does not depend on K or N: it is a fixed-size object.
  using It = std::vector<int>::const_iterator;
  static_assert(sizeof(SequentialSampler<It>) < 256);
  static_assert(sizeof(detail::HiddenShuffleSelector) < 128);
  SUCCEED();
}

TEST(Sequential, SkipsCostNoVariatesPerElement) {
  const auto big = std::views::iota(0, 1'000'000);
  for (auto m : kUnweighted) {
    auto s = make_sequential_sampler(big, m, 10, 1'000'000, Rng(2));
    while (s.next()) {
    }
    EXPECT_LT(s.rng().variates(), 200u) << method_name(m);
  }
}

// --- distributional laws ----------------------------------------------------------

TEST(SequentialLaw, UniformSubsets) {
  for (auto m : {SequentialMethod::AlgD, SequentialMethod::AlgHiddenShuffle}) {
    for (int n : {2, 4, 5, 6}) {
      for (std::size_t k = 1; k <= std::min<std::size_t>(3, std::size_t(n)); ++k) {
        EXPECT_TRUE(matches_law([&](std::uint64_t seed) { return sequential_trial(m, k, n, seed); },
                                oracle::exact_law_without_replacement_uniform(n, k)))
            << method_name(m) << " n=" << n << " k=" << k;
      }
    }
  }
}

TEST(SequentialLaw, LargerPopulationInclusion) {
  // N=40, K=3 exercises AlgD's rejection branch and HiddenShuffle's high
  // region with collisions; check per-position inclusion K/N.
  for (auto m : {SequentialMethod::AlgD, SequentialMethod::AlgHiddenShuffle}) {
    std::vector<int> hits(40, 0);
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
      for (int x : sequential_trial(m, 3, 40, std::uint64_t(t))) ++hits[std::size_t(x)];
    }
    double chi = 0.0;
    const double expected = trials * 3.0 / 40.0;
    for (int h : hits) chi += (h - expected) * (h - expected) / expected;
    EXPECT_LT(chi, oracle::chi_square_critical(39, 0.001)) << method_name(m);
  }
}

TEST(SequentialLaw, OrdWithReplacement) {
  for (int n : {2, 3, 5}) {
    for (std::size_t k : {1u, 2u, 3u}) {
      EXPECT_TRUE(matches_law(
          [&](std::uint64_t seed) {
            return sequential_trial(SequentialMethod::AlgORDSWR, k, n, seed);
          },
          oracle::exact_law_with_replacement_uniform(n, k)))
          << "n=" << n << " k=" << k;
    }
  }
}

TEST(SequentialLaw, OrdWeightedWithReplacement) {
  const std::vector<std::vector<double>> cases{{1, 3}, {1, 2, 3, 4}, {0.5, 5, 1}};
  for (const auto& w : cases) {
    for (std::size_t k : {1u, 2u, 3u}) {
      EXPECT_TRUE(matches_law(
          [&](std::uint64_t seed) { return weighted_sequential_trial(k, w, seed); },
          oracle::exact_law_with_replacement(w, k)))
          << "n=" << w.size() << " k=" << k;
    }
  }
}

// --- combine --------------------------------------------------------------------

TEST(Combine, SizeMismatchIsUsageError) {
  std::vector<SampleResult<int>> samples(2);
  samples[0].items = {1};
  samples[1].items = {2};
  const std::vector<double> weights{1.0};
  Rng rng(1);
  try {
    combine<int>(samples, weights, 1, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::usage);
  }
  const std::vector<double> two{1.0, 1.0};
  samples[1].items = {2, 3};
  try {
    combine<int>(samples, two, 1, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::usage);
  }
}

TEST(Combine, SinglePartitionIsIdentityInLaw) {
  // One partition of three items, K=2 local ORDSWR sample, combined.
  EXPECT_TRUE(matches_law(
      [](std::uint64_t seed) {
        SampleResult<int> local;
        local.items = sequential_trial(SequentialMethod::AlgORDSWR, 2, 3, seed * 2);
        std::vector<SampleResult<int>> samples{local};
        const std::vector<double> w{3.0};
        Rng rng(seed * 2 + 1);
        return combine<int>(samples, w, 2, rng).items;
      },
      oracle::exact_law_with_replacement_uniform(3, 2)));
}

TEST(Combine, ProportionalShares) {
  // Partition sizes 1 and 3, K=1: the second partition wins w.p. 3/4.
  const std::vector<double> law_w{1, 3};
  EXPECT_TRUE(matches_law(
      [](std::uint64_t seed) {
        SampleResult<int> a;
        a.items = {0};
        SampleResult<int> b;
        b.items = {1};
        std::vector<SampleResult<int>> samples{a, b};
        const std::vector<double> w{1.0, 3.0};
        Rng rng(seed);
        return combine<int>(samples, w, 1, rng).items;
      },
      oracle::exact_law_with_replacement(law_w, 1)));
}

TEST(Combine, TwoSingletonPartitionsJointLaw) {
  const std::vector<double> law_w{1, 1};
  EXPECT_TRUE(matches_law(
      [](std::uint64_t seed) {
        SampleResult<int> a;
        a.items = {0, 0};
        SampleResult<int> b;
        b.items = {1, 1};
        std::vector<SampleResult<int>> samples{a, b};
        const std::vector<double> w{1.0, 1.0};
        Rng rng(seed);
        return combine<int>(samples, w, 2, rng).items;
      },
      oracle::exact_law_with_replacement(law_w, 2)));
}

TEST(Combine, JointLawIsIidAcrossPartitions) {
  // Two unweighted partitions {0,1} and {2,3,4}; local ORDSWR samples of
  // size 2 combined must give the iid uniform law over five items.
  EXPECT_TRUE(matches_law(
      [](std::uint64_t seed) {
        SampleResult<int> a;
        a.items = sequential_trial(SequentialMethod::AlgORDSWR, 2, 2, seed * 3);
        SampleResult<int> b;
        b.items = sequential_trial(SequentialMethod::AlgORDSWR, 2, 3, seed * 3 + 1);
        for (int& x : b.items) x += 2;
        std::vector<SampleResult<int>> samples{a, b};
        const std::vector<double> w{2.0, 3.0};
        Rng rng(seed * 3 + 2);
        return combine<int>(samples, w, 2, rng).items;
      },
      oracle::exact_law_with_replacement_uniform(5, 2)));
}

}  // namespace
}  // namespace streamsampling
