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

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "bench_suite.hpp"

namespace {

using namespace streamsampling;

TEST(Bench, GeneratorIsLazyAndComplete) {
  bench::Generator gen(1000);
  alloc_counter::Scope scope;
  std::uint64_t count = 0, sum = 0;
  for (auto x : gen) {
    ++count;
    sum += x;
  }
  EXPECT_EQ(count, 1000u);
  EXPECT_EQ(sum, 1000u * 1001u / 2);
  EXPECT_EQ(scope.peak_above_base(), 0u);
  static_assert(!std::ranges::sized_range<bench::Generator>);
}

TEST(Bench, WeightsStayInRange) {
  for (std::uint64_t x = 1; x < 10000; ++x) {
    EXPECT_GE(bench::weight_of(x), 0.5);
    EXPECT_LT(bench::weight_of(x), 1.5);
  }
}

TEST(Bench, DefaultGridSpansFourDecades) {
  EXPECT_EQ(bench::default_k_grid(10000000),
            (std::vector<std::uint64_t>{1000, 10000, 100000, 1000000}));
}

TEST(Bench, RejectsGridTooLargeForStream) {
  EXPECT_THROW(bench::run_suite(100, {11}, 1), Error);
  EXPECT_THROW(bench::run_suite(100, {}, 1), Error);
  EXPECT_NO_THROW(bench::run_suite(100, {10}, 1));
}

TEST(Bench, RowOrderAndShape) {
  const auto rows = bench::run_suite(20000, {20, 200}, 3);
  // 4 strategies in three scenarios, 2 in the weighted-without one
  ASSERT_EQ(rows.size(), (4 * 3 + 2) * 2u);
  EXPECT_EQ(rows[0].scenario, "unweighted_without");
  EXPECT_EQ(rows[0].strategy, "population-materialize");
  EXPECT_EQ(rows[0].k, 20u);
  EXPECT_EQ(rows[1].k, 200u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.n, 20000u);
    EXPECT_EQ(r.reps, 3);
    EXPECT_GE(r.median_ms, 0.0);
    if (r.scenario == "weighted_without") {
      EXPECT_EQ(r.strategy.find("sequential"), std::string::npos);
    }
  }
  const auto again = bench::run_suite(20000, {20, 200}, 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].scenario, again[i].scenario);
    EXPECT_EQ(rows[i].strategy, again[i].strategy);
    EXPECT_EQ(rows[i].k, again[i].k);
    EXPECT_EQ(rows[i].peak_aux_bytes, again[i].peak_aux_bytes);
  }
}

TEST(Bench, MemoryOrdering) {
  const auto rows = bench::run_suite(100000, {10, 1000}, 1);
  for (const auto& p : rows) {
    if (p.strategy != "population-materialize") continue;
    for (const auto& r : rows) {
      if (r.scenario != p.scenario || r.k != p.k) continue;
      if (r.strategy == "reservoir") {
        EXPECT_GE(p.peak_aux_bytes, 5 * r.peak_aux_bytes) << p.scenario;
        EXPECT_LE(r.peak_aux_bytes, 64 * r.k + 1024) << r.scenario;
      }
      if (r.strategy.starts_with("sequential")) {
        EXPECT_LE(r.peak_aux_bytes, 1024u) << r.scenario;
      }
    }
  }
}

TEST(Bench, ReservoirMemoryDoesNotGrowWithStream) {
  const auto small = bench::run_suite(10000, {100}, 1);
  const auto large = bench::run_suite(200000, {100}, 1);
  for (std::size_t i = 0; i < small.size(); ++i) {
    if (small[i].strategy != "reservoir") continue;
    EXPECT_EQ(small[i].peak_aux_bytes, large[i].peak_aux_bytes) << small[i].scenario;
  }
}

TEST(Bench, CsvAndSvg) {
  const auto rows = bench::run_suite(1000, {10, 100}, 1);
  std::ostringstream csv;
  bench::write_csv(csv, rows);
  const auto text = csv.str();
  EXPECT_EQ(text.rfind("scenario,strategy,method,n,k,reps,median_ms,peak_aux_bytes\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            rows.size() + 1);

  std::ostringstream svg;
  bench::write_svg(svg, rows, "weighted_with");
  const auto s = svg.str();
  EXPECT_EQ(s.rfind("<svg", 0), 0u);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
  EXPECT_NE(s.find("sequential-two-pass"), std::string::npos);
  EXPECT_NE(s.find("peak auxiliary memory"), std::string::npos);
}

}  // namespace
