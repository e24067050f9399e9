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

// The statistical verification matrix: every sampler, plus merge and
// combine, on small instances checked against the brute-force laws.

#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "streamsampling/oracle.hpp"
#include "streamsampling/streamsampling.hpp"

namespace streamsampling::verify {

struct Check {
  std::string group;  // which property the row belongs to
  std::string sampler;
  std::string instance;
  std::function<oracle::Outcome(std::uint64_t)> trial;
  oracle::ExactLaw law;
};

struct CheckResult {
  std::string group;
  std::string sampler;
  std::string instance;
  oracle::ChiSquareResult chi;
};

inline std::vector<int> range_items(int first, int last) {
  std::vector<int> v(static_cast<std::size_t>(last - first));
  std::iota(v.begin(), v.end(), first);
  return v;
}

inline oracle::Outcome reservoir_run(ReservoirMethod m, std::size_t k,
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

inline oracle::Outcome sequential_run(SequentialMethod m, std::size_t k, int n,
                                      std::uint64_t seed) {
  const auto items = range_items(0, n);
  auto s = make_sequential_sampler(items, m, k, static_cast<std::uint64_t>(n), Rng(seed));
  oracle::Outcome out;
  while (auto e = s.next()) out.insert(out.end(), e->multiplicity, e->item);
  return out;
}

inline oracle::Outcome ordwswr_run(std::size_t k, const std::vector<double>& weights, int offset,
                                   std::uint64_t seed) {
  const auto items = range_items(offset, offset + static_cast<int>(weights.size()));
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  auto s = make_weighted_sequential_sampler(
      items, k, total, Rng(seed), [&](int i) { return weights[std::size_t(i - offset)]; });
  oracle::Outcome out;
  while (auto e = s.next()) out.insert(out.end(), e->multiplicity, e->item);
  return out;
}

// Two partitions [0, split) and [split, n) merged.
inline oracle::Outcome merged_run(ReservoirMethod m, std::size_t k,
                                  const std::vector<double>& weights, int split,
                                  std::uint64_t seed) {
  ReservoirSampler<int> a(m, k, Rng(seed * 3));
  ReservoirSampler<int> b(m, k, Rng(seed * 3 + 1));
  for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
    auto& s = i < split ? a : b;
    if (is_weighted(m))
      s.fit(i, weights[std::size_t(i)]);
    else
      s.fit(i);
  }
  return ReservoirSampler<int>::merge(a, b, Rng(seed * 3 + 2)).value().items;
}

inline oracle::Outcome combined_ordwswr_run(std::size_t k, const std::vector<double>& weights,
                                            int split, std::uint64_t seed) {
  const std::vector<double> left(weights.begin(), weights.begin() + split);
  const std::vector<double> right(weights.begin() + split, weights.end());
  std::vector<SampleResult<int>> locals(2);
  locals[0].items = ordwswr_run(k, left, 0, seed * 3);
  locals[1].items = ordwswr_run(k, right, split, seed * 3 + 1);
  const std::vector<double> totals{std::accumulate(left.begin(), left.end(), 0.0),
                                   std::accumulate(right.begin(), right.end(), 0.0)};
  Rng rng(seed * 3 + 2);
  return combine<int>(locals, totals, k, rng).items;
}

inline std::vector<Check> standard_checks() {
  using oracle::exact_law_with_replacement;
  using oracle::exact_law_with_replacement_uniform;
  using oracle::exact_law_without_replacement;
  using oracle::exact_law_without_replacement_uniform;
  std::vector<Check> checks;

  for (auto [n, k] : {std::pair{5, 2}, std::pair{6, 3}}) {
    const std::string inst = "N=" + std::to_string(n) + " K=" + std::to_string(k);
    const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    const auto law = exact_law_without_replacement_uniform(static_cast<std::size_t>(n),
                                                           static_cast<std::size_t>(k));
    for (auto m : {ReservoirMethod::AlgR, ReservoirMethod::AlgL}) {
      checks.push_back({"uniform-subset", std::string(method_name(m)), inst,
                        [=](std::uint64_t s) { return reservoir_run(m, std::size_t(k), ones, s); },
                        law});
    }
    for (auto m : {SequentialMethod::AlgD, SequentialMethod::AlgHiddenShuffle}) {
      checks.push_back({"uniform-subset", std::string(method_name(m)), inst,
                        [=](std::uint64_t s) { return sequential_run(m, std::size_t(k), n, s); },
                        law});
    }
  }

  const std::vector<double> w3{1, 2, 3};
  for (auto m : {ReservoirMethod::AlgARes, ReservoirMethod::AlgAExpJ}) {
    checks.push_back({"weighted", std::string(method_name(m)), "w=[1,2,3] K=2",
                      [=](std::uint64_t s) { return reservoir_run(m, 2, w3, s); },
                      exact_law_without_replacement(w3, 2)});
  }
  const std::vector<double> w4{1, 2, 3, 4};
  for (std::size_t k : {1u, 2u}) {
    const std::string inst = "w=[1,2,3,4] K=" + std::to_string(k);
    checks.push_back(
        {"weighted", "AlgWRSWRSKIP", inst,
         [=](std::uint64_t s) { return reservoir_run(ReservoirMethod::AlgWRSWRSKIP, k, w4, s); },
         exact_law_with_replacement(w4, k)});
    checks.push_back({"weighted", "AlgORDWSWR", inst,
                      [=](std::uint64_t s) { return ordwswr_run(k, w4, 0, s); },
                      exact_law_with_replacement(w4, k)});
  }

  const std::vector<double> ones4(4, 1.0);
  checks.push_back(
      {"with-replacement", "AlgRSWRSKIP", "N=4 K=3 joint",
       [=](std::uint64_t s) { return reservoir_run(ReservoirMethod::AlgRSWRSKIP, 3, ones4, s); },
       exact_law_with_replacement_uniform(4, 3)});
  for (std::size_t slot = 0; slot < 3; ++slot) {
    checks.push_back({"with-replacement", "AlgRSWRSKIP", "N=4 K=3 slot " + std::to_string(slot),
                      [=](std::uint64_t s) {
                        const auto all = reservoir_run(ReservoirMethod::AlgRSWRSKIP, 3, ones4, s);
                        return oracle::Outcome{all[slot]};
                      },
                      exact_law_with_replacement_uniform(4, 1)});
  }
  checks.push_back(
      {"with-replacement", "AlgORDSWR", "N=4 K=2 joint",
       [=](std::uint64_t s) { return sequential_run(SequentialMethod::AlgORDSWR, 2, 4, s); },
       exact_law_with_replacement_uniform(4, 2)});

  const std::vector<double> ones6(6, 1.0);
  checks.push_back(
      {"merge", "AlgL", "[0..2]+[3..5] K=2",
       [=](std::uint64_t s) { return merged_run(ReservoirMethod::AlgL, 2, ones6, 3, s); },
       exact_law_without_replacement_uniform(6, 2)});
  const std::vector<double> w6{1, 2, 3, 4, 5, 6};
  checks.push_back(
      {"merge", "AlgWRSWRSKIP", "w=[1,2,3]+[4,5,6] K=2",
       [=](std::uint64_t s) { return merged_run(ReservoirMethod::AlgWRSWRSKIP, 2, w6, 3, s); },
       exact_law_with_replacement(w6, 2)});
  checks.push_back(
      {"merge", "AlgAExpJ", "w=[1,2,3]+[4,5,6] K=2",
       [=](std::uint64_t s) { return merged_run(ReservoirMethod::AlgAExpJ, 2, w6, 3, s); },
       exact_law_without_replacement(w6, 2)});

  checks.push_back({"combine", "AlgORDWSWR", "w=[1,2]+[3,4] K=2 joint",
                    [=](std::uint64_t s) { return combined_ordwswr_run(2, w4, 2, s); },
                    exact_law_with_replacement(w4, 2)});
  return checks;
}

inline CheckResult run_check(const Check& c, std::uint64_t trials, double alpha = 0.001) {
  return {c.group, c.sampler, c.instance,
          oracle::chi_square_with_reseed(c.trial, c.law, trials, alpha)};
}

}  // namespace streamsampling::verify
