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

#include <cstdint>
#include <functional>
#include <optional>
#include <ranges>
#include <string>
#include <utility>

#include "streamsampling/reservoir.hpp"
#include "streamsampling/sequential.hpp"

namespace streamsampling {

struct ItsampleOptions {
  bool replace = false;
  // Known population size; selects a sequential method (unweighted only).
  std::optional<std::uint64_t> total;
  // Known total weight; selects AlgORDWSWR (weighted with replacement only).
  std::optional<double> total_weight;
};

/// One-pass sample of any input range. With a known total the sample is
/// drawn sequentially and comes back in stream order; otherwise a reservoir
/// (AlgL or AlgRSWRSKIP) is used.
template <std::ranges::input_range R>
SampleResult<std::ranges::range_value_t<R>> itsample(R&& range, std::size_t k,
                                                     const ItsampleOptions& opts, Rng rng) {
  using T = std::ranges::range_value_t<R>;
  if (opts.total_weight) throw Error(Errc::usage, "total_weight given for an unweighted sample");
  if (opts.total) {
    const SequentialMethod method = choose_sequential_method(false, opts.replace);
    std::uint64_t n = *opts.total;
    SampleResult<T> out{{}, std::string(method_name(method)), 0, 0.0};
    if (n == 0) return out;
    const std::uint64_t want = opts.replace ? k : std::min<std::uint64_t>(k, n);
    auto sampler = make_sequential_sampler(range, method, want, n, rng);
    while (auto e = sampler.next()) out.items.insert(out.items.end(), e->multiplicity, e->item);
    out.items_processed = sampler.consumed();
    return out;
  }
  ReservoirSampler<T> sampler(opts.replace ? ReservoirMethod::AlgRSWRSKIP : ReservoirMethod::AlgL,
                              k, rng);
  for (auto&& x : range) sampler.fit(T(x));
  return sampler.value();
}

/// Weighted variant; `weight_of` maps an element to its positive weight.
template <std::ranges::input_range R, class WeightFn>
SampleResult<std::ranges::range_value_t<R>> itsample(R&& range, WeightFn weight_of,
                                                     std::size_t k, const ItsampleOptions& opts,
                                                     Rng rng) {
  using T = std::ranges::range_value_t<R>;
  if (opts.total) throw Error(Errc::usage, "weighted sampling needs total_weight, not total");
  if (opts.total_weight) {
    const SequentialMethod method = choose_sequential_method(true, opts.replace);
    SampleResult<T> out{{}, std::string(method_name(method)), 0, 0.0};
    auto sampler = make_weighted_sequential_sampler(range, k, *opts.total_weight, rng, weight_of);
    while (auto e = sampler.next()) out.items.insert(out.items.end(), e->multiplicity, e->item);
    out.items_processed = sampler.consumed();
    out.weight_processed = sampler.consumed_weight();
    return out;
  }
  ReservoirSampler<T> sampler(
      opts.replace ? ReservoirMethod::AlgWRSWRSKIP : ReservoirMethod::AlgAExpJ, k, rng);
  for (auto&& x : range) {
    const double w = static_cast<double>(std::invoke(weight_of, x));
    sampler.fit(T(x), w);
  }
  return sampler.value();
}

}  // namespace streamsampling
