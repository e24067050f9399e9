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
#include <string>
#include <vector>

namespace streamsampling {

template <class T>
struct WeightedRecord {
  T item;
  double weight;
};

// A materialized sample plus the bookkeeping needed to combine it later.
// Without-replacement samples from reservoirs are unordered; sequential
// samples come out in stream order.
template <class T>
struct SampleResult {
  std::vector<T> items;
  std::string method;
  std::uint64_t items_processed = 0;
  double weight_processed = 0.0;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

}  // namespace streamsampling
