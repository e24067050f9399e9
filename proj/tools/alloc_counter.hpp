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

// Byte counters maintained by the replacement global operator new/delete in
// alloc_counter.cpp. Only meaningful in binaries that link that file.
namespace alloc_counter {

std::uint64_t current_bytes();
std::uint64_t peak_bytes();
// Lowers the high-water mark to the current live byte count.
void reset_peak();

// Peak live bytes above the level at construction.
class Scope {
 public:
  Scope() : base_(current_bytes()) { reset_peak(); }
  std::uint64_t peak_above_base() const {
    const auto p = peak_bytes();
    return p > base_ ? p - base_ : 0;
  }

 private:
  std::uint64_t base_;
};

}  // namespace alloc_counter
