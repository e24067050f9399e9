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

#include <stdexcept>
#include <string>

namespace streamsampling {

enum class Errc {
  invalid_capacity,
  invalid_weight,
  usage,
  incompatible_sampler,
  invalid_request,
  unsupported_by_impossibility,
  truncated_stream,
  oracle_capacity,
};

constexpr const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_capacity: return "invalid-capacity";
    case Errc::invalid_weight: return "invalid-weight";
    case Errc::usage: return "usage";
    case Errc::incompatible_sampler: return "incompatible-sampler";
    case Errc::invalid_request: return "invalid-request";
    case Errc::unsupported_by_impossibility: return "unsupported-by-impossibility";
    case Errc::truncated_stream: return "truncated-stream";
    case Errc::oracle_capacity: return "oracle-capacity";
  }
  return "unknown";
}

// All library failures are reported through this type; `code()` tells them apart.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace streamsampling
