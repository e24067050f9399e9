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

// Line sampling front end: reads byte lines from files or stdin and writes a
// sample of them, in the spirit of `shuf -n` / `tsv-sample`.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streamsampling/streamsampling.hpp"

namespace streamsampling::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // I/O and usage errors
  kBadWeight = 2,
  kTruncated = 3,
  kImpossible = 4,
};

struct CliConfig {
  std::vector<std::string> inputs;  // empty or "-" means stdin
  std::uint64_t k = 0;
  std::optional<std::string> method;
  bool replace = false;
  std::optional<std::size_t> weight_field;  // 1-based
  char delimiter = '\t';
  std::optional<std::uint64_t> total;
  std::optional<double> total_weight;
  std::uint64_t seed = 0;
  bool header = false;
  bool stable = false;
};

struct Line {
  std::uint64_t number = 0;  // 1-based, across all inputs
  std::string text;
};

struct InputError {
  std::string message;
};

struct WeightError {
  std::uint64_t line;
  std::string field;
};

// Concatenation of the configured inputs as LF-separated byte lines. A final
// line without a terminator is still a line.
class LineSource {
 public:
  LineSource(const std::vector<std::string>& paths, std::istream& std_in)
      : paths_(paths), std_in_(std_in) {
    if (paths_.empty()) paths_.push_back("-");
  }

  bool next(Line& line) {
    for (;;) {
      if (!current_ && !open_next()) return false;
      if (std::getline(*current_, line.text)) {
        line.number = ++count_;
        return true;
      }
      if (current_->bad()) throw InputError{"read error on " + paths_[index_ - 1]};
      current_ = nullptr;
      owned_.reset();
    }
  }

 private:
  bool open_next() {
    if (index_ >= paths_.size()) return false;
    const std::string& path = paths_[index_++];
    if (path == "-") {
      current_ = &std_in_;
      return true;
    }
    owned_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*owned_) throw InputError{"cannot open " + path};
    current_ = owned_.get();
    return true;
  }

  std::vector<std::string> paths_;
  std::istream& std_in_;
  std::unique_ptr<std::ifstream> owned_;
  std::istream* current_ = nullptr;
  std::size_t index_ = 0;
  std::uint64_t count_ = 0;
};

// Input range over a LineSource for the sequential samplers.
class LineRange {
 public:
  explicit LineRange(LineSource& src) : src_(&src) {}

  class iterator {
   public:
    using value_type = Line;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(LineSource* src) : src_(src) { ++*this; }

    const Line& operator*() const { return line_; }
    iterator& operator++() {
      if (!src_->next(line_)) src_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return it.src_ == nullptr;
    }

   private:
    LineSource* src_ = nullptr;
    Line line_;
  };

  iterator begin() { return iterator(src_); }
  std::default_sentinel_t end() { return {}; }

 private:
  LineSource* src_;
};

inline double parse_weight(const Line& line, std::size_t field, char delimiter) {
  std::string_view rest = line.text;
  for (std::size_t i = 1; i < field; ++i) {
    const auto cut = rest.find(delimiter);
    if (cut == std::string_view::npos) throw WeightError{line.number, "<missing field>"};
    rest.remove_prefix(cut + 1);
  }
  std::string_view value = rest.substr(0, rest.find(delimiter));
  while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back())))
    value.remove_suffix(1);
  while (!value.empty() && std::isspace(static_cast<unsigned char>(value.front())))
    value.remove_prefix(1);
  const std::string text(value);
  char* end = nullptr;
  const double w = text.empty() ? 0.0 : std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !(w > 0.0) || !std::isfinite(w))
    throw WeightError{line.number, text};
  return w;
}

inline void write_line(std::ostream& out, const std::string& text, std::uint64_t times = 1) {
  for (std::uint64_t i = 0; i < times; ++i) {
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.put('\n');
  }
}

struct Dispatch {
  bool sequential = false;
  ReservoirMethod reservoir = ReservoirMethod::AlgL;
  SequentialMethod seq = SequentialMethod::AlgD;
};

// Resolves the sampling method; returns an exit code on a bad combination.
inline std::optional<int> resolve(const CliConfig& cfg, Dispatch& d, std::ostream& err) {
  const bool weighted = cfg.weight_field.has_value();
  const bool declared = cfg.total || cfg.total_weight;
  if (cfg.k == 0) {
    err << "error: -n must be at least 1\n";
    return kFailure;
  }
  if (cfg.weight_field && *cfg.weight_field == 0) {
    err << "error: --weight-field is 1-based\n";
    return kFailure;
  }
  if (weighted && !cfg.replace && declared) {
    err << "error: weighted sampling without replacement cannot use a declared total: "
           "the total weight alone does not determine per-line inclusion probabilities "
           "(drop --total/--total-weight, or add --replace)\n";
    return kImpossible;
  }
  if (declared) {
    if (weighted && !cfg.total_weight) {
      err << "error: weighted sequential sampling needs --total-weight\n";
      return kFailure;
    }
    if (!weighted && cfg.total_weight) {
      err << "error: --total-weight requires --weight-field\n";
      return kFailure;
    }
    d.sequential = true;
    d.seq = choose_sequential_method(weighted, cfg.replace);
  } else if (weighted) {
    d.reservoir = cfg.replace ? ReservoirMethod::AlgWRSWRSKIP : ReservoirMethod::AlgAExpJ;
  } else {
    d.reservoir = cfg.replace ? ReservoirMethod::AlgRSWRSKIP : ReservoirMethod::AlgL;
  }
  if (!cfg.method) return std::nullopt;

  if (auto m = parse_reservoir_method(*cfg.method)) {
    if (declared) {
      err << "error: " << *cfg.method << " is a reservoir method; drop --total/--total-weight\n";
      return kFailure;
    }
    if (is_weighted(*m) != weighted || with_replacement(*m) != cfg.replace) {
      err << "error: " << *cfg.method << " does not match the requested sampling scheme\n";
      return kFailure;
    }
    d.reservoir = *m;
    return std::nullopt;
  }
  if (auto m = parse_sequential_method(*cfg.method)) {
    if (!declared) {
      err << "error: " << *cfg.method << " is sequential and needs --total or --total-weight\n";
      return kFailure;
    }
    if (is_weighted(*m) != weighted || with_replacement(*m) != cfg.replace) {
      err << "error: " << *cfg.method << " does not match the requested sampling scheme\n";
      return kFailure;
    }
    d.seq = *m;
    return std::nullopt;
  }
  err << "error: unknown method '" << *cfg.method << "'\n";
  return kFailure;
}

inline int run_reservoir(const CliConfig& cfg, const Dispatch& d, LineSource& src,
                         std::ostream& out) {
  ReservoirSampler<Line> sampler(d.reservoir, static_cast<std::size_t>(cfg.k), Rng(cfg.seed));
  Line line;
  while (src.next(line)) {
    if (cfg.weight_field) {
      const double w = parse_weight(line, *cfg.weight_field, cfg.delimiter);
      sampler.fit(std::move(line), w);
    } else {
      sampler.fit(std::move(line));
    }
  }
  auto sample = sampler.value();
  if (cfg.stable) {
    std::stable_sort(sample.items.begin(), sample.items.end(),
                     [](const Line& a, const Line& b) { return a.number < b.number; });
  }
  for (const Line& l : sample.items) write_line(out, l.text);
  return kOk;
}

inline int run_sequential(const CliConfig& cfg, const Dispatch& d, LineSource& src,
                          std::ostream& out) {
  LineRange lines(src);
  if (d.seq == SequentialMethod::AlgORDWSWR) {
    auto weight_of = [&](const Line& l) {
      return parse_weight(l, *cfg.weight_field, cfg.delimiter);
    };
    auto sampler = make_weighted_sequential_sampler(lines, cfg.k, *cfg.total_weight,
                                                    Rng(cfg.seed), weight_of);
    while (auto e = sampler.next()) write_line(out, e->item.text, e->multiplicity);
    return kOk;
  }
  const std::uint64_t n = *cfg.total;
  if (n == 0) return kOk;
  const std::uint64_t k = with_replacement(d.seq) ? cfg.k : std::min(cfg.k, n);
  auto sampler = make_sequential_sampler(lines, d.seq, k, n, Rng(cfg.seed));
  while (auto e = sampler.next()) write_line(out, e->item.text, e->multiplicity);
  return kOk;
}

/// Runs one sampling job. Diagnostics go to `err`; the return value is the
/// process exit code.
inline int run(const CliConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  Dispatch d;
  if (auto rc = resolve(cfg, d, err)) return *rc;
  try {
    LineSource src(cfg.inputs, in);
    if (cfg.header) {
      Line first;
      if (src.next(first)) write_line(out, first.text);
    }
    const int rc = d.sequential ? run_sequential(cfg, d, src, out) : run_reservoir(cfg, d, src, out);
    out.flush();
    if (!out) {
      err << "error: write failed\n";
      return kFailure;
    }
    return rc;
  } catch (const WeightError& e) {
    out.flush();
    err << "error: line " << e.line << ": invalid weight '" << e.field << "'\n";
    return kBadWeight;
  } catch (const InputError& e) {
    out.flush();
    err << "error: " << e.message << "\n";
    return kFailure;
  } catch (const Error& e) {
    out.flush();
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::truncated_stream: return kTruncated;
      case Errc::unsupported_by_impossibility: return kImpossible;
      case Errc::invalid_weight: return kBadWeight;
      default: return kFailure;
    }
  }
}

}  // namespace streamsampling::cli
