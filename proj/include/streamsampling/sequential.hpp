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
#include <iterator>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "streamsampling/detail/draws.hpp"
#include "streamsampling/error.hpp"
#include "streamsampling/rng.hpp"
#include "streamsampling/sample.hpp"

namespace streamsampling {

enum class SequentialMethod { AlgD, AlgHiddenShuffle, AlgORDSWR, AlgORDWSWR };

constexpr bool is_weighted(SequentialMethod m) { return m == SequentialMethod::AlgORDWSWR; }

constexpr bool with_replacement(SequentialMethod m) {
  return m == SequentialMethod::AlgORDSWR || m == SequentialMethod::AlgORDWSWR;
}

constexpr std::string_view method_name(SequentialMethod m) {
  switch (m) {
    case SequentialMethod::AlgD: return "AlgD";
    case SequentialMethod::AlgHiddenShuffle: return "AlgHiddenShuffle";
    case SequentialMethod::AlgORDSWR: return "AlgORDSWR";
    case SequentialMethod::AlgORDWSWR: return "AlgORDWSWR";
  }
  return "?";
}

inline std::optional<SequentialMethod> parse_sequential_method(std::string_view name) {
  for (auto m : {SequentialMethod::AlgD, SequentialMethod::AlgHiddenShuffle,
                 SequentialMethod::AlgORDSWR, SequentialMethod::AlgORDWSWR}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

// Weighted sampling without replacement cannot be done sequentially from the
// total weight alone: the inclusion probability of the next element depends
// on the individual weights of everything after it, not just their sum.
inline SequentialMethod choose_sequential_method(bool weighted, bool replace) {
  if (weighted && !replace)
    throw Error(Errc::unsupported_by_impossibility,
                "weighted sampling without replacement has no sequential method: the "
                "remaining total weight does not determine inclusion probabilities");
  if (weighted) return SequentialMethod::AlgORDWSWR;
  return replace ? SequentialMethod::AlgORDSWR : SequentialMethod::AlgD;
}

/// Number of elements to pass over before the next member of a uniform
/// k-subset of the remaining n: P(S >= s) = prod_{i<s} (1 - k/(n-i)).
/// Vitter's Algorithm D, falling back to sequential search (Algorithm A)
/// when n < 13k.
inline std::uint64_t skip_without_replacement(std::uint64_t k, std::uint64_t n, Rng& rng) {
  if (k >= n) return 0;
  if (k == 1) return rng.uniform_index(n);
  if (n < 13 * k) {
    const double v = rng.uniform01();
    std::uint64_t s = 0;
    double top = static_cast<double>(n - k);
    double remaining = static_cast<double>(n);
    double quot = top / remaining;
    while (quot > v) {
      ++s;
      top -= 1.0;
      remaining -= 1.0;
      quot *= top / remaining;
    }
    return s;
  }

  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  const double k_inv = 1.0 / kk;
  const double km1_inv = 1.0 / (kk - 1.0);
  const double qu1 = nn - kk + 1.0;
  for (;;) {
    double x;
    double s;
    do {
      const double vprime = std::exp(std::log(rng.uniform01()) * k_inv);
      x = nn * (1.0 - vprime);
      s = std::floor(x);
    } while (s >= qu1);

    const double y1 = std::exp(std::log(rng.uniform01() * nn / qu1) * km1_inv);
    const double vprime = y1 * (1.0 - x / nn) * (qu1 / (qu1 - s));
    if (vprime <= 1.0) return static_cast<std::uint64_t>(s);

    const auto si = static_cast<std::uint64_t>(s);
    double y2 = 1.0;
    double top = nn - 1.0;
    double bottom;
    std::uint64_t limit;
    if (k - 1 > si) {
      bottom = nn - kk;
      limit = n - si;
    } else {
      bottom = nn - s - 1.0;
      limit = n - k + 1;
    }
    for (std::uint64_t t = n - 1; t >= limit; --t) {
      y2 = (y2 * top) / bottom;
      top -= 1.0;
      bottom -= 1.0;
    }
    if (nn / (nn - x) >= y1 * std::exp(std::log(y2) * km1_inv)) return si;
  }
}

/// Ascending order statistics of `count` iid Uniform(0,1), one at a time,
/// with constant state: the gap above the last value shrinks by u^(1/k).
class SortedUniforms {
 public:
  explicit SortedUniforms(std::uint64_t count) : remaining_(count) {}

  // Precondition: remaining() >= 1.
  double next(Rng& rng) {
    gap_ *= std::exp(std::log(rng.uniform01()) / static_cast<double>(remaining_));
    --remaining_;
    return 1.0 - gap_;
  }

  std::uint64_t remaining() const { return remaining_; }

 private:
  std::uint64_t remaining_;
  double gap_ = 1.0;
};

// A selected stream position (0-based) and how many draws landed on it.
struct Selection {
  std::uint64_t position;
  std::uint64_t multiplicity;
};

namespace detail {

inline std::uint64_t scale_to_index(double u, std::uint64_t n) {
  const auto p = static_cast<std::uint64_t>(u * static_cast<double>(n));
  return std::min(p, n - 1);
}

class DSelector {
 public:
  DSelector(std::uint64_t k, std::uint64_t n) : k_(k), n_(n) {}

  std::optional<Selection> next(Rng& rng) {
    if (k_ == 0) return std::nullopt;
    const std::uint64_t s = skip_without_replacement(k_, n_, rng);
    const Selection sel{pos_ + s, 1};
    pos_ += s + 1;
    n_ -= s + 1;
    --k_;
    return sel;
  }

 private:
  std::uint64_t k_;
  std::uint64_t n_;
  std::uint64_t pos_ = 0;
};

// Hidden shuffle: run the first K steps of a Fisher-Yates shuffle without
// materializing it. Positions [0, N-K) are "high", [N-K, N) "low". First
// count the swaps that pull from the high region, then emit the distinct high
// positions they hit in ascending order (a repeated hit brings back a low
// element instead), then a uniform subset of the low positions.
class HiddenShuffleSelector {
 public:
  HiddenShuffleSelector(std::uint64_t k, std::uint64_t n, Rng& rng)
      : high_size_(n - k), low_left_(k), low_base_(n - k), high_picks_(0) {
    std::uint64_t picks = 0;
    if (n > k) {
      picks = k;
      const double big_n = static_cast<double>(n);
      const double high = static_cast<double>(n - k);
      std::uint64_t i = 0;
      while (i < k) {
        // Candidate low picks arrive at rate q (a bound for later steps),
        // then are thinned to the exact rate at the step they land on.
        const double q = 1.0 - high / (big_n - static_cast<double>(i));
        const double jump = std::floor(std::log(rng.uniform01()) / std::log1p(-q));
        i += detail::saturating_u64(std::min(jump, static_cast<double>(k)));
        if (i < k) {
          const double p = 1.0 - high / (big_n - static_cast<double>(i));
          if (rng.uniform01() < p / q) --picks;
        }
        ++i;
      }
    }
    high_picks_ = SortedUniforms(picks);
    low_pending_ = k - picks;
  }

  std::optional<Selection> next(Rng& rng) {
    while (high_picks_.remaining() > 0) {
      const std::uint64_t p = scale_to_index(high_picks_.next(rng), high_size_);
      if (last_high_ && *last_high_ == p) {
        ++low_pending_;
        continue;
      }
      last_high_ = p;
      return Selection{p, 1};
    }
    if (low_pending_ == 0) return std::nullopt;
    const double u = rng.uniform01();
    const double need = static_cast<double>(low_pending_);
    double cdf = need / static_cast<double>(low_left_);
    std::uint64_t s = 0;
    while (cdf < u && s < low_left_ - low_pending_) {
      cdf = 1.0 - (1.0 - need / static_cast<double>(low_left_ - s - 1)) * (1.0 - cdf);
      ++s;
    }
    const Selection sel{low_base_ + s, 1};
    low_base_ += s + 1;
    low_left_ -= s + 1;
    --low_pending_;
    return sel;
  }

 private:
  std::uint64_t high_size_;
  std::uint64_t low_left_;
  std::uint64_t low_base_;
  SortedUniforms high_picks_;
  std::optional<std::uint64_t> last_high_;
  std::uint64_t low_pending_ = 0;
};

// Bentley-Saxe: K sorted uniforms mapped onto positions; ties collapse into
// one emission with a multiplicity.
class OrdSelector {
 public:
  OrdSelector(std::uint64_t k, std::uint64_t n) : n_(n), thresholds_(k) {}

  std::optional<Selection> next(Rng& rng) {
    if (!pending_) {
      if (thresholds_.remaining() == 0) return std::nullopt;
      pending_ = scale_to_index(thresholds_.next(rng), n_);
    }
    Selection sel{*pending_, 1};
    pending_.reset();
    while (thresholds_.remaining() > 0) {
      const std::uint64_t p = scale_to_index(thresholds_.next(rng), n_);
      if (p != sel.position) {
        pending_ = p;
        break;
      }
      ++sel.multiplicity;
    }
    return sel;
  }

 private:
  std::uint64_t n_;
  SortedUniforms thresholds_;
  std::optional<std::uint64_t> pending_;
};

}  // namespace detail

template <class T>
struct Emission {
  T item;
  std::uint64_t multiplicity;
  std::uint64_t position;
};

namespace detail {

// Minimal input-iterator facade over anything with `std::optional<E> next()`.
template <class Sampler, class E>
class EmissionIterator {
 public:
  using value_type = E;
  using difference_type = std::ptrdiff_t;

  EmissionIterator() = default;
  explicit EmissionIterator(Sampler* s) : sampler_(s), current_(s->next()) {}

  const E& operator*() const { return *current_; }
  const E* operator->() const { return &*current_; }
  EmissionIterator& operator++() {
    current_ = sampler_->next();
    return *this;
  }
  void operator++(int) { ++*this; }
  friend bool operator==(const EmissionIterator& it, std::default_sentinel_t) {
    return !it.current_.has_value();
  }

 private:
  Sampler* sampler_ = nullptr;
  std::optional<E> current_;
};

}  // namespace detail

/// Unweighted sequential sampler over an input range of known length N.
/// Emits selected elements in stream order; state does not grow with N or K.
template <std::input_iterator It, std::sentinel_for<It> Sent = It>
class SequentialSampler {
 public:
  using value_type = std::iter_value_t<It>;
  using emission_type = Emission<value_type>;

  SequentialSampler(SequentialMethod method, std::uint64_t k, std::uint64_t n, Rng rng,
                    It first, Sent last)
      : method_(method), k_(k), n_(n), rng_(rng), cur_(std::move(first)), end_(std::move(last)),
        selector_(make_selector(method, k, n, rng_)) {}

  std::optional<emission_type> next() {
    if (done_) return std::nullopt;
    const auto sel = std::visit([&](auto& s) { return s.next(rng_); }, selector_);
    if (!sel) {
      done_ = true;
      return std::nullopt;
    }
    while (pos_ < sel->position) {
      if (cur_ == end_) truncated();
      ++cur_;
      ++pos_;
    }
    if (cur_ == end_) truncated();
    emission_type e{*cur_, sel->multiplicity, pos_};
    ++cur_;
    ++pos_;
    emitted_ += sel->multiplicity;
    return e;
  }

  auto begin() { return detail::EmissionIterator<SequentialSampler, emission_type>(this); }
  std::default_sentinel_t end() const { return {}; }

  SequentialMethod method() const { return method_; }
  std::uint64_t emitted() const { return emitted_; }
  std::uint64_t consumed() const { return pos_; }
  const Rng& rng() const { return rng_; }

 private:
  using Selector = std::variant<detail::DSelector, detail::HiddenShuffleSelector,
                                detail::OrdSelector>;

  static Selector make_selector(SequentialMethod method, std::uint64_t k, std::uint64_t n,
                                Rng& rng) {
    if (k == 0) throw Error(Errc::invalid_capacity, "sample size must be at least 1");
    if (n == 0) throw Error(Errc::invalid_request, "population size must be positive");
    if (!with_replacement(method) && k > n)
      throw Error(Errc::invalid_request, "sample size " + std::to_string(k) +
                                             " exceeds population size " + std::to_string(n));
    switch (method) {
      case SequentialMethod::AlgD: return detail::DSelector(k, n);
      case SequentialMethod::AlgHiddenShuffle: return detail::HiddenShuffleSelector(k, n, rng);
      case SequentialMethod::AlgORDSWR: return detail::OrdSelector(k, n);
      case SequentialMethod::AlgORDWSWR: break;
    }
    throw Error(Errc::usage, "AlgORDWSWR needs weights; use WeightedSequentialSampler");
  }

  [[noreturn]] void truncated() {
    done_ = true;
    throw Error(Errc::truncated_stream,
                "stream ended after " + std::to_string(pos_) + " elements, " +
                    std::to_string(n_ - pos_) + " still owed of the declared " +
                    std::to_string(n_) + "; " + std::to_string(k_ - emitted_) +
                    " selections unfilled");
  }

  SequentialMethod method_;
  std::uint64_t k_;
  std::uint64_t n_;
  Rng rng_;
  It cur_;
  Sent end_;
  Selector selector_;
  std::uint64_t pos_ = 0;
  std::uint64_t emitted_ = 0;
  bool done_ = false;
};

/// Weighted sequential sampling with replacement (AlgORDWSWR): K sorted
/// uniform thresholds scaled to (0, W]; an element is emitted once for every
/// threshold that falls inside its slice of the cumulative weight.
template <std::input_iterator It, std::sentinel_for<It> Sent, class WeightFn>
class WeightedSequentialSampler {
 public:
  using value_type = std::iter_value_t<It>;
  using emission_type = Emission<value_type>;

  // Relative slack for the final threshold when the running sum of weights
  // rounds slightly below the declared total.
  static constexpr double kTotalSlack = 1e-9;

  WeightedSequentialSampler(std::uint64_t k, double total_weight, Rng rng, It first, Sent last,
                            WeightFn weight_of)
      : k_(k), total_(total_weight), rng_(rng), cur_(std::move(first)), end_(std::move(last)),
        weight_of_(std::move(weight_of)), thresholds_(k) {
    if (k == 0) throw Error(Errc::invalid_capacity, "sample size must be at least 1");
    if (!(total_weight > 0.0) || !std::isfinite(total_weight))
      throw Error(Errc::invalid_request, "total weight must be positive and finite");
  }

  std::optional<emission_type> next() {
    if (done_) return std::nullopt;
    if (!pending_) {
      if (thresholds_.remaining() == 0) {
        done_ = true;
        return std::nullopt;
      }
      pending_ = thresholds_.next(rng_) * total_;
    }
    for (;;) {
      if (cur_ == end_) truncated();
      auto&& ref = *cur_;
      const double w = weight_of(ref);
      const double upper = consumed_weight_ + w;
      const bool at_total = upper >= total_ * (1.0 - kTotalSlack);
      if (*pending_ <= upper || at_total) {
        std::uint64_t mult = 1;
        pending_.reset();
        while (thresholds_.remaining() > 0) {
          const double t = thresholds_.next(rng_) * total_;
          if (t <= upper || at_total) {
            ++mult;
          } else {
            pending_ = t;
            break;
          }
        }
        emission_type e{value_type(ref), mult, pos_};
        consumed_weight_ = upper;
        ++cur_;
        ++pos_;
        emitted_ += mult;
        return e;
      }
      consumed_weight_ = upper;
      ++cur_;
      ++pos_;
    }
  }

  auto begin() {
    return detail::EmissionIterator<WeightedSequentialSampler, emission_type>(this);
  }
  std::default_sentinel_t end() const { return {}; }

  SequentialMethod method() const { return SequentialMethod::AlgORDWSWR; }
  std::uint64_t emitted() const { return emitted_; }
  std::uint64_t consumed() const { return pos_; }
  double consumed_weight() const { return consumed_weight_; }
  const Rng& rng() const { return rng_; }

 private:
  template <class Ref>
  double weight_of(Ref&& ref) {
    const double w = static_cast<double>(std::invoke(weight_of_, ref));
    if (!(w > 0.0) || !std::isfinite(w)) {
      done_ = true;
      throw Error(Errc::invalid_weight,
                  "weight at position " + std::to_string(pos_) + " must be positive and finite");
    }
    return w;
  }

  [[noreturn]] void truncated() {
    done_ = true;
    throw Error(Errc::truncated_stream,
                "stream ended after " + std::to_string(pos_) + " elements with weight " +
                    std::to_string(total_ - consumed_weight_) + " still owed of the declared " +
                    std::to_string(total_) + "; " + std::to_string(k_ - emitted_) +
                    " selections unfilled");
  }

  std::uint64_t k_;
  double total_;
  Rng rng_;
  It cur_;
  Sent end_;
  WeightFn weight_of_;
  SortedUniforms thresholds_;
  std::optional<double> pending_;
  double consumed_weight_ = 0.0;
  std::uint64_t pos_ = 0;
  std::uint64_t emitted_ = 0;
  bool done_ = false;
};

template <std::ranges::input_range R>
auto make_sequential_sampler(R& range, SequentialMethod method, std::uint64_t k,
                             std::uint64_t n, Rng rng) {
  return SequentialSampler<std::ranges::iterator_t<R>, std::ranges::sentinel_t<R>>(
      method, k, n, rng, std::ranges::begin(range), std::ranges::end(range));
}

template <std::ranges::input_range R, class WeightFn>
auto make_weighted_sequential_sampler(R& range, std::uint64_t k, double total_weight, Rng rng,
                                      WeightFn weight_of) {
  return WeightedSequentialSampler<std::ranges::iterator_t<R>, std::ranges::sentinel_t<R>,
                                   WeightFn>(k, total_weight, rng, std::ranges::begin(range),
                                             std::ranges::end(range), std::move(weight_of));
}

/// Merges with-replacement samples of size K taken from disjoint partitions.
/// Output draws pick partition j with probability W_j / sum(W); the draws
/// assigned to a partition take distinct entries of its local sample, so the
/// K outputs remain iid with global probabilities w_i / sum(W). Items come out
/// grouped by partition, each group in its local order.
template <class T>
SampleResult<T> combine(std::span<const SampleResult<T>> samples,
                        std::span<const double> partition_weights, std::size_t k, Rng& rng) {
  if (samples.size() != partition_weights.size())
    throw Error(Errc::usage, "combine needs one weight per sample");
  if (samples.empty()) throw Error(Errc::usage, "combine needs at least one sample");
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != k)
      throw Error(Errc::usage, "combine requires every local sample to hold exactly K items");
    detail::check_weight(partition_weights[i]);
    cumulative.push_back(total += partition_weights[i]);
  }
  std::vector<std::size_t> counts(samples.size(), 0);
  for (std::size_t d = 0; d < k; ++d) ++counts[detail::pick_proportional(rng, cumulative)];

  SampleResult<T> out{{}, "combine", 0, 0.0};
  out.items.reserve(k);
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.items_processed += samples[i].items_processed;
    out.weight_processed += samples[i].weight_processed;
    picks.clear();
    detail::sample_distinct(rng, k, counts[i], picks);
    std::sort(picks.begin(), picks.end());
    for (auto idx : picks) out.items.push_back(samples[i].items[idx]);
  }
  return out;
}

}  // namespace streamsampling
