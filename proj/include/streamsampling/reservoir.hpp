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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "streamsampling/detail/draws.hpp"
#include "streamsampling/error.hpp"
#include "streamsampling/rng.hpp"
#include "streamsampling/sample.hpp"

namespace streamsampling {

enum class ReservoirMethod { AlgR, AlgL, AlgRSWRSKIP, AlgARes, AlgAExpJ, AlgWRSWRSKIP };

constexpr bool is_weighted(ReservoirMethod m) {
  return m == ReservoirMethod::AlgARes || m == ReservoirMethod::AlgAExpJ ||
         m == ReservoirMethod::AlgWRSWRSKIP;
}

constexpr bool with_replacement(ReservoirMethod m) {
  return m == ReservoirMethod::AlgRSWRSKIP || m == ReservoirMethod::AlgWRSWRSKIP;
}

constexpr std::string_view method_name(ReservoirMethod m) {
  switch (m) {
    case ReservoirMethod::AlgR: return "AlgR";
    case ReservoirMethod::AlgL: return "AlgL";
    case ReservoirMethod::AlgRSWRSKIP: return "AlgRSWRSKIP";
    case ReservoirMethod::AlgARes: return "AlgARes";
    case ReservoirMethod::AlgAExpJ: return "AlgAExpJ";
    case ReservoirMethod::AlgWRSWRSKIP: return "AlgWRSWRSKIP";
  }
  return "?";
}

inline std::optional<ReservoirMethod> parse_reservoir_method(std::string_view name) {
  for (auto m : {ReservoirMethod::AlgR, ReservoirMethod::AlgL, ReservoirMethod::AlgRSWRSKIP,
                 ReservoirMethod::AlgARes, ReservoirMethod::AlgAExpJ,
                 ReservoirMethod::AlgWRSWRSKIP}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

namespace detail {

template <class Sampler>
void check_mergeable(std::span<const Sampler* const> parts) {
  if (parts.empty()) throw Error(Errc::usage, "merge needs at least one sampler");
  for (const Sampler* p : parts) {
    if (p->capacity() != parts.front()->capacity())
      throw Error(Errc::incompatible_sampler, "merge requires equal sample sizes");
  }
}

// Uniform without-replacement merge shared by AlgR and AlgL: pairwise fold,
// splitting each merged sample between the two sides hypergeometrically.
template <class T>
std::vector<T> merge_uniform(Rng& rng, std::size_t capacity,
                             std::span<const std::pair<const std::vector<T>*, std::uint64_t>> parts,
                             std::uint64_t& total_seen) {
  std::vector<T> acc = *parts.front().first;
  std::uint64_t acc_seen = parts.front().second;
  std::vector<std::size_t> picks;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& [other, other_seen] = parts[i];
    const std::uint64_t total = acc_seen + other_seen;
    const std::uint64_t keep = std::min<std::uint64_t>(capacity, total);
    const std::uint64_t from_acc = hypergeometric(rng, total, acc_seen, keep);
    std::vector<T> merged;
    merged.reserve(static_cast<std::size_t>(keep));
    picks.clear();
    sample_distinct(rng, acc.size(), static_cast<std::size_t>(from_acc), picks);
    for (auto idx : picks) merged.push_back(acc[idx]);
    picks.clear();
    sample_distinct(rng, other->size(), static_cast<std::size_t>(keep - from_acc), picks);
    for (auto idx : picks) merged.push_back((*other)[idx]);
    acc = std::move(merged);
    acc_seen = total;
  }
  total_seen = acc_seen;
  return acc;
}

// With-replacement merge: the K output slots are spread over the inputs by a
// multinomial draw with the given shares, then each input contributes that
// many of its own slots, chosen without reuse so output slots stay independent.
template <class T>
std::vector<T> merge_slots(Rng& rng, std::size_t capacity,
                           std::span<const std::vector<T>* const> buffers,
                           const std::vector<double>& shares) {
  std::vector<double> cumulative(shares.size());
  double running = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) cumulative[i] = (running += shares[i]);
  if (running <= 0.0) return {};
  std::vector<std::size_t> counts(shares.size(), 0);
  for (std::size_t s = 0; s < capacity; ++s) ++counts[pick_proportional(rng, cumulative)];
  std::vector<T> out;
  out.reserve(capacity);
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < buffers.size(); ++i) {
    picks.clear();
    sample_distinct(rng, buffers[i]->size(), counts[i], picks);
    for (auto idx : picks) out.push_back((*buffers[i])[idx]);
  }
  return out;
}

// Fills `count` distinct slots of `buffer` with `item`.
template <class T>
void replace_slots(Rng& rng, std::vector<T>& buffer, std::size_t count, const T& item,
                   std::vector<std::size_t>& scratch) {
  if (count >= buffer.size()) {
    std::fill(buffer.begin(), buffer.end(), item);
    return;
  }
  scratch.clear();
  sample_distinct(rng, buffer.size(), count, scratch);
  for (auto idx : scratch) buffer[idx] = item;
}

template <class T>
struct Keyed {
  // log of the priority key u^(1/w); same order as the key, no underflow.
  double log_key;
  T item;
};

struct MinKeyFirst {
  template <class T>
  bool operator()(const Keyed<T>& a, const Keyed<T>& b) const {
    return a.log_key > b.log_key;
  }
};

}  // namespace detail

/// Algorithm R: one variate per element after the reservoir fills.
template <class T>
class AlgR {
 public:
  static constexpr ReservoirMethod method = ReservoirMethod::AlgR;

  AlgR(std::size_t capacity, Rng rng) : capacity_(capacity), rng_(rng) {
    detail::check_capacity(capacity);
    buffer_.reserve(capacity);
  }

  void fit(T item) {
    ++seen_;
    if (buffer_.size() < capacity_) {
      buffer_.push_back(std::move(item));
      return;
    }
    const auto slot = rng_.uniform_index(seen_);
    if (slot < capacity_) buffer_[static_cast<std::size_t>(slot)] = std::move(item);
  }

  SampleResult<T> value() const {
    return {buffer_, std::string(method_name(method)), seen_, 0.0};
  }

  static AlgR merge(std::span<const AlgR* const> parts, Rng rng) {
    detail::check_mergeable(parts);
    std::vector<std::pair<const std::vector<T>*, std::uint64_t>> views;
    for (const AlgR* p : parts) views.emplace_back(&p->buffer_, p->seen_);
    AlgR out(parts.front()->capacity_, rng);
    out.buffer_ = detail::merge_uniform<T>(out.rng_, out.capacity_, views, out.seen_);
    return out;
  }

  std::size_t capacity() const { return capacity_; }
  std::uint64_t seen() const { return seen_; }
  double weight_seen() const { return 0.0; }
  std::span<const T> items() const { return buffer_; }
  const Rng& rng() const { return rng_; }

 private:
  std::size_t capacity_;
  Rng rng_;
  std::vector<T> buffer_;
  std::uint64_t seen_ = 0;
};

/// Li's Algorithm L. Elements between acceptances cost nothing but a
/// counter compare; each acceptance spends three variates.
template <class T>
class AlgL {
 public:
  static constexpr ReservoirMethod method = ReservoirMethod::AlgL;

  AlgL(std::size_t capacity, Rng rng) : capacity_(capacity), rng_(rng) {
    detail::check_capacity(capacity);
    buffer_.reserve(capacity);
  }

  void fit(T item) {
    ++seen_;
    if (buffer_.size() < capacity_) {
      buffer_.push_back(std::move(item));
      if (buffer_.size() == capacity_) {
        w_ = std::exp(std::log(rng_.uniform01()) / static_cast<double>(capacity_));
        schedule_next();
      }
      return;
    }
    if (seen_ < next_) return;
    buffer_[static_cast<std::size_t>(rng_.uniform_index(capacity_))] = std::move(item);
    w_ *= std::exp(std::log(rng_.uniform01()) / static_cast<double>(capacity_));
    schedule_next();
  }

  SampleResult<T> value() const {
    return {buffer_, std::string(method_name(method)), seen_, 0.0};
  }

  static AlgL merge(std::span<const AlgL* const> parts, Rng rng) {
    detail::check_mergeable(parts);
    std::vector<std::pair<const std::vector<T>*, std::uint64_t>> views;
    for (const AlgL* p : parts) views.emplace_back(&p->buffer_, p->seen_);
    AlgL out(parts.front()->capacity_, rng);
    out.buffer_ = detail::merge_uniform<T>(out.rng_, out.capacity_, views, out.seen_);
    if (out.seen_ >= out.capacity_) {
      // w is the K-th smallest of `seen` uniform keys.
      const auto k = static_cast<double>(out.capacity_);
      out.w_ = detail::beta_variate(out.rng_, k, static_cast<double>(out.seen_) - k + 1.0);
      out.schedule_next();
    }
    return out;
  }

  std::size_t capacity() const { return capacity_; }
  std::uint64_t seen() const { return seen_; }
  double weight_seen() const { return 0.0; }
  std::span<const T> items() const { return buffer_; }
  const Rng& rng() const { return rng_; }

 private:
  void schedule_next() {
    const double skip = std::floor(std::log(rng_.uniform01()) / std::log1p(-w_));
    const std::uint64_t s = detail::saturating_u64(skip);
    next_ = (s >= UINT64_MAX - seen_ - 1) ? UINT64_MAX : seen_ + s + 1;
  }

  std::size_t capacity_;
  Rng rng_;
  std::vector<T> buffer_;
  std::uint64_t seen_ = 0;
  std::uint64_t next_ = 0;  // 1-based index of the next accepted element
  double w_ = 0.0;
};

/// Unweighted reservoir with replacement, skipping between acceptances.
/// After n elements every slot independently holds element i w.p. 1/n.
template <class T>
class AlgRSWRSKIP {
 public:
  static constexpr ReservoirMethod method = ReservoirMethod::AlgRSWRSKIP;

  AlgRSWRSKIP(std::size_t capacity, Rng rng) : capacity_(capacity), rng_(rng) {
    detail::check_capacity(capacity);
  }

  void fit(T item) {
    ++seen_;
    if (seen_ == 1) {
      buffer_.assign(capacity_, std::move(item));
      scratch_.reserve(capacity_);
      schedule_next();
      return;
    }
    if (seen_ < next_) return;
    const std::size_t count =
        detail::conditioned_binomial(rng_, capacity_, 1.0 / static_cast<double>(seen_));
    detail::replace_slots(rng_, buffer_, count, item, scratch_);
    schedule_next();
  }

  SampleResult<T> value() const {
    return {buffer_, std::string(method_name(method)), seen_, 0.0};
  }

  static AlgRSWRSKIP merge(std::span<const AlgRSWRSKIP* const> parts, Rng rng) {
    detail::check_mergeable(parts);
    AlgRSWRSKIP out(parts.front()->capacity_, rng);
    std::vector<const std::vector<T>*> buffers;
    std::vector<double> shares;
    for (const AlgRSWRSKIP* p : parts) {
      buffers.push_back(&p->buffer_);
      shares.push_back(static_cast<double>(p->seen_));
      out.seen_ += p->seen_;
    }
    out.buffer_ = detail::merge_slots<T>(out.rng_, out.capacity_, buffers, shares);
    if (out.seen_ > 0) {
      out.scratch_.reserve(out.capacity_);
      out.schedule_next();
    }
    return out;
  }

  std::size_t capacity() const { return capacity_; }
  std::uint64_t seen() const { return seen_; }
  double weight_seen() const { return 0.0; }
  std::span<const T> items() const { return buffer_; }
  const Rng& rng() const { return rng_; }

 private:
  // P(next > m) = (seen / m)^K for m >= seen.
  void schedule_next() {
    const double u = rng_.uniform01();
    const double t = std::floor(static_cast<double>(seen_) *
                                std::exp(-std::log(u) / static_cast<double>(capacity_)));
    const std::uint64_t base = detail::saturating_u64(t);
    next_ = base == UINT64_MAX ? base : std::max(base + 1, seen_ + 1);
  }

  std::size_t capacity_;
  Rng rng_;
  std::vector<T> buffer_;
  std::vector<std::size_t> scratch_;
  std::uint64_t seen_ = 0;
  std::uint64_t next_ = 0;
};

/// Efraimidis-Spirakis A-Res: keep the K largest keys u^(1/w).
template <class T>
class AlgARes {
 public:
  static constexpr ReservoirMethod method = ReservoirMethod::AlgARes;

  AlgARes(std::size_t capacity, Rng rng) : capacity_(capacity), rng_(rng) {
    detail::check_capacity(capacity);
    heap_.reserve(capacity);
  }

  void fit(T item, double weight) {
    detail::check_weight(weight);
    ++seen_;
    weight_seen_ += weight;
    const double log_key = std::log(rng_.uniform01()) / weight;
    if (heap_.size() < capacity_) {
      heap_.push_back({log_key, std::move(item)});
      std::push_heap(heap_.begin(), heap_.end(), detail::MinKeyFirst{});
    } else if (log_key > heap_.front().log_key) {
      std::pop_heap(heap_.begin(), heap_.end(), detail::MinKeyFirst{});
      heap_.back() = {log_key, std::move(item)};
      std::push_heap(heap_.begin(), heap_.end(), detail::MinKeyFirst{});
    }
  }

  SampleResult<T> value() const {
    SampleResult<T> out{{}, std::string(method_name(method)), seen_, weight_seen_};
    out.items.reserve(heap_.size());
    for (const auto& e : heap_) out.items.push_back(e.item);
    return out;
  }

  static AlgARes merge(std::span<const AlgARes* const> parts, Rng rng) {
    AlgARes out(parts.empty() ? 1 : parts.front()->capacity_, rng);
    out.absorb(parts);
    return out;
  }

  std::size_t capacity() const { return capacity_; }
  std::uint64_t seen() const { return seen_; }
  double weight_seen() const { return weight_seen_; }
  const Rng& rng() const { return rng_; }
  // Smallest retained log-key; only meaningful once the reservoir is non-empty.
  double min_log_key() const { return heap_.front().log_key; }
  std::span<const detail::Keyed<T>> entries() const { return heap_; }

 protected:
  void absorb(std::span<const AlgARes* const> parts) {
    detail::check_mergeable(parts);
    heap_.clear();
    for (const AlgARes* p : parts) {
      seen_ += p->seen_;
      weight_seen_ += p->weight_seen_;
      heap_.insert(heap_.end(), p->heap_.begin(), p->heap_.end());
    }
    if (heap_.size() > capacity_) {
      std::nth_element(heap_.begin(), heap_.begin() + static_cast<std::ptrdiff_t>(capacity_),
                       heap_.end(), [](const auto& a, const auto& b) {
                         return a.log_key > b.log_key;
                       });
      heap_.resize(capacity_);
    }
    std::make_heap(heap_.begin(), heap_.end(), detail::MinKeyFirst{});
  }

  std::size_t capacity_;
  Rng rng_;
  std::vector<detail::Keyed<T>> heap_;
  std::uint64_t seen_ = 0;
  double weight_seen_ = 0.0;
};

/// A-ExpJ: same law as A-Res, but one variate decides how much weight to jump
/// over before the next insertion.
template <class T>
class AlgAExpJ : private AlgARes<T> {
  using Base = AlgARes<T>;

 public:
  static constexpr ReservoirMethod method = ReservoirMethod::AlgAExpJ;

  AlgAExpJ(std::size_t capacity, Rng rng) : Base(capacity, rng) {}

  void fit(T item, double weight) {
    detail::check_weight(weight);
    ++this->seen_;
    this->weight_seen_ += weight;
    auto& heap = this->heap_;
    if (heap.size() < this->capacity_) {
      heap.push_back({std::log(this->rng_.uniform01()) / weight, std::move(item)});
      std::push_heap(heap.begin(), heap.end(), detail::MinKeyFirst{});
      if (heap.size() == this->capacity_) new_jump();
      return;
    }
    skipped_ += weight;
    if (skipped_ < jump_) return;
    // Key drawn uniformly from (T^w, 1), then raised to 1/w.
    const double t_w = std::exp(weight * heap.front().log_key);
    double r = t_w + this->rng_.uniform01() * (1.0 - t_w);
    if (r >= 1.0) r = std::nextafter(1.0, 0.0);
    std::pop_heap(heap.begin(), heap.end(), detail::MinKeyFirst{});
    heap.back() = {std::log(r) / weight, std::move(item)};
    std::push_heap(heap.begin(), heap.end(), detail::MinKeyFirst{});
    new_jump();
  }

  SampleResult<T> value() const {
    auto out = Base::value();
    out.method = std::string(method_name(method));
    return out;
  }

  static AlgAExpJ merge(std::span<const AlgAExpJ* const> parts, Rng rng) {
    AlgAExpJ out(parts.empty() ? 1 : parts.front()->capacity(), rng);
    std::vector<const Base*> bases;
    for (const AlgAExpJ* p : parts) bases.push_back(p);
    out.absorb(bases);
    if (out.heap_.size() == out.capacity_) out.new_jump();
    return out;
  }

  using Base::capacity;
  using Base::entries;
  using Base::min_log_key;
  using Base::rng;
  using Base::seen;
  using Base::weight_seen;

 private:
  void new_jump() {
    jump_ = std::log(this->rng_.uniform01()) / this->heap_.front().log_key;
    skipped_ = 0.0;
  }

  double jump_ = 0.0;
  double skipped_ = 0.0;
};

/// Weighted reservoir with replacement. After total weight W every slot
/// independently holds element i w.p. w_i / W; the next update happens when
/// the running weight crosses W / u^(1/K).
template <class T>
class AlgWRSWRSKIP {
 public:
  static constexpr ReservoirMethod method = ReservoirMethod::AlgWRSWRSKIP;

  AlgWRSWRSKIP(std::size_t capacity, Rng rng) : capacity_(capacity), rng_(rng) {
    detail::check_capacity(capacity);
  }

  void fit(T item, double weight) {
    detail::check_weight(weight);
    ++seen_;
    weight_seen_ += weight;
    if (seen_ == 1) {
      buffer_.assign(capacity_, std::move(item));
      scratch_.reserve(capacity_);
      new_threshold();
      return;
    }
    if (weight_seen_ < threshold_) return;
    const std::size_t count =
        detail::conditioned_binomial(rng_, capacity_, weight / weight_seen_);
    detail::replace_slots(rng_, buffer_, count, item, scratch_);
    new_threshold();
  }

  SampleResult<T> value() const {
    return {buffer_, std::string(method_name(method)), seen_, weight_seen_};
  }

  static AlgWRSWRSKIP merge(std::span<const AlgWRSWRSKIP* const> parts, Rng rng) {
    detail::check_mergeable(parts);
    AlgWRSWRSKIP out(parts.front()->capacity_, rng);
    std::vector<const std::vector<T>*> buffers;
    std::vector<double> shares;
    for (const AlgWRSWRSKIP* p : parts) {
      buffers.push_back(&p->buffer_);
      shares.push_back(p->weight_seen_);
      out.seen_ += p->seen_;
      out.weight_seen_ += p->weight_seen_;
    }
    out.buffer_ = detail::merge_slots<T>(out.rng_, out.capacity_, buffers, shares);
    if (out.seen_ > 0) {
      out.scratch_.reserve(out.capacity_);
      out.new_threshold();
    }
    return out;
  }

  std::size_t capacity() const { return capacity_; }
  std::uint64_t seen() const { return seen_; }
  double weight_seen() const { return weight_seen_; }
  std::span<const T> items() const { return buffer_; }
  const Rng& rng() const { return rng_; }

 private:
  void new_threshold() {
    threshold_ = weight_seen_ *
                 std::exp(-std::log(rng_.uniform01()) / static_cast<double>(capacity_));
  }

  std::size_t capacity_;
  Rng rng_;
  std::vector<T> buffer_;
  std::vector<std::size_t> scratch_;
  std::uint64_t seen_ = 0;
  double weight_seen_ = 0.0;
  double threshold_ = 0.0;
};

/// Runtime-dispatched reservoir over the six algorithms above.
template <class T>
class ReservoirSampler {
 public:
  ReservoirSampler(ReservoirMethod method, std::size_t capacity, Rng rng)
      : impl_(make(method, capacity, rng)) {}

  ReservoirMethod method() const {
    return std::visit([](const auto& s) { return std::decay_t<decltype(s)>::method; }, impl_);
  }

  void fit(T item) {
    if (is_weighted(method()))
      throw Error(Errc::usage, std::string(method_name(method())) + " needs a weight");
    std::visit(
        [&](auto& s) {
          if constexpr (requires { s.fit(std::move(item)); }) s.fit(std::move(item));
        },
        impl_);
  }

  void fit(T item, double weight) {
    if (!is_weighted(method()))
      throw Error(Errc::usage, std::string(method_name(method())) + " takes no weight");
    std::visit(
        [&](auto& s) {
          if constexpr (requires { s.fit(std::move(item), weight); })
            s.fit(std::move(item), weight);
        },
        impl_);
  }

  SampleResult<T> value() const {
    return std::visit([](const auto& s) { return s.value(); }, impl_);
  }

  // Returns a fresh sampler; the inputs are left untouched.
  static ReservoirSampler merge(std::span<const ReservoirSampler* const> parts, Rng rng) {
    if (parts.empty()) throw Error(Errc::usage, "merge needs at least one sampler");
    const ReservoirMethod m = parts.front()->method();
    for (const ReservoirSampler* p : parts) {
      if (p->method() != m)
        throw Error(Errc::incompatible_sampler, "merge requires the same method");
    }
    return std::visit(
        [&](const auto& first) -> ReservoirSampler {
          using S = std::decay_t<decltype(first)>;
          std::vector<const S*> typed;
          for (const ReservoirSampler* p : parts) typed.push_back(&std::get<S>(p->impl_));
          return ReservoirSampler(FromImpl{}, S::merge(typed, rng));
        },
        parts.front()->impl_);
  }

  static ReservoirSampler merge(const ReservoirSampler& a, const ReservoirSampler& b, Rng rng) {
    const ReservoirSampler* parts[] = {&a, &b};
    return merge(parts, rng);
  }

  std::size_t capacity() const {
    return std::visit([](const auto& s) { return s.capacity(); }, impl_);
  }
  std::uint64_t seen() const {
    return std::visit([](const auto& s) { return s.seen(); }, impl_);
  }
  double weight_seen() const {
    return std::visit([](const auto& s) { return s.weight_seen(); }, impl_);
  }
  const Rng& rng() const {
    return std::visit([](const auto& s) -> const Rng& { return s.rng(); }, impl_);
  }

 private:
  using Impl = std::variant<AlgR<T>, AlgL<T>, AlgRSWRSKIP<T>, AlgARes<T>, AlgAExpJ<T>,
                            AlgWRSWRSKIP<T>>;

  struct FromImpl {};
  ReservoirSampler(FromImpl, Impl impl) : impl_(std::move(impl)) {}

  static Impl make(ReservoirMethod method, std::size_t capacity, Rng rng) {
    switch (method) {
      case ReservoirMethod::AlgR: return AlgR<T>(capacity, rng);
      case ReservoirMethod::AlgL: return AlgL<T>(capacity, rng);
      case ReservoirMethod::AlgRSWRSKIP: return AlgRSWRSKIP<T>(capacity, rng);
      case ReservoirMethod::AlgARes: return AlgARes<T>(capacity, rng);
      case ReservoirMethod::AlgAExpJ: return AlgAExpJ<T>(capacity, rng);
      case ReservoirMethod::AlgWRSWRSKIP: return AlgWRSWRSKIP<T>(capacity, rng);
    }
    throw Error(Errc::usage, "unknown reservoir method");
  }

  Impl impl_;
};

}  // namespace streamsampling
