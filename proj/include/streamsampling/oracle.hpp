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

// Brute-force sampling laws and goodness-of-fit tests. Everything here is
// computed by enumeration, independently of the samplers it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "streamsampling/error.hpp"

namespace streamsampling::oracle {

// Sorted item indices: a set (without replacement) or multiset (with).
using Outcome = std::vector<int>;
using Counts = std::map<Outcome, std::uint64_t>;

struct ExactLaw {
  std::map<Outcome, double> probability;

  double total() const {
    double s = 0.0;
    for (const auto& [o, p] : probability) s += p;
    return s;
  }

  // P(item in outcome), counting multiplicity for multisets.
  double expected_count(int item) const {
    double s = 0.0;
    for (const auto& [o, p] : probability)
      s += p * static_cast<double>(std::count(o.begin(), o.end(), item));
    return s;
  }
};

inline constexpr std::size_t kMaxOracleItems = 8;

namespace detail {

inline void check_size(std::size_t items, std::size_t k) {
  if (items > kMaxOracleItems || k > kMaxOracleItems)
    throw Error(Errc::oracle_capacity, "exact enumeration is limited to 8 items and K <= 8");
}

inline void successive_draws(std::span<const double> weights, std::size_t k,
                             std::vector<bool>& used, std::vector<int>& drawn, double remaining,
                             double prob, ExactLaw& law) {
  if (drawn.size() == k) {
    Outcome o = drawn;
    std::sort(o.begin(), o.end());
    law.probability[o] += prob;
    return;
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    drawn.push_back(static_cast<int>(i));
    successive_draws(weights, k, used, drawn, remaining - weights[i],
                     prob * weights[i] / remaining, law);
    drawn.pop_back();
    used[i] = false;
  }
}

inline void independent_draws(std::span<const double> weights, std::size_t k, double total,
                              std::vector<int>& drawn, double prob, ExactLaw& law) {
  if (drawn.size() == k) {
    Outcome o = drawn;
    std::sort(o.begin(), o.end());
    law.probability[o] += prob;
    return;
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    drawn.push_back(static_cast<int>(i));
    independent_draws(weights, k, total, drawn, prob * weights[i] / total, law);
    drawn.pop_back();
  }
}

}  // namespace detail

/// Law of the unordered K-set produced by K successive weighted draws, each
/// renormalized over the items not yet drawn.
inline ExactLaw exact_law_without_replacement(std::span<const double> weights, std::size_t k) {
  detail::check_size(weights.size(), k);
  if (k > weights.size()) throw Error(Errc::invalid_request, "K exceeds the number of items");
  ExactLaw law;
  std::vector<bool> used(weights.size(), false);
  std::vector<int> drawn;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  detail::successive_draws(weights, k, used, drawn, total, 1.0, law);
  return law;
}

inline ExactLaw exact_law_without_replacement_uniform(std::size_t n, std::size_t k) {
  const std::vector<double> ones(n, 1.0);
  return exact_law_without_replacement(ones, k);
}

/// Law of the multiset of K iid draws with P(i) = w_i / sum(w).
inline ExactLaw exact_law_with_replacement(std::span<const double> weights, std::size_t k) {
  detail::check_size(weights.size(), k);
  ExactLaw law;
  std::vector<int> drawn;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  detail::independent_draws(weights, k, total, drawn, 1.0, law);
  return law;
}

inline ExactLaw exact_law_with_replacement_uniform(std::size_t n, std::size_t k) {
  const std::vector<double> ones(n, 1.0);
  return exact_law_with_replacement(ones, k);
}

/// Runs `trial(seed)` for seeds first_seed .. first_seed+trials-1 and tallies
/// the (sorted) outcomes.
template <class Trial>
Counts empirical_law(Trial&& trial, std::uint64_t trials, std::uint64_t first_seed = 0) {
  Counts counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Outcome o = std::invoke(trial, first_seed + t);
    std::sort(o.begin(), o.end());
    ++counts[o];
  }
  return counts;
}

inline double chi_square_critical(std::size_t df, double alpha) {
  boost::math::chi_squared dist(static_cast<double>(df));
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

struct ChiSquareResult {
  bool pass = true;
  double statistic = 0.0;
  std::size_t df = 0;
  double critical = 0.0;
  std::uint64_t trials = 0;
};

/// Pearson goodness of fit of `observed` against `law`. Outcomes with an
/// expected count below 5 are pooled; an outcome the law gives probability 0
/// fails the test outright.
inline ChiSquareResult chi_square_test(const Counts& observed, const ExactLaw& law,
                                       double alpha) {
  ChiSquareResult r;
  for (const auto& [o, c] : observed) r.trials += c;
  for (const auto& [o, c] : observed) {
    auto it = law.probability.find(o);
    if (it == law.probability.end() || it->second <= 0.0) {
      r.pass = false;
      r.statistic = INFINITY;
      return r;
    }
  }
  const double n = static_cast<double>(r.trials);
  struct Bin {
    double expected;
    double observed;
  };
  std::vector<Bin> bins;
  Bin pooled{0.0, 0.0};
  for (const auto& [o, p] : law.probability) {
    const auto it = observed.find(o);
    const double obs = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    if (n * p < 5.0) {
      pooled.expected += n * p;
      pooled.observed += obs;
    } else {
      bins.push_back({n * p, obs});
    }
  }
  if (pooled.expected > 0.0) {
    if (pooled.expected >= 5.0 || bins.empty()) {
      bins.push_back(pooled);
    } else {
      auto smallest = std::min_element(bins.begin(), bins.end(), [](const Bin& a, const Bin& b) {
        return a.expected < b.expected;
      });
      smallest->expected += pooled.expected;
      smallest->observed += pooled.observed;
    }
  }
  if (bins.size() <= 1) return r;
  for (const Bin& b : bins) {
    const double d = b.observed - b.expected;
    r.statistic += d * d / b.expected;
  }
  r.df = bins.size() - 1;
  r.critical = chi_square_critical(r.df, alpha);
  r.pass = r.statistic <= r.critical;
  return r;
}

/// chi_square_test over `trials` seeded runs, rerun once on a fresh seed
/// block if the first block fails.
template <class Trial>
ChiSquareResult chi_square_with_reseed(Trial&& trial, const ExactLaw& law,
                                       std::uint64_t trials, double alpha,
                                       std::uint64_t seed_base = 0) {
  auto r = chi_square_test(empirical_law(trial, trials, seed_base), law, alpha);
  if (r.pass) return r;
  return chi_square_test(empirical_law(trial, trials, seed_base + trials), law, alpha);
}

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
template <class Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = std::invoke(cdf, samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

// Asymptotic critical value; fine for the sample sizes used here (>= 10^4).
inline double ks_critical(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0) / static_cast<double>(n));
}

}  // namespace streamsampling::oracle
