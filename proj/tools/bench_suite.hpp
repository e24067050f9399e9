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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <streamsampling/streamsampling.hpp>

#include "alloc_counter.hpp"

namespace streamsampling::bench {

template <class T>
inline void do_not_optimize(const T& value) {
  asm volatile("" : : "r,m"(value) : "memory");
}

// Lazy source of 1..n. Deliberately not a sized range so samplers that need
// the length must be told it, or count it themselves.
class Generator {
 public:
  class iterator {
   public:
    using value_type = std::uint64_t;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(std::uint64_t x, std::uint64_t n) : x_(x), n_(n) {}
    std::uint64_t operator*() const { return x_; }
    iterator& operator++() {
      ++x_;
      asm volatile("" : "+r"(x_));
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) { return it.x_ > it.n_; }

   private:
    std::uint64_t x_ = 1;
    std::uint64_t n_ = 0;
  };

  explicit Generator(std::uint64_t n) : n_(n) {}
  iterator begin() const { return iterator(1, n_); }
  std::default_sentinel_t end() const { return {}; }

 private:
  std::uint64_t n_;
};

inline double weight_of(std::uint64_t x) {
  constexpr double kPhi = 0.6180339887498949;
  const double f = static_cast<double>(x) * kPhi;
  return 0.5 + (f - std::floor(f));
}

enum class Scenario { unweighted_without, unweighted_with, weighted_without, weighted_with };

inline constexpr Scenario kScenarios[] = {Scenario::unweighted_without, Scenario::unweighted_with,
                                          Scenario::weighted_without, Scenario::weighted_with};

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::unweighted_without: return "unweighted_without";
    case Scenario::unweighted_with: return "unweighted_with";
    case Scenario::weighted_without: return "weighted_without";
    case Scenario::weighted_with: return "weighted_with";
  }
  return "?";
}

inline bool weighted(Scenario s) {
  return s == Scenario::weighted_without || s == Scenario::weighted_with;
}

struct BenchRow {
  std::string scenario;
  std::string strategy;
  std::string method;
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  int reps = 0;
  double median_ms = 0;
  std::uint64_t peak_aux_bytes = 0;
};

namespace detail {

using Clock = std::chrono::steady_clock;

// Whatever a strategy ends up with gets folded into this so the work is kept.
inline std::uint64_t g_sink = 0;

inline std::uint64_t population(Scenario s, std::uint64_t n, std::uint64_t k, Rng& rng) {
  std::vector<std::uint64_t> items;
  for (auto x : Generator(n)) items.push_back(x);
  std::uint64_t acc = 0;
  switch (s) {
    case Scenario::unweighted_without:
      for (std::uint64_t i = 0; i < k; ++i) {
        const auto j = i + rng.uniform_index(n - i);
        std::swap(items[i], items[j]);
        acc += items[i];
      }
      break;
    case Scenario::unweighted_with:
      for (std::uint64_t i = 0; i < k; ++i) acc += items[rng.uniform_index(n)];
      break;
    case Scenario::weighted_without: {
      std::vector<std::pair<double, std::uint64_t>> keyed;
      keyed.reserve(items.size());
      for (auto x : items) keyed.emplace_back(std::log(rng.uniform01()) / weight_of(x), x);
      std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k - 1),
                       keyed.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::uint64_t i = 0; i < k; ++i) acc += keyed[i].second;
      break;
    }
    case Scenario::weighted_with: {
      std::vector<double> cumulative;
      cumulative.reserve(items.size());
      double total = 0;
      for (auto x : items) cumulative.push_back(total += weight_of(x));
      for (std::uint64_t i = 0; i < k; ++i) {
        const double t = rng.uniform01() * total;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), t);
        if (it == cumulative.end()) --it;
        acc += items[static_cast<std::size_t>(it - cumulative.begin())];
      }
      break;
    }
  }
  return acc;
}

template <class Sampler>
std::uint64_t drain_reservoir(Sampler sampler, std::uint64_t n) {
  for (auto x : Generator(n)) {
    if constexpr (requires { sampler.fit(x, 1.0); }) {
      sampler.fit(x, weight_of(x));
    } else {
      sampler.fit(x);
    }
  }
  std::uint64_t acc = 0;
  for (auto x : sampler.value().items) acc += x;
  return acc;
}

inline ReservoirMethod reservoir_method(Scenario s) {
  switch (s) {
    case Scenario::unweighted_without: return ReservoirMethod::AlgL;
    case Scenario::unweighted_with: return ReservoirMethod::AlgRSWRSKIP;
    case Scenario::weighted_without: return ReservoirMethod::AlgAExpJ;
    case Scenario::weighted_with: return ReservoirMethod::AlgWRSWRSKIP;
  }
  return ReservoirMethod::AlgL;
}

inline std::uint64_t reservoir(Scenario s, std::uint64_t n, std::uint64_t k, Rng rng) {
  const auto kk = static_cast<std::size_t>(k);
  switch (s) {
    case Scenario::unweighted_without: return drain_reservoir(AlgL<std::uint64_t>(kk, rng), n);
    case Scenario::unweighted_with:
      return drain_reservoir(AlgRSWRSKIP<std::uint64_t>(kk, rng), n);
    case Scenario::weighted_without:
      return drain_reservoir(AlgAExpJ<std::uint64_t>(kk, rng), n);
    case Scenario::weighted_with:
      return drain_reservoir(AlgWRSWRSKIP<std::uint64_t>(kk, rng), n);
  }
  return 0;
}

inline const char* sequential_method(Scenario s) {
  switch (s) {
    case Scenario::unweighted_without: return "AlgD";
    case Scenario::unweighted_with: return "AlgORDSWR";
    case Scenario::weighted_with: return "AlgORDWSWR";
    case Scenario::weighted_without: break;
  }
  return "";
}

template <class Sampler>
std::uint64_t drain_sequential(Sampler& sampler) {
  std::uint64_t acc = 0;
  for (const auto& e : sampler) acc += e.item * e.multiplicity;
  return acc;
}

// With n_known the length (or known_weight) is handed over up front, as a
// caller holding metadata would. Otherwise a first traversal of a fresh
// generator measures it.
inline std::uint64_t sequential(Scenario s, std::uint64_t n, std::uint64_t k, Rng rng,
                                bool n_known, double known_weight) {
  Generator gen(n);
  if (s == Scenario::weighted_with) {
    double total = known_weight;
    if (!n_known) {
      total = 0;
      for (auto x : Generator(n)) total += weight_of(x);
    }
    auto sampler = make_weighted_sequential_sampler(gen, k, total, rng, weight_of);
    return drain_sequential(sampler);
  }
  std::uint64_t len = n;
  if (!n_known) {
    len = 0;
    for (auto x : Generator(n)) {
      do_not_optimize(x);
      ++len;
    }
  }
  const auto m =
      s == Scenario::unweighted_without ? SequentialMethod::AlgD : SequentialMethod::AlgORDSWR;
  auto sampler = make_sequential_sampler(gen, m, k, len, rng);
  return drain_sequential(sampler);
}

inline double total_weight(std::uint64_t n) {
  double total = 0;
  for (auto x : Generator(n)) total += weight_of(x);
  return total;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace detail

inline std::vector<std::uint64_t> default_k_grid(std::uint64_t n) {
  std::vector<std::uint64_t> ks;
  for (std::uint64_t d : {10000, 1000, 100, 10}) ks.push_back(std::max<std::uint64_t>(1, n / d));
  return ks;
}

// Rows come out scenario-major, then strategy, then K in the given order.
// Memory is the allocator high-water mark above the level before the run,
// so it covers every auxiliary structure the strategy builds, outputs
// included, and nothing the generator does (it allocates nothing).
inline std::vector<BenchRow> run_suite(std::uint64_t n, const std::vector<std::uint64_t>& ks,
                                       int reps, std::uint64_t seed = 1) {
  if (ks.empty() || reps < 1) throw Error(Errc::usage, "need at least one K and one rep");
  const auto kmax = *std::max_element(ks.begin(), ks.end());
  if (kmax == 0 || n < kmax * 10)
    throw Error(Errc::usage, "stream size must be at least ten times the largest K");
  const double total = detail::total_weight(n);

  std::vector<BenchRow> rows;
  for (Scenario s : kScenarios) {
    struct Strategy {
      const char* name;
      std::string method;
      std::function<std::uint64_t(std::uint64_t, Rng)> run;
    };
    std::vector<Strategy> strategies;
    strategies.push_back({"population-materialize", "materialize",
                          [&](std::uint64_t k, Rng rng) { return detail::population(s, n, k, rng); }});
    strategies.push_back({"reservoir", std::string(method_name(detail::reservoir_method(s))),
                          [&](std::uint64_t k, Rng rng) { return detail::reservoir(s, n, k, rng); }});
    if (s != Scenario::weighted_without) {
      strategies.push_back({"sequential-one-pass", detail::sequential_method(s),
                            [&](std::uint64_t k, Rng rng) {
                              return detail::sequential(s, n, k, rng, true, total);
                            }});
      strategies.push_back({"sequential-two-pass", detail::sequential_method(s),
                            [&](std::uint64_t k, Rng rng) {
                              return detail::sequential(s, n, k, rng, false, 0.0);
                            }});
    }
    // Reps of a cell's strategies are interleaved so slow drift in machine
    // speed lands on all of them alike.
    const std::size_t m = strategies.size();
    std::vector<std::vector<std::vector<double>>> ms(m, std::vector<std::vector<double>>(ks.size()));
    std::vector<std::vector<std::uint64_t>> peak(m, std::vector<std::uint64_t>(ks.size(), 0));
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      for (int r = 0; r < reps; ++r) {
        for (std::size_t si = 0; si < m; ++si) {
          Rng rng(seed + static_cast<std::uint64_t>(r));
          alloc_counter::Scope scope;
          const auto t0 = detail::Clock::now();
          detail::g_sink += strategies[si].run(ks[ki], rng);
          const auto t1 = detail::Clock::now();
          peak[si][ki] = std::max(peak[si][ki], scope.peak_above_base());
          ms[si][ki].push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
      }
    }
    do_not_optimize(detail::g_sink);
    for (std::size_t si = 0; si < m; ++si) {
      for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        rows.push_back({scenario_name(s), strategies[si].name, strategies[si].method, n, ks[ki],
                        reps, detail::median(ms[si][ki]), peak[si][ki]});
      }
    }
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "scenario,strategy,method,n,k,reps,median_ms,peak_aux_bytes\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.strategy << ',' << r.method << ',' << r.n << ',' << r.k << ','
        << r.reps << ',' << r.median_ms << ',' << r.peak_aux_bytes << '\n';
  }
}

namespace detail {

struct Axis {
  double lo, hi;
  double map(double v, double a, double b) const {
    const double t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return a + t * (b - a);
  }
};

inline Axis log_axis(double lo, double hi) {
  lo = std::pow(10.0, std::floor(std::log10(std::max(lo, 1e-6))));
  hi = std::pow(10.0, std::ceil(std::log10(std::max(hi, lo * 10))));
  if (hi <= lo) hi = lo * 10;
  return {lo, hi};
}

inline const char* kColors[] = {"#1b6ca8", "#d1495b", "#2e8540", "#8e5ea2"};

}  // namespace detail

// Two log-log panels, time and memory against K, one line per strategy.
inline void write_svg(std::ostream& out, const std::vector<BenchRow>& rows,
                      const std::string& scenario) {
  std::vector<const BenchRow*> mine;
  std::vector<std::string> strategies;
  for (const auto& r : rows) {
    if (r.scenario != scenario) continue;
    mine.push_back(&r);
    if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end())
      strategies.push_back(r.strategy);
  }
  const double panel_w = 420, panel_h = 300, left = 70, top = 40, gap = 90;
  const double width = left + 2 * panel_w + gap + 30, height = top + panel_h + 110;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"22\" font-size=\"15\">" << scenario;
  if (!mine.empty()) out << ", N = " << mine.front()->n;
  out << "</text>\n";
  if (mine.empty()) {
    out << "</svg>\n";
    return;
  }

  double kmin = 1e300, kmax = 0, tmin = 1e300, tmax = 0, mmin = 1e300, mmax = 0;
  for (const auto* r : mine) {
    kmin = std::min(kmin, double(r->k));
    kmax = std::max(kmax, double(r->k));
    tmin = std::min(tmin, std::max(r->median_ms, 1e-3));
    tmax = std::max(tmax, std::max(r->median_ms, 1e-3));
    mmin = std::min(mmin, std::max(double(r->peak_aux_bytes), 1.0));
    mmax = std::max(mmax, std::max(double(r->peak_aux_bytes), 1.0));
  }
  const auto kx = detail::log_axis(kmin, kmax);

  auto panel = [&](double x0, const char* title, const detail::Axis& ya, auto value) {
    const double x1 = x0 + panel_w, y0 = top + panel_h, y1 = top;
    out << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << panel_w << "\" height=\""
        << panel_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << y1 - 6
        << "\" text-anchor=\"middle\">" << title << "</text>\n";
    for (double v = kx.lo; v <= kx.hi * 1.0001; v *= 10) {
      const double x = kx.map(v, x0, x1);
      out << "<line x1=\"" << x << "\" y1=\"" << y0 << "\" x2=\"" << x << "\" y2=\"" << y1
          << "\" stroke=\"#ddd\"/>\n<text x=\"" << x << "\" y=\"" << y0 + 16
          << "\" text-anchor=\"middle\">1e" << std::lround(std::log10(v)) << "</text>\n";
    }
    for (double v = ya.lo; v <= ya.hi * 1.0001; v *= 10) {
      const double y = ya.map(v, y0, y1);
      out << "<line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << x1 << "\" y2=\"" << y
          << "\" stroke=\"#ddd\"/>\n<text x=\"" << x0 - 6 << "\" y=\"" << y + 4
          << "\" text-anchor=\"end\">1e" << std::lround(std::log10(v)) << "</text>\n";
    }
    out << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << y0 + 34
        << "\" text-anchor=\"middle\">sample size K</text>\n";
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      std::ostringstream pts;
      for (const auto* r : mine) {
        if (r->strategy != strategies[i]) continue;
        pts << kx.map(double(r->k), x0, x1) << ',' << ya.map(value(*r), y0, y1) << ' ';
      }
      const char* c = detail::kColors[i % 4];
      out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\""
          << pts.str() << "\"/>\n";
    }
  };
  panel(left, "median time (ms)", detail::log_axis(tmin, tmax),
        [](const BenchRow& r) { return std::max(r.median_ms, 1e-3); });
  panel(left + panel_w + gap, "peak auxiliary memory (bytes)", detail::log_axis(mmin, mmax),
        [](const BenchRow& r) { return std::max(double(r.peak_aux_bytes), 1.0); });

  for (std::size_t i = 0; i < strategies.size(); ++i) {
    const double x = left + double(i % 2) * 260, y = top + panel_h + 62 + double(i / 2) * 20;
    out << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 24 << "\" y2=\""
        << y - 4 << "\" stroke=\"" << detail::kColors[i % 4] << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << x + 30 << "\" y=\"" << y << "\">" << strategies[i] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace streamsampling::bench
