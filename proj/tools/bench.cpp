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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bench_suite.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace streamsampling;

  CLI::App app{"Compares population, reservoir and sequential sampling on a synthetic stream."};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run the suite and write results.csv plus one SVG per scenario");
  std::uint64_t n = 10000000;
  int reps = 20;
  std::uint64_t seed = 1;
  std::string out_dir = "report";
  std::vector<std::uint64_t> ks;
  run->add_option("--n", n, "stream length")->check(CLI::PositiveNumber);
  run->add_option("--reps", reps, "repetitions per cell; the median is reported")
      ->check(CLI::PositiveNumber);
  run->add_option("--k", ks, "sample sizes (default N/1e4, N/1e3, N/1e2, N/10)");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (ks.empty()) ks = bench::default_k_grid(n);
  std::vector<bench::BenchRow> rows;
  try {
    rows = bench::run_suite(n, ks, reps, seed);
  } catch (const Error& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const fs::path dir(out_dir);
  {
    std::ofstream csv(dir / "results.csv");
    bench::write_csv(csv, rows);
    if (!csv) {
      std::cerr << "bench: cannot write " << (dir / "results.csv").string() << '\n';
      return 1;
    }
  }
  for (auto s : bench::kScenarios) {
    const std::string name = bench::scenario_name(s);
    std::ofstream svg(dir / ("fig_iter_" + name + ".svg"));
    bench::write_svg(svg, rows, name);
  }

  std::printf("%-20s %-24s %-14s %12s %12s %16s\n", "scenario", "strategy", "method", "k",
              "median_ms", "peak_aux_bytes");
  for (const auto& r : rows) {
    std::printf("%-20s %-24s %-14s %12llu %12.3f %16llu\n", r.scenario.c_str(),
                r.strategy.c_str(), r.method.c_str(), static_cast<unsigned long long>(r.k),
                r.median_ms, static_cast<unsigned long long>(r.peak_aux_bytes));
  }
  return 0;
}
