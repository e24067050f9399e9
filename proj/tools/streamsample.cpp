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
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "line_sampler.hpp"
#include "verify_matrix.hpp"

namespace {

int run_verify(std::uint64_t trials) {
  using namespace streamsampling;
  int failures = 0;
  std::printf("%-18s %-16s %-26s %10s %4s %9s  %s\n", "group", "sampler", "instance", "chi2", "df",
              "critical", "result");
  for (const auto& check : verify::standard_checks()) {
    const auto r = verify::run_check(check, trials);
    failures += !r.chi.pass;
    std::printf("%-18s %-16s %-26s %10.3f %4zu %9.3f  %s\n", r.group.c_str(), r.sampler.c_str(),
                r.instance.c_str(), r.chi.statistic, r.chi.df, r.chi.critical,
                r.chi.pass ? "PASS" : "FAIL");
  }
  std::printf("%d failing row(s)\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  using streamsampling::cli::CliConfig;
  CLI::App app{"Sample lines from files or standard input in a single pass."};
  app.require_subcommand(0, 1);

  CliConfig cfg;
  std::optional<std::uint64_t> seed;
  std::string delimiter = "\t";
  app.add_option("files", cfg.inputs, "Input files ('-' or none for stdin)");
  auto* num = app.add_option("-n,--num", cfg.k, "Sample size K");
  app.add_flag("--replace", cfg.replace, "Sample with replacement");
  app.add_option("--weight-field", cfg.weight_field, "1-based column holding the line weight");
  app.add_option("--delimiter", delimiter, "Field delimiter (single byte, default TAB)");
  app.add_option("--total", cfg.total, "Declared number of lines: sample sequentially");
  app.add_option("--total-weight", cfg.total_weight,
                 "Declared total weight: sample sequentially (with --replace)");
  app.add_option("--method", cfg.method, "Override the sampling algorithm (e.g. AlgR, AlgD)");
  app.add_option("--seed", seed, "Random seed (default: nondeterministic)");
  app.add_flag("--header", cfg.header, "Pass the first line through and do not sample it");
  app.add_flag("--stable", cfg.stable, "Reservoir mode: print the sample in input order");

  auto* verify = app.add_subcommand("verify", "Run the statistical verification matrix");
  std::uint64_t trials = 100000;
  verify->add_option("--trials", trials, "Seeded trials per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : streamsampling::cli::kFailure;
  }

  if (verify->parsed()) return run_verify(trials);

  if (num->count() == 0) {
    std::cerr << "error: -n/--num is required\n";
    return streamsampling::cli::kFailure;
  }
  if (delimiter.size() != 1) {
    std::cerr << "error: --delimiter must be a single byte\n";
    return streamsampling::cli::kFailure;
  }
  cfg.delimiter = delimiter[0];
  cfg.seed = seed ? *seed : std::random_device{}() * 0x100000001ULL ^ std::random_device{}();

  std::ios::sync_with_stdio(false);
  return streamsampling::cli::run(cfg, std::cin, std::cout, std::cerr);
}
