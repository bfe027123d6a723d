// Copyright 2026 The Authors.
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
//
// Command-line front end. Exit codes: 0 success, 2 input/config validation
// error, 3 engine precondition failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arrmin/runner.hpp"

namespace {

void add_common_options(CLI::App* cmd, arrmin::RunConfig& config, bool needs_input) {
  if (needs_input)
    cmd->add_option("--input", config.input, "dataset CSV (header id,x1,...,xd)")->required();
  cmd->add_option("--utilities", config.utilities,
                  "utility matrix CSV (header prob,u1,...,un) for --dist table");
  cmd->add_option("--dist", config.dist, "uniform-linear | gmm:<json> | table");
  cmd->add_option("--k", config.k, "output set size");
  cmd->add_option("--epsilon", config.epsilon, "sampling error parameter in (0,1]");
  cmd->add_option("--sigma", config.sigma, "sampling confidence parameter in (0,1]");
  cmd->add_option("--seed", config.seed, "64-bit sampling seed");
  cmd->add_option("--percentiles", config.percentiles, "regret-ratio percentiles to report")
      ->delimiter(',');
  cmd->add_option("--threads", config.threads, "worker threads (0 = all cores)");
  cmd->add_option("--output", config.output, "report path (default: stdout)");
  cmd->add_option("--limit", config.limit, "max subsets the brute-force oracle may enumerate");
}

void emit(const arrmin::Json& report, const std::string& path) {
  if (path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw arrmin::ValidationError("cannot write report to " + path);
  out << report.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-point selection minimizing the average regret ratio"};
  app.require_subcommand(1);

  arrmin::RunConfig config;

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset CSV");
  gen->add_option("--n", config.gen_n, "number of points")->required();
  gen->add_option("--d", config.gen_d, "dimensions")->required();
  gen->add_option("--kind", config.gen_kind, "uniform | correlated | anticorrelated");
  gen->add_option("--seed", config.seed, "generator seed")->required();
  gen->add_option("--output", config.output, "destination CSV")->required();

  CLI::App* select = app.add_subcommand("select", "greedy selection of k points");
  add_common_options(select, config, true);
  select->add_flag("--no-lazy{false}", config.lazy, "disable lazy candidate re-evaluation");
  select->add_flag("--bound", config.with_bound, "report steepness and the greedy bound");

  CLI::App* dp = app.add_subcommand("dp2d", "exact 2-d solver (uniform linear utilities)");
  add_common_options(dp, config, true);

  CLI::App* brute = app.add_subcommand("brute", "brute-force optimal subset");
  add_common_options(brute, config, true);

  CLI::App* eval = app.add_subcommand("eval", "score a given solution set");
  add_common_options(eval, config, true);
  eval->add_option("--ids", config.ids, "point ids of the solution to score")
      ->delimiter(',')
      ->required();

  CLI::App* compare = app.add_subcommand("compare", "run all applicable engines side by side");
  add_common_options(compare, config, true);
  compare->add_flag("--no-lazy{false}", config.lazy, "disable lazy candidate re-evaluation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  config.command = app.get_subcommands().front()->get_name();
  try {
    const arrmin::Json report = arrmin::run(config);
    emit(report, config.command == "gen" ? std::string() : config.output);
    return 0;
  } catch (const arrmin::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const arrmin::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
