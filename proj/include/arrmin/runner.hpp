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

#ifndef ARRMIN_RUNNER_HPP_
#define ARRMIN_RUNNER_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arrmin/core.hpp"
#include "arrmin/distributions.hpp"
#include "arrmin/dp2d.hpp"
#include "arrmin/greedy.hpp"
#include "arrmin/io.hpp"
#include "arrmin/metrics.hpp"
#include "arrmin/oracle.hpp"
#include "arrmin/parallel.hpp"

namespace arrmin {

using Json = nlohmann::ordered_json;

/// Parsed command-line invocation. One struct serves every subcommand; the
/// dispatcher checks the fields the chosen command actually needs.
struct RunConfig {
  std::string command;  // gen | select | dp2d | brute | eval | compare
  std::string input;
  std::string utilities;              // CSV for --dist table
  std::string dist = "uniform-linear";  // uniform-linear | gmm:<file> | table
  int k = 1;
  double epsilon = 0.05;
  double sigma = 0.1;
  std::optional<std::uint64_t> seed;
  bool lazy = true;
  bool with_bound = false;  // adds steepness diagnostics to greedy reports
  std::vector<double> percentiles{50.0, 90.0, 99.0, 100.0};
  int threads = 0;  // 0: all cores
  std::string output;  // report path; empty = stdout
  std::uint64_t limit = kDefaultOracleLimit;
  std::vector<int> ids;  // eval: the solution to score
  // gen only
  int gen_n = 0;
  int gen_d = 0;
  std::string gen_kind = "uniform";

  void validate() const {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (!(epsilon > 0.0) || epsilon > 1.0 || !(sigma > 0.0) || sigma > 1.0)
      throw ValidationError("epsilon and sigma must lie in (0, 1]");
    for (double q : percentiles)
      if (!(q >= 0.0) || q > 100.0) throw ValidationError("percentiles must lie in [0, 100]");
    if (threads < 0) throw ValidationError("threads must be >= 0");
  }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Evaluation {
  ArrEvaluator evaluator;
  std::string mode;  // "exact-discrete" or "sampled"
  std::uint64_t sample_count = 0;  // 0 for exact
  // Kept alive for the evaluator's lifetime.
  std::shared_ptr<DiscreteDistribution> discrete;
  std::shared_ptr<SampleSet> samples;
};

/// Builds the evaluation backend a config asks for: the exact table for a
/// discrete distribution, otherwise a seeded sample of size
/// sample_size(epsilon, sigma).
inline Evaluation build_evaluation(const RunConfig& config, const Dataset& dataset) {
  if (config.dist == "table") {
    if (config.utilities.empty())
      throw ValidationError("--dist table requires --utilities <csv>");
    auto dist = std::make_shared<DiscreteDistribution>(
        load_utility_matrix(config.utilities, dataset));
    ArrEvaluator eval(dataset, *dist);
    return Evaluation{std::move(eval), "exact-discrete", 0, dist, nullptr};
  }
  if (!config.seed)
    throw ValidationError("--seed is required when the distribution is sampled");
  const std::uint64_t n = sample_size(SamplingParams(config.epsilon, config.sigma));
  std::shared_ptr<SampleSet> samples;
  if (config.dist == "uniform-linear") {
    samples = std::make_shared<SampleSet>(draw_samples(
        ContinuousLinearSpec::uniform_box(dataset.dim()), n, *config.seed, dataset));
  } else if (config.dist.rfind("gmm:", 0) == 0) {
    const ContinuousLinearSpec spec = load_gmm_spec(config.dist.substr(4));
    if (spec.dim() != dataset.dim())
      throw ValidationError("gmm dimension does not match the dataset");
    samples = std::make_shared<SampleSet>(draw_samples(spec, n, *config.seed, dataset));
  } else {
    throw ValidationError("unknown --dist value: " + config.dist);
  }
  ArrEvaluator eval(dataset, *samples);
  return Evaluation{std::move(eval), "sampled", n, nullptr, samples};
}

inline Json config_echo(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["input"] = c.input;
  if (!c.utilities.empty()) j["utilities"] = c.utilities;
  j["dist"] = c.dist;
  j["k"] = c.k;
  j["epsilon"] = c.epsilon;
  j["sigma"] = c.sigma;
  if (c.seed) j["seed"] = *c.seed;
  j["lazy"] = c.lazy;
  j["percentiles"] = c.percentiles;
  j["threads"] = c.threads;
  j["limit"] = c.limit;
  if (!c.ids.empty()) j["ids"] = c.ids;
  return j;
}

/// arr/vrr/stddev/percentile block for a solution under an evaluation.
inline Json solution_metrics(const Evaluation& ev, const SolutionSet& solution,
                             const std::vector<double>& qs) {
  Json j;
  const std::vector<double> rr = ev.evaluator.regret_ratios(solution);
  const double arr = ev.evaluator.arr_of_weighted(rr);
  const double vrr = ev.evaluator.vrr_of_weighted(rr);
  j["solution"] = solution.members();
  j["arr"] = arr;
  j["vrr"] = vrr;
  j["stddev_rr"] = std::sqrt(vrr);
  const std::vector<double> ps = weighted_percentiles(rr, ev.evaluator.weights(), qs);
  Json pj;
  for (std::size_t i = 0; i < qs.size(); ++i)
    pj[format_double(qs[i])] = ps[i];
  j["rr_percentiles"] = std::move(pj);
  j["percentile_rule"] = "nearest-rank-ceil";
  return j;
}

inline void attach_recheck(Json& j, const Evaluation& ev, const SolutionSet& solution) {
  const double again = recheck(solution, ev.evaluator);
  j["arr_recheck"] = again;
  if (std::abs(again - j["arr"].get<double>()) > 1e-12)
    throw std::logic_error("report arr does not match its from-scratch re-evaluation");
}

}  // namespace detail

inline Json run_gen(const RunConfig& config) {
  if (config.output.empty()) throw ValidationError("gen requires --output <csv>");
  if (!config.seed) throw ValidationError("gen requires --seed");
  const auto t0 = detail::Clock::now();
  int dropped = 0;
  const Dataset ds = generate_synthetic(config.gen_n, config.gen_d,
                                        synthetic_kind_from_string(config.gen_kind),
                                        *config.seed, &dropped);
  write_dataset_csv(ds, config.output);
  Json report;
  report["schema_version"] = 1;
  report["config"] = detail::config_echo(config);
  report["config"]["n"] = config.gen_n;
  report["config"]["d"] = config.gen_d;
  report["config"]["kind"] = config.gen_kind;
  report["rng"] = kRngDescription;
  report["points_written"] = ds.size();
  report["duplicates_dropped"] = dropped;
  report["output"] = config.output;
  report["preprocessing_seconds"] = 0.0;
  report["query_seconds"] = detail::seconds_since(t0);
  return report;
}

inline Json run_select(const RunConfig& config) {
  if (config.input.empty()) throw ValidationError("select requires --input <csv>");
  const auto t0 = detail::Clock::now();
  const LoadedDataset loaded = load_dataset(config.input);
  detail::Evaluation ev = detail::build_evaluation(config, loaded.dataset);
  const double prep = detail::seconds_since(t0);

  const auto t1 = detail::Clock::now();
  GreedyOptions options;
  options.lazy = config.lazy;
  options.threads = config.threads > 0 ? config.threads : default_thread_count();
  const GreedyReport greedy = greedy_shrink(ev.evaluator, config.k, options);
  const double query = detail::seconds_since(t1);

  Json report;
  report["schema_version"] = 1;
  report["config"] = detail::config_echo(config);
  report["algorithm"] = config.lazy ? "greedy-shrink-lazy" : "greedy-shrink-eager";
  report["rng"] = kRngDescription;
  report["n_points"] = loaded.dataset.size();
  report["dim"] = loaded.dataset.dim();
  report["duplicates_dropped"] = loaded.duplicates_dropped;
  report["evaluation"] = ev.mode;
  if (ev.sample_count > 0) report["sample_count"] = ev.sample_count;
  report.update(detail::solution_metrics(ev, greedy.solution, config.percentiles));
  detail::attach_recheck(report, ev, greedy.solution);
  Json trace = Json::array();
  for (const RemovalStep& step : greedy.trace)
    trace.push_back(Json{{"removed", step.removed_id}, {"arr", step.arr_after}});
  report["trace"] = std::move(trace);
  report["counters"] = Json{
      {"points_evaluated_fraction", greedy.points_evaluated_fraction},
      {"samples_rescanned_fraction", greedy.samples_rescanned_fraction}};
  if (config.with_bound) {
    const Steepness st = steepness(ev.evaluator);
    report["steepness"] = st.s;
    report["steepness_t"] = std::isinf(st.t) ? Json() : Json(st.t);
    report["bound"] = std::isinf(st.bound) ? Json() : Json(st.bound);
  }
  report["preprocessing_seconds"] = prep;
  report["query_seconds"] = query;
  return report;
}

inline Json run_dp2d(const RunConfig& config) {
  if (config.input.empty()) throw ValidationError("dp2d requires --input <csv>");
  if (config.dist != "uniform-linear")
    throw PreconditionError("dp2d supports only the uniform linear distribution");
  const auto t0 = detail::Clock::now();
  const LoadedDataset loaded = load_dataset(config.input);
  const double prep = detail::seconds_since(t0);

  const auto t1 = detail::Clock::now();
  const DpResult dp = dp_solve(loaded.dataset, config.k);
  const double query = detail::seconds_since(t1);

  Json report;
  report["schema_version"] = 1;
  report["config"] = detail::config_echo(config);
  report["algorithm"] = "dp2d";
  report["tie_break"] = "lowest-index";
  report["n_points"] = loaded.dataset.size();
  report["dim"] = loaded.dataset.dim();
  report["duplicates_dropped"] = loaded.duplicates_dropped;
  report["evaluation"] = "exact-integral";
  report["skyline_size"] = dp.skyline.size();
  report["k_capped"] = dp.k_capped;
  report["solution"] = dp.solution.members();
  report["arr"] = dp.arr;
  {
    const double again = exact_linear_arr(loaded.dataset, dp.solution);
    report["arr_recheck"] = again;
    if (std::abs(again - dp.arr) > 1e-9)
      throw std::logic_error("dp arr does not match its from-scratch re-evaluation");
  }
  // Sampled diagnostics (vrr, percentiles) when a seed is supplied.
  if (config.seed) {
    detail::Evaluation ev = detail::build_evaluation(config, loaded.dataset);
    Json diag = detail::solution_metrics(ev, dp.solution, config.percentiles);
    report["sample_count"] = ev.sample_count;
    report["sampled_arr"] = diag["arr"];
    report["vrr"] = diag["vrr"];
    report["stddev_rr"] = diag["stddev_rr"];
    report["rr_percentiles"] = diag["rr_percentiles"];
    report["rng"] = kRngDescription;
  }
  report["preprocessing_seconds"] = prep;
  report["query_seconds"] = query;
  return report;
}

inline Json run_brute(const RunConfig& config) {
  if (config.input.empty()) throw ValidationError("brute requires --input <csv>");
  const auto t0 = detail::Clock::now();
  const LoadedDataset loaded = load_dataset(config.input);
  detail::Evaluation ev = detail::build_evaluation(config, loaded.dataset);
  const double prep = detail::seconds_since(t0);

  const auto t1 = detail::Clock::now();
  const OracleResult oracle = brute_force_optimal(ev.evaluator, config.k, config.limit);
  const double query = detail::seconds_since(t1);

  Json report;
  report["schema_version"] = 1;
  report["config"] = detail::config_echo(config);
  report["algorithm"] = "brute-force";
  report["rng"] = kRngDescription;
  report["n_points"] = loaded.dataset.size();
  report["dim"] = loaded.dataset.dim();
  report["duplicates_dropped"] = loaded.duplicates_dropped;
  report["evaluation"] = ev.mode;
  if (ev.sample_count > 0) report["sample_count"] = ev.sample_count;
  report["optimal"] = true;
  report["subsets_evaluated"] = oracle.evaluations;
  report.update(detail::solution_metrics(ev, oracle.best_subsets.front(), config.percentiles));
  detail::attach_recheck(report, ev, oracle.best_subsets.front());
  Json ties = Json::array();
  for (const SolutionSet& s : oracle.best_subsets) ties.push_back(s.members());
  report["optimal_subsets"] = std::move(ties);
  report["preprocessing_seconds"] = prep;
  report["query_seconds"] = query;
  return report;
}

inline Json run_eval(const RunConfig& config) {
  if (config.input.empty()) throw ValidationError("eval requires --input <csv>");
  const auto t0 = detail::Clock::now();
  const LoadedDataset loaded = load_dataset(config.input);
  detail::Evaluation ev = detail::build_evaluation(config, loaded.dataset);
  const double prep = detail::seconds_since(t0);

  const auto t1 = detail::Clock::now();
  const SolutionSet s = SolutionSet::of(config.ids, loaded.dataset);
  Json metrics = detail::solution_metrics(ev, s, config.percentiles);
  const double query = detail::seconds_since(t1);

  Json report;
  report["schema_version"] = 1;
  report["config"] = detail::config_echo(config);
  report["algorithm"] = "eval";
  report["rng"] = kRngDescription;
  report["n_points"] = loaded.dataset.size();
  report["dim"] = loaded.dataset.dim();
  report["duplicates_dropped"] = loaded.duplicates_dropped;
  report["evaluation"] = ev.mode;
  if (ev.sample_count > 0) report["sample_count"] = ev.sample_count;
  report.update(metrics);
  detail::attach_recheck(report, ev, s);
  report["preprocessing_seconds"] = prep;
  report["query_seconds"] = query;
  return report;
}

/// Runs every engine applicable to the instance on one shared evaluation and
/// tabulates the results side by side.
inline Json run_compare(const RunConfig& config) {
  if (config.input.empty()) throw ValidationError("compare requires --input <csv>");
  const auto t0 = detail::Clock::now();
  const LoadedDataset loaded = load_dataset(config.input);
  detail::Evaluation ev = detail::build_evaluation(config, loaded.dataset);
  const double prep = detail::seconds_since(t0);

  Json engines = Json::array();
  {
    const auto t1 = detail::Clock::now();
    GreedyOptions options;
    options.lazy = config.lazy;
    options.threads = config.threads > 0 ? config.threads : default_thread_count();
    const GreedyReport greedy = greedy_shrink(ev.evaluator, config.k, options);
    Json e = detail::solution_metrics(ev, greedy.solution, config.percentiles);
    e["algorithm"] = config.lazy ? "greedy-shrink-lazy" : "greedy-shrink-eager";
    e["query_seconds"] = detail::seconds_since(t1);
    engines.push_back(std::move(e));
  }
  {
    const auto t1 = detail::Clock::now();
    try {
      const OracleResult oracle = brute_force_optimal(ev.evaluator, config.k, config.limit);
      Json e = detail::solution_metrics(ev, oracle.best_subsets.front(), config.percentiles);
      e["algorithm"] = "brute-force";
      e["optimal"] = true;
      e["query_seconds"] = detail::seconds_since(t1);
      engines.push_back(std::move(e));
    } catch (const PreconditionError& err) {
      engines.push_back(Json{{"algorithm", "brute-force"}, {"skipped", err.what()}});
    }
  }
  if (loaded.dataset.dim() == 2 && config.dist == "uniform-linear") {
    const auto t1 = detail::Clock::now();
    const DpResult dp = dp_solve(loaded.dataset, config.k);
    Json e = detail::solution_metrics(ev, dp.solution, config.percentiles);
    e["algorithm"] = "dp2d";
    e["exact_integral_arr"] = dp.arr;
    e["query_seconds"] = detail::seconds_since(t1);
    engines.push_back(std::move(e));
  }

  Json report;
  report["schema_version"] = 1;
  report["config"] = detail::config_echo(config);
  report["algorithm"] = "compare";
  report["rng"] = kRngDescription;
  report["n_points"] = loaded.dataset.size();
  report["dim"] = loaded.dataset.dim();
  report["duplicates_dropped"] = loaded.duplicates_dropped;
  report["evaluation"] = ev.mode;
  if (ev.sample_count > 0) report["sample_count"] = ev.sample_count;
  report["engines"] = std::move(engines);
  report["preprocessing_seconds"] = prep;
  report["query_seconds"] = 0.0;
  return report;
}

inline Json run(const RunConfig& config) {
  config.validate();
  if (config.command == "gen") return run_gen(config);
  if (config.command == "select") return run_select(config);
  if (config.command == "dp2d") return run_dp2d(config);
  if (config.command == "brute") return run_brute(config);
  if (config.command == "eval") return run_eval(config);
  if (config.command == "compare") return run_compare(config);
  throw ValidationError("unknown command: " + config.command);
}

}  // namespace arrmin

#endif  // ARRMIN_RUNNER_HPP_
