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

#ifndef ARRMIN_METRICS_HPP_
#define ARRMIN_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "arrmin/core.hpp"
#include "arrmin/distributions.hpp"

namespace arrmin {

/// Exact average regret ratio over a finite table: sum of rr(S,f) * eta(f),
/// accumulated in entry order.
inline double arr_exact_discrete(const DiscreteDistribution& dist, const SolutionSet& s,
                                 const Dataset& dataset) {
  long double sum = 0.0;
  for (const auto& e : dist.entries())
    sum += static_cast<long double>(e.probability) * regret_ratio(e.function, s, dataset);
  return static_cast<double>(sum);
}

/// Sampled average regret ratio: (1/N) sum over samples of
/// (maxD - maxS) / maxD, using the cached best-in-D values and accumulating
/// in sample-index order so runs agree bit for bit.
inline double arr_sampled(const SampleSet& samples, const SolutionSet& s,
                          const Dataset& dataset) {
  if (samples.size() == 0) throw PreconditionError("empty sample set");
  long double sum = 0.0;
  for (int i = 0; i < samples.size(); ++i) {
    const double best_d = samples.best_value[static_cast<std::size_t>(i)];
    if (best_d <= 0.0)
      throw PreconditionError("degenerate utility: zero satisfaction over the whole dataset");
    const double best_s =
        satisfaction(samples.functions[static_cast<std::size_t>(i)], s, dataset).value;
    sum += (best_d - best_s) / best_d;
  }
  return static_cast<double>(sum / static_cast<long double>(samples.size()));
}

namespace detail {

inline std::vector<double> sampled_regret_ratios(const SampleSet& samples,
                                                 const SolutionSet& s,
                                                 const Dataset& dataset) {
  if (samples.size() == 0) throw PreconditionError("empty sample set");
  std::vector<double> rr(static_cast<std::size_t>(samples.size()));
  for (int i = 0; i < samples.size(); ++i) {
    const double best_d = samples.best_value[static_cast<std::size_t>(i)];
    if (best_d <= 0.0)
      throw PreconditionError("degenerate utility: zero satisfaction over the whole dataset");
    const double best_s =
        satisfaction(samples.functions[static_cast<std::size_t>(i)], s, dataset).value;
    rr[static_cast<std::size_t>(i)] = (best_d - best_s) / best_d;
  }
  return rr;
}

}  // namespace detail

/// Population variance (1/N) sum (rr_i - arr)^2 of the sampled regret ratios.
inline double vrr_sampled(const SampleSet& samples, const SolutionSet& s,
                          const Dataset& dataset) {
  const std::vector<double> rr = detail::sampled_regret_ratios(samples, s, dataset);
  double mean = 0.0;
  for (double v : rr) mean += v;
  mean /= static_cast<double>(rr.size());
  double var = 0.0;
  for (double v : rr) var += (v - mean) * (v - mean);
  return var / static_cast<double>(rr.size());
}

/// Nearest-rank percentile over weighted values: smallest value whose
/// cumulative weight share reaches q/100. With equal weights this is the
/// element at index ceil(q/100 * N) - 1 of the ascending sort, so the 100th
/// percentile is the maximum.
inline std::vector<double> weighted_percentiles(std::vector<double> values,
                                                std::vector<double> weights,
                                                const std::vector<double>& qs) {
  if (values.empty() || values.size() != weights.size())
    throw PreconditionError("percentiles need matching non-empty values/weights");
  for (double q : qs)
    if (!(q >= 0.0) || q > 100.0) throw PreconditionError("percentile must lie in [0, 100]");
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> out;
  out.reserve(qs.size());
  for (double q : qs) {
    const double target = q / 100.0 * total;
    double cum = 0.0;
    double pick = values[order.back()];
    for (std::size_t i : order) {
      cum += weights[i];
      if (cum >= target - 1e-12 * total) { pick = values[i]; break; }
    }
    out.push_back(pick);
  }
  return out;
}

/// Regret ratio at the given user percentiles of the sample.
inline std::vector<double> rr_percentiles(const SampleSet& samples, const SolutionSet& s,
                                          const Dataset& dataset,
                                          const std::vector<double>& qs) {
  std::vector<double> rr = detail::sampled_regret_ratios(samples, s, dataset);
  std::vector<double> weights(rr.size(), 1.0);
  return weighted_percentiles(std::move(rr), std::move(weights), qs);
}

/// A finite weighted family of utility functions over one dataset, with
/// cached best-in-D values: the evaluation backend shared by the selection
/// engines. Weights are probabilities for an exact table and 1/N for samples;
/// arr is always the weight-ordered sum of regret ratios.
class ArrEvaluator {
 public:
  ArrEvaluator(const Dataset& dataset, const DiscreteDistribution& dist)
      : dataset_(&dataset), exact_(true) {
    functions_.reserve(static_cast<std::size_t>(dist.size()));
    weights_.reserve(static_cast<std::size_t>(dist.size()));
    for (const auto& e : dist.entries()) {
      functions_.push_back(e.function);
      weights_.push_back(e.probability);
    }
    cache_best_in_dataset();
  }

  ArrEvaluator(const Dataset& dataset, const SampleSet& samples)
      : dataset_(&dataset), exact_(false) {
    if (samples.size() == 0) throw PreconditionError("empty sample set");
    functions_ = samples.functions;
    weights_.assign(functions_.size(), 1.0 / static_cast<double>(functions_.size()));
    best_value_ = samples.best_value;
    best_id_ = samples.best_id;
    validate_best();
  }

  const Dataset& dataset() const { return *dataset_; }
  int function_count() const { return static_cast<int>(functions_.size()); }
  bool exact() const { return exact_; }
  const UtilityFunction& function(int i) const { return functions_[static_cast<std::size_t>(i)]; }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  double best_value(int i) const { return best_value_[static_cast<std::size_t>(i)]; }
  int best_id(int i) const { return best_id_[static_cast<std::size_t>(i)]; }

  /// From-scratch arr(S), no caches beyond best-in-D, index-ordered sum.
  double arr(const SolutionSet& s) const {
    long double sum = 0.0;
    for (int i = 0; i < function_count(); ++i) {
      const double best_s = satisfaction(function(i), s, *dataset_).value;
      sum += static_cast<long double>(weights_[static_cast<std::size_t>(i)]) *
             ((best_value(i) - best_s) / best_value(i));
    }
    return static_cast<double>(sum);
  }

  std::vector<double> regret_ratios(const SolutionSet& s) const {
    std::vector<double> rr(functions_.size());
    for (int i = 0; i < function_count(); ++i) {
      const double best_s = satisfaction(function(i), s, *dataset_).value;
      rr[static_cast<std::size_t>(i)] = (best_value(i) - best_s) / best_value(i);
    }
    return rr;
  }

  double arr_of_weighted(const std::vector<double>& rr) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i) sum += weights_[i] * rr[i];
    return sum;
  }

  /// Weighted second central moment of the regret ratios (the variance of
  /// regret ratio under this family's weights).
  double vrr_of_weighted(const std::vector<double>& rr) const {
    const double mean = arr_of_weighted(rr);
    double total = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i) {
      var += weights_[i] * (rr[i] - mean) * (rr[i] - mean);
      total += weights_[i];
    }
    return var / total;
  }

  const std::vector<double>& weights() const { return weights_; }

 private:
  void cache_best_in_dataset() {
    best_value_.reserve(functions_.size());
    best_id_.reserve(functions_.size());
    for (const UtilityFunction& f : functions_) {
      const Satisfaction best = best_in_dataset(f, *dataset_);
      best_value_.push_back(best.value);
      best_id_.push_back(best.best_id.value_or(-1));
    }
    validate_best();
  }

  void validate_best() {
    for (double v : best_value_)
      if (v <= 0.0)
        throw PreconditionError("degenerate utility: zero satisfaction over the whole dataset");
  }

  const Dataset* dataset_;
  bool exact_;
  std::vector<UtilityFunction> functions_;
  std::vector<double> weights_;
  std::vector<double> best_value_;
  std::vector<int> best_id_;
};

/// Repeats `trials` independent samplings of size sample_size(params) and
/// returns the fraction whose sampled arr lands within epsilon of the exact
/// discrete arr. Trial t draws with seed `seed + t`.
inline double empirical_bound_check(const DiscreteDistribution& dist, const SolutionSet& s,
                                    const Dataset& dataset, const SamplingParams& params,
                                    int trials, std::uint64_t seed) {
  if (trials < 1) throw PreconditionError("empirical_bound_check needs trials >= 1");
  const double exact = arr_exact_discrete(dist, s, dataset);
  const std::uint64_t n = sample_size(params);
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    const SampleSet fs = draw_samples(dist, n, seed + static_cast<std::uint64_t>(t), dataset);
    if (std::abs(arr_sampled(fs, s, dataset) - exact) < params.epsilon) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace arrmin

#endif  // ARRMIN_METRICS_HPP_
