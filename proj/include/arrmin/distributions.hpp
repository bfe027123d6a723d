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

#ifndef ARRMIN_DISTRIBUTIONS_HPP_
#define ARRMIN_DISTRIBUTIONS_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "arrmin/core.hpp"

namespace arrmin {

// All sampling below draws from mt19937_64 through the two mappings here, so
// a (spec, N, seed) triple replays bit-identically on any platform. The
// report field `rng` records this recipe.
inline constexpr const char* kRngDescription =
    "mt19937_64; uniform01 = (next() >> 11) * 2^-53; normal = Box-Muller cosine";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the Box-Muller cosine branch; consumes two uniforms.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// A finite utility-function table with probabilities summing to 1.
class DiscreteDistribution {
 public:
  struct Entry {
    UtilityFunction function;
    double probability;
  };

  explicit DiscreteDistribution(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("discrete distribution needs >= 1 entry");
    double sum = 0.0;
    for (const Entry& e : entries_) {
      if (!(e.probability > 0.0) || e.probability > 1.0)
        throw ValidationError("discrete probabilities must lie in (0, 1]");
      sum += e.probability;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ValidationError("discrete probabilities must sum to 1 (got " + std::to_string(sum) + ")");
  }

  const std::vector<Entry>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }

 private:
  std::vector<Entry> entries_;
};

/// Continuous distributions over linear utility weights.
class ContinuousLinearSpec {
 public:
  enum class Kind { kUniformBox, kGmm };

  struct GmmComponent {
    std::vector<double> mean;    // weight-space mean, one per dimension
    std::vector<double> stddev;  // diagonal standard deviations, all > 0
    double weight;               // mixing proportion
  };

  /// Weights i.i.d. uniform on [0,1]^dim.
  static ContinuousLinearSpec uniform_box(int dim) {
    if (dim < 1) throw ValidationError("uniform-box spec needs dim >= 1");
    ContinuousLinearSpec s;
    s.kind_ = Kind::kUniformBox;
    s.dim_ = dim;
    return s;
  }

  /// Gaussian mixture over weights, truncated to the nonnegative orthant by
  /// rejection at draw time.
  static ContinuousLinearSpec gmm(std::vector<GmmComponent> components) {
    if (components.empty()) throw ValidationError("gmm spec needs >= 1 component");
    const std::size_t d = components.front().mean.size();
    if (d == 0) throw ValidationError("gmm component dimension must be >= 1");
    double sum = 0.0;
    for (const GmmComponent& c : components) {
      if (c.mean.size() != d || c.stddev.size() != d)
        throw ValidationError("gmm component dimensions are inconsistent");
      for (double sd : c.stddev)
        if (!(sd > 0.0)) throw ValidationError("gmm stddevs must be > 0");
      for (double m : c.mean)
        if (!std::isfinite(m)) throw ValidationError("gmm means must be finite");
      if (!(c.weight > 0.0)) throw ValidationError("gmm mixing proportions must be > 0");
      sum += c.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ValidationError("gmm mixing proportions must sum to 1");
    ContinuousLinearSpec s;
    s.kind_ = Kind::kGmm;
    s.dim_ = static_cast<int>(d);
    s.components_ = std::move(components);
    return s;
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<GmmComponent>& components() const { return components_; }

 private:
  ContinuousLinearSpec() = default;
  Kind kind_ = Kind::kUniformBox;
  int dim_ = 0;
  std::vector<GmmComponent> components_;
};

/// Error and confidence parameters for sampled evaluation.
struct SamplingParams {
  double epsilon = 0.0;
  double sigma = 0.0;

  SamplingParams(double eps, double sig) : epsilon(eps), sigma(sig) {
    if (!(epsilon > 0.0) || epsilon > 1.0 || !(sigma > 0.0) || sigma > 1.0)
      throw ValidationError("epsilon and sigma must lie in (0, 1]");
  }
};

/// Smallest sample count honoring the 3*ln(1/sigma)/epsilon^2 bound; taking
/// the ceiling keeps the count on the guaranteed side.
inline std::uint64_t sample_size(const SamplingParams& params) {
  const double n = 3.0 * std::log(1.0 / params.sigma) / (params.epsilon * params.epsilon);
  const double up = std::ceil(n);
  return up < 1.0 ? 1 : static_cast<std::uint64_t>(up);
}

/// N drawn utility functions plus, for each, its cached best value/point over
/// the dataset it was drawn against. Immutable once built.
struct SampleSet {
  std::vector<UtilityFunction> functions;
  std::vector<double> best_value;  // max over D, per sample
  std::vector<int> best_id;        // argmax, lowest id on ties
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(functions.size()); }
};

namespace detail {

inline UtilityFunction draw_one(const DiscreteDistribution& spec, Rng& rng) {
  const double u = rng.uniform01();
  double cum = 0.0;
  for (const auto& e : spec.entries()) {
    cum += e.probability;
    if (u < cum) return e.function;
  }
  return spec.entries().back().function;  // u landed in the rounding tail
}

inline UtilityFunction draw_one(const ContinuousLinearSpec& spec, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(spec.dim()));
  for (;;) {
    if (spec.kind() == ContinuousLinearSpec::Kind::kUniformBox) {
      for (double& x : w) x = rng.uniform01();
    } else {
      const double u = rng.uniform01();
      double cum = 0.0;
      std::size_t pick = spec.components().size() - 1;
      for (std::size_t c = 0; c < spec.components().size(); ++c) {
        cum += spec.components()[c].weight;
        if (u < cum) { pick = c; break; }
      }
      const auto& comp = spec.components()[pick];
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = comp.mean[i] + comp.stddev[i] * rng.normal();
    }
    bool ok = false;
    bool nonneg = true;
    for (double x : w) {
      if (x < 0.0) { nonneg = false; break; }
      if (x > 0.0) ok = true;
    }
    if (nonneg && ok) return UtilityFunction::linear(w);
    // negative or all-zero weight vector: reject and redraw the function
  }
}

}  // namespace detail

/// Draws N i.i.d. utility functions with a seeded generator and caches each
/// sample's best point in `dataset` by a full linear scan.
template <typename Spec>
SampleSet draw_samples(const Spec& spec, std::uint64_t n, std::uint64_t seed,
                       const Dataset& dataset) {
  if (n < 1) throw PreconditionError("sample size must be >= 1");
  Rng rng(seed);
  SampleSet out;
  out.seed = seed;
  out.functions.reserve(n);
  out.best_value.reserve(n);
  out.best_id.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i)
    out.functions.push_back(detail::draw_one(spec, rng));
  for (const UtilityFunction& f : out.functions) {
    const Satisfaction best = best_in_dataset(f, dataset);
    out.best_value.push_back(best.value);
    out.best_id.push_back(best.best_id.value_or(-1));
  }
  return out;
}

}  // namespace arrmin

#endif  // ARRMIN_DISTRIBUTIONS_HPP_
