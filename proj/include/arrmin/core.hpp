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

#ifndef ARRMIN_CORE_HPP_
#define ARRMIN_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arrmin {

// Bad user input (files, configs, malformed parameters). CLI exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A violated engine precondition (k out of range, degenerate utility, ...).
// CLI exit code 3.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// One record: a d-dimensional vector of nonnegative attribute values.
/// `id` always equals the point's position in its Dataset.
struct Point {
  int id = -1;
  std::vector<double> coords;
};

/// The ground set of points. All points share dimension `dim`; exact
/// duplicate coordinate vectors are dropped at construction (lowest id kept)
/// so downstream geometry can assume distinct points.
class Dataset {
 public:
  static Dataset from_rows(std::vector<std::vector<double>> rows,
                           int* duplicates_dropped = nullptr) {
    if (rows.empty()) throw ValidationError("dataset must contain at least one point");
    const std::size_t d = rows.front().size();
    if (d == 0) throw ValidationError("dataset dimension must be >= 1");
    for (const auto& r : rows) {
      if (r.size() != d) throw ValidationError("inconsistent dataset dimension");
      for (double v : r) {
        if (!std::isfinite(v) || v < 0.0)
          throw ValidationError("dataset values must be finite and >= 0");
      }
    }
    // Duplicate scan over sorted row order; survivors keep input order.
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rows[a] != rows[b] ? rows[a] < rows[b] : a < b;
    });
    std::vector<char> dup(rows.size(), 0);
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (rows[order[i]] == rows[order[i - 1]]) dup[order[i]] = 1;
    }
    Dataset ds;
    ds.dim_ = static_cast<int>(d);
    int dropped = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (dup[i]) { ++dropped; continue; }
      Point p;
      p.id = static_cast<int>(ds.points_.size());
      p.coords = std::move(rows[i]);
      ds.points_.push_back(std::move(p));
    }
    if (duplicates_dropped) *duplicates_dropped = dropped;
    return ds;
  }

  int size() const { return static_cast<int>(points_.size()); }
  int dim() const { return dim_; }
  const Point& point(int id) const { return points_.at(static_cast<std::size_t>(id)); }
  const std::vector<Point>& points() const { return points_; }

 private:
  std::vector<Point> points_;
  int dim_ = 0;
};

/// A user's preference over points. Either a nonnegative linear weight
/// vector (utility = dot(weights, coords)) or an explicit per-point utility
/// row in [0, 1] indexed by point id.
class UtilityFunction {
 public:
  enum class Kind { kLinear, kTabular };

  static UtilityFunction linear(std::vector<double> weights) {
    if (weights.empty()) throw ValidationError("linear utility needs >= 1 weight");
    bool any_positive = false;
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0)
        throw ValidationError("linear utility weights must be finite and >= 0");
      if (w > 0.0) any_positive = true;
    }
    if (!any_positive) throw ValidationError("linear utility weights must not be all zero");
    return UtilityFunction(Kind::kLinear, std::move(weights));
  }

  static UtilityFunction tabular(std::vector<double> utilities) {
    if (utilities.empty()) throw ValidationError("tabular utility needs >= 1 entry");
    for (double u : utilities) {
      if (!std::isfinite(u) || u < 0.0 || u > 1.0)
        throw ValidationError("tabular utilities must lie in [0, 1]");
    }
    return UtilityFunction(Kind::kTabular, std::move(utilities));
  }

  Kind kind() const { return kind_; }
  const std::vector<double>& values() const { return values_; }

 private:
  UtilityFunction(Kind kind, std::vector<double> values)
      : kind_(kind), values_(std::move(values)) {}
  Kind kind_;
  std::vector<double> values_;  // weights (linear) or per-id utilities (tabular)
};

/// A candidate answer: a duplicate-free ascending set of point ids.
class SolutionSet {
 public:
  SolutionSet() = default;

  static SolutionSet of(std::vector<int> ids, const Dataset& dataset) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids) {
      if (id < 0 || id >= dataset.size())
        throw PreconditionError("solution member id out of range");
    }
    SolutionSet s;
    s.members_ = std::move(ids);
    return s;
  }

  static SolutionSet all_of(const Dataset& dataset) {
    SolutionSet s;
    s.members_.resize(static_cast<std::size_t>(dataset.size()));
    for (int i = 0; i < dataset.size(); ++i) s.members_[static_cast<std::size_t>(i)] = i;
    return s;
  }

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }

 private:
  std::vector<int> members_;  // sorted ascending, unique
};

inline double utility_of(const UtilityFunction& f, const Point& p) {
  if (f.kind() == UtilityFunction::Kind::kLinear) {
    if (f.values().size() != p.coords.size())
      throw PreconditionError("utility/point dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < p.coords.size(); ++i) dot += f.values()[i] * p.coords[i];
    return dot;
  }
  if (p.id < 0 || static_cast<std::size_t>(p.id) >= f.values().size())
    throw PreconditionError("tabular utility has no entry for point id " + std::to_string(p.id));
  return f.values()[static_cast<std::size_t>(p.id)];
}

struct Satisfaction {
  double value = 0.0;
  std::optional<int> best_id;  // argmax, lowest id on ties; absent for empty set
};

/// max_{p in S} f(p); 0 with no best point when S is empty.
inline Satisfaction satisfaction(const UtilityFunction& f, const SolutionSet& s,
                                 const Dataset& dataset) {
  Satisfaction out;
  for (int id : s.members()) {
    const double u = utility_of(f, dataset.point(id));
    if (!out.best_id || u > out.value) {
      out.value = u;
      out.best_id = id;
    }
  }
  if (!out.best_id) out.value = 0.0;
  return out;
}

/// Best point over the whole dataset (the id-ordered scan makes ties
/// deterministic: lowest id wins).
inline Satisfaction best_in_dataset(const UtilityFunction& f, const Dataset& dataset) {
  Satisfaction out;
  for (const Point& p : dataset.points()) {
    const double u = utility_of(f, p);
    if (!out.best_id || u > out.value) {
      out.value = u;
      out.best_id = p.id;
    }
  }
  return out;
}

/// (sat(D,f) - sat(S,f)) / sat(D,f), in [0, 1]. A utility that is zero on
/// the entire dataset has no well-defined ratio and is rejected.
inline double regret_ratio(const UtilityFunction& f, const SolutionSet& s,
                           const Dataset& dataset) {
  const Satisfaction in_d = best_in_dataset(f, dataset);
  if (in_d.value <= 0.0)
    throw PreconditionError("degenerate utility: zero satisfaction over the whole dataset");
  const Satisfaction in_s = satisfaction(f, s, dataset);
  return (in_d.value - in_s.value) / in_d.value;
}

}  // namespace arrmin

#endif  // ARRMIN_CORE_HPP_
