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
// Shrinking greedy selection: start from the full dataset and repeatedly
// drop the point whose removal raises the average regret ratio the least.
// Two accelerations keep this practical:
//   * a best-point cache so only functions whose best point is the removal
//     candidate get rescanned, and
//   * a lazily re-evaluated sorted candidate list; stale entries are lower
//     bounds (removals only ever raise a candidate's value), so a head that
//     is already fresh is the true minimizer.

#ifndef ARRMIN_GREEDY_HPP_
#define ARRMIN_GREEDY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arrmin/core.hpp"
#include "arrmin/metrics.hpp"
#include "arrmin/parallel.hpp"

namespace arrmin {

/// Per-function best point within the current solution set, plus the inverse
/// map from each point to the functions it currently serves.
struct BestPointCache {
  std::vector<double> sat_in_s;        // per function: max utility within S
  std::vector<int> best_in_s;          // per function: argmax id within S
  std::vector<std::vector<int>> holders;  // per point: function indices served
};

/// Candidate list ordered ascending by (evaluation value, point id). An
/// entry is fresh when its value was computed against the current solution
/// set; freshness is tracked by iteration stamps.
class LazyList {
 public:
  struct Entry {
    double value;
    int id;
  };

  void build(std::vector<Entry> entries) {
    entries_ = std::move(entries);
    std::sort(entries_.begin(), entries_.end(), less);
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  Entry pop_head() {
    Entry head = entries_.front();
    entries_.erase(entries_.begin());
    return head;
  }

  void insert(Entry e) {
    auto pos = std::lower_bound(entries_.begin(), entries_.end(), e, less);
    entries_.insert(pos, e);
  }

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  static bool less(const Entry& a, const Entry& b) {
    return a.value != b.value ? a.value < b.value : a.id < b.id;
  }

  std::vector<Entry> entries_;
};

struct RemovalStep {
  int removed_id;
  double arr_after;
};

struct Steepness {
  double s = 0.0;
  double t = 0.0;
  double bound = 1.0;  // (e^t - 1)/t; 1 at s = 0, +inf at s = 1
};

struct GreedyReport {
  SolutionSet solution;
  double arr = 0.0;
  std::vector<RemovalStep> trace;  // one entry per removal
  // Per-iteration workload counters.
  std::vector<double> points_evaluated_fraction;   // candidate evals / |S|
  std::vector<double> samples_rescanned_fraction;  // reassigned functions / N
  bool lazy = true;
};

struct GreedyOptions {
  bool lazy = true;
  int threads = 1;
  // Cross-checks the lazy pick and the best-point cache against from-scratch
  // evaluation every iteration (small instances only; used by tests).
  bool debug_checks = false;
};

namespace detail {

class GreedyState {
 public:
  GreedyState(const ArrEvaluator& eval, int threads)
      : eval_(eval), points_(eval.dataset().points()), threads_(threads) {
    const int n = eval_.dataset().size();
    const int m = eval_.function_count();
    members_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) members_[static_cast<std::size_t>(i)] = i;
    in_s_.assign(static_cast<std::size_t>(n), 1);
    cache_.sat_in_s.resize(static_cast<std::size_t>(m));
    cache_.best_in_s.resize(static_cast<std::size_t>(m));
    cache_.holders.assign(static_cast<std::size_t>(n), {});
    for (int f = 0; f < m; ++f) {
      cache_.sat_in_s[static_cast<std::size_t>(f)] = eval_.best_value(f);
      cache_.best_in_s[static_cast<std::size_t>(f)] = eval_.best_id(f);
      cache_.holders[static_cast<std::size_t>(eval_.best_id(f))].push_back(f);
    }
    current_arr_ = 0.0;  // S = D
  }

  const std::vector<int>& members() const { return members_; }
  double current_arr() const { return current_arr_; }
  const BestPointCache& cache() const { return cache_; }
  int threads() const { return threads_; }

  /// arr(S - {p}) via the cache: only functions currently served by p are
  /// rescanned; everything else keeps its cached satisfaction.
  double candidate_value(int p) const {
    long double acc = current_arr_;
    for (int f : cache_.holders[static_cast<std::size_t>(p)]) {
      const double replacement = rescan_without(f, p);
      acc += static_cast<long double>(eval_.weight(f)) *
             ((cache_.sat_in_s[static_cast<std::size_t>(f)] - replacement) /
              eval_.best_value(f));
    }
    return static_cast<double>(acc);
  }

  /// Removes p from S, reassigns the functions it served, and refreshes the
  /// running arr by a full index-ordered resummation.
  /// Returns the fraction of functions whose best point was recomputed.
  double commit_removal(int p) {
    auto member_pos = std::lower_bound(members_.begin(), members_.end(), p);
    members_.erase(member_pos);
    in_s_[static_cast<std::size_t>(p)] = 0;
    std::vector<int> affected = std::move(cache_.holders[static_cast<std::size_t>(p)]);
    cache_.holders[static_cast<std::size_t>(p)].clear();
    for (int f : affected) {
      double best_val = 0.0;
      int best_id = -1;
      const UtilityFunction& fn = eval_.function(f);
      for (int id : members_) {
        const double u = utility_of(fn, points_[static_cast<std::size_t>(id)]);
        if (best_id < 0 || u > best_val) {
          best_val = u;
          best_id = id;
        }
      }
      cache_.sat_in_s[static_cast<std::size_t>(f)] = best_val;
      cache_.best_in_s[static_cast<std::size_t>(f)] = best_id;
      cache_.holders[static_cast<std::size_t>(best_id)].push_back(f);
    }
    long double acc = 0.0;
    for (int f = 0; f < eval_.function_count(); ++f) {
      acc += static_cast<long double>(eval_.weight(f)) *
             ((eval_.best_value(f) - cache_.sat_in_s[static_cast<std::size_t>(f)]) /
              eval_.best_value(f));
    }
    current_arr_ = static_cast<double>(acc);
    return static_cast<double>(affected.size()) /
           static_cast<double>(eval_.function_count());
  }

  /// Candidate values for every current member, evaluated concurrently into
  /// per-index slots (reduction happens in member order at the call site).
  std::vector<double> all_candidate_values() const {
    std::vector<double> values(members_.size());
    parallel_for(static_cast<int>(members_.size()), threads_, [&](int i) {
      values[static_cast<std::size_t>(i)] =
          candidate_value(members_[static_cast<std::size_t>(i)]);
    });
    return values;
  }

  void verify_cache_consistency() const {
    SolutionSet s = SolutionSet::of(members_, eval_.dataset());
    for (int f = 0; f < eval_.function_count(); ++f) {
      const Satisfaction fresh = satisfaction(eval_.function(f), s, eval_.dataset());
      if (fresh.value != cache_.sat_in_s[static_cast<std::size_t>(f)] ||
          fresh.best_id.value_or(-1) != cache_.best_in_s[static_cast<std::size_t>(f)])
        throw std::logic_error("best-point cache diverged from a from-scratch scan");
    }
  }

 private:
  double rescan_without(int f, int skip) const {
    const UtilityFunction& fn = eval_.function(f);
    double best = 0.0;
    bool seen = false;
    for (int id : members_) {
      if (id == skip) continue;
      const double u = utility_of(fn, points_[static_cast<std::size_t>(id)]);
      if (!seen || u > best) {
        best = u;
        seen = true;
      }
    }
    return seen ? best : 0.0;
  }

  const ArrEvaluator& eval_;
  const std::vector<Point>& points_;
  int threads_;
  std::vector<int> members_;  // sorted ascending
  std::vector<char> in_s_;
  BestPointCache cache_;
  double current_arr_ = 0.0;
};

inline int lex_min_candidate(const std::vector<int>& members,
                             const std::vector<double>& values, double* value_out) {
  int best_id = members.front();
  double best_v = values.front();
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (values[i] < best_v) {  // strict: lowest id wins exact ties
      best_v = values[i];
      best_id = members[i];
    }
  }
  if (value_out) *value_out = best_v;
  return best_id;
}

}  // namespace detail

inline GreedyReport greedy_shrink(const ArrEvaluator& eval, int k,
                                  const GreedyOptions& options = {}) {
  const int n = eval.dataset().size();
  if (k < 1 || k > n) throw PreconditionError("k must lie in [1, n]");

  GreedyReport report;
  report.lazy = options.lazy;
  detail::GreedyState state(eval, options.threads);

  LazyList list;
  std::vector<std::int64_t> stamp;  // per point: iteration of last refresh
  if (options.lazy) stamp.assign(static_cast<std::size_t>(n), -1);

  for (std::int64_t iteration = 0; static_cast<int>(state.members().size()) > k;
       ++iteration) {
    const std::size_t size_before = state.members().size();
    int chosen = -1;
    double evaluations = 0.0;

    if (!options.lazy) {
      const std::vector<double> values = state.all_candidate_values();
      chosen = detail::lex_min_candidate(state.members(), values, nullptr);
      evaluations = static_cast<double>(size_before);
    } else {
      if (iteration == 0) {
        const std::vector<double> values = state.all_candidate_values();
        std::vector<LazyList::Entry> entries(size_before);
        for (std::size_t i = 0; i < size_before; ++i) {
          entries[i] = {values[i], state.members()[i]};
          stamp[static_cast<std::size_t>(state.members()[i])] = 0;
        }
        list.build(std::move(entries));
        evaluations = static_cast<double>(size_before);
      }
      for (;;) {
        LazyList::Entry head = list.pop_head();
        if (stamp[static_cast<std::size_t>(head.id)] == iteration) {
          chosen = head.id;  // fresh head: no stale lower bound can beat it
          break;
        }
        const double fresh_value = state.candidate_value(head.id);
        evaluations += 1.0;
        if (fresh_value < head.value - 1e-12)
          throw std::logic_error(
              "lazy lower bound violated: refreshed value dropped below its stale bound");
        stamp[static_cast<std::size_t>(head.id)] = iteration;
        list.insert({fresh_value, head.id});
      }
      if (options.debug_checks && n <= 64) {
        const std::vector<double> values = state.all_candidate_values();
        const int eager_pick = detail::lex_min_candidate(state.members(), values, nullptr);
        if (eager_pick != chosen)
          throw std::logic_error("lazy pick diverged from the eager minimizer");
      }
    }

    const double rescanned = state.commit_removal(chosen);
    report.trace.push_back({chosen, state.current_arr()});
    report.points_evaluated_fraction.push_back(evaluations /
                                               static_cast<double>(size_before));
    report.samples_rescanned_fraction.push_back(rescanned);
    if (options.debug_checks) state.verify_cache_consistency();
  }

  report.solution = SolutionSet::of(state.members(), eval.dataset());
  report.arr = state.current_arr();
  return report;
}

/// Approximation guarantee implied by a steepness value: (e^t - 1)/t with
/// t = s/(1-s). s = 0 yields 1 (the t -> 0 limit); s = 1 yields +inf.
inline Steepness bound_for_steepness(double s) {
  Steepness out;
  out.s = s;
  if (s >= 1.0) {
    out.s = 1.0;
    out.t = std::numeric_limits<double>::infinity();
    out.bound = std::numeric_limits<double>::infinity();
  } else if (s <= 0.0) {
    out.s = 0.0;
    out.t = 0.0;
    out.bound = 1.0;
  } else {
    out.t = s / (1.0 - s);
    out.bound = std::expm1(out.t) / out.t;
  }
  return out;
}

/// Steepness of the arr set function and the resulting greedy guarantee.
inline Steepness steepness(const ArrEvaluator& eval) {
  const Dataset& dataset = eval.dataset();
  const int n = dataset.size();
  double s = 0.0;
  bool any = false;
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(n) - 1);
  for (int p = 0; p < n; ++p) {
    const double d_single = 1.0 - eval.arr(SolutionSet::of({p}, dataset));
    if (!(d_single > 0.0)) continue;
    rest.clear();
    for (int q = 0; q < n; ++q)
      if (q != p) rest.push_back(q);
    const double d_full = eval.arr(SolutionSet::of(rest, dataset));
    s = std::max(s, (d_single - d_full) / d_single);
    any = true;
  }
  return bound_for_steepness(any ? std::min(s, 1.0) : 0.0);
}

/// True iff lazy and eager runs produce identical solutions and identical
/// per-iteration traces on this instance.
inline bool verify_lazy_equivalence(const ArrEvaluator& eval, int k,
                                    const GreedyOptions& base_options = {}) {
  GreedyOptions lazy_opt = base_options;
  lazy_opt.lazy = true;
  GreedyOptions eager_opt = base_options;
  eager_opt.lazy = false;
  const GreedyReport a = greedy_shrink(eval, k, lazy_opt);
  const GreedyReport b = greedy_shrink(eval, k, eager_opt);
  if (a.solution.members() != b.solution.members()) return false;
  if (a.trace.size() != b.trace.size()) return false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    if (a.trace[i].removed_id != b.trace[i].removed_id) return false;
    if (a.trace[i].arr_after != b.trace[i].arr_after) return false;
  }
  return a.arr == b.arr;
}

}  // namespace arrmin

#endif  // ARRMIN_GREEDY_HPP_
