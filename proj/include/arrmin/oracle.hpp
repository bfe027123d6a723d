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

#ifndef ARRMIN_ORACLE_HPP_
#define ARRMIN_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "arrmin/greedy.hpp"
#include "arrmin/metrics.hpp"
#include "arrmin/parallel.hpp"

namespace arrmin {

/// Exhaustive-enumeration result: the minimal arr over all k-subsets and
/// every subset achieving it within 1e-12.
struct OracleResult {
  std::vector<SolutionSet> best_subsets;  // lexicographic order
  double optimal_arr = 0.0;
  std::uint64_t evaluations = 0;
};

constexpr std::uint64_t kDefaultOracleLimit = 2'000'000;

namespace detail {

inline std::uint64_t binomial(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (c > cap) return cap + 1;
  }
  return c;
}

template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    fn(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) return;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

/// Enumerates all k-subsets in lexicographic order with the same evaluator
/// the engines use. Refuses instances whose subset count exceeds `limit`.
inline OracleResult brute_force_optimal(const ArrEvaluator& eval, int k,
                                        std::uint64_t limit = kDefaultOracleLimit) {
  const int n = eval.dataset().size();
  if (k < 1 || k > n) throw PreconditionError("k must lie in [1, n]");
  const std::uint64_t count = detail::binomial(n, k, limit);
  if (count > limit)
    throw PreconditionError("subset count exceeds the oracle enumeration limit");

  OracleResult result;
  result.evaluations = count;
  double best = 2.0;  // above any reachable arr
  detail::for_each_combination(n, k, [&](const std::vector<int>& idx) {
    const double value = eval.arr(SolutionSet::of(idx, eval.dataset()));
    if (value < best) best = value;
  });
  result.optimal_arr = best;
  detail::for_each_combination(n, k, [&](const std::vector<int>& idx) {
    SolutionSet s = SolutionSet::of(idx, eval.dataset());
    if (eval.arr(s) <= best + 1e-12) result.best_subsets.push_back(std::move(s));
  });
  return result;
}

/// From-scratch re-evaluation of a reported solution; used to confirm that
/// engine caches never leak into reported numbers.
inline double recheck(const SolutionSet& solution, const ArrEvaluator& eval) {
  return eval.arr(solution);
}

inline double recheck(const GreedyReport& report, const ArrEvaluator& eval) {
  return eval.arr(report.solution);
}

}  // namespace arrmin

#endif  // ARRMIN_ORACLE_HPP_
