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

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <vector>

#include "arrmin/dp2d.hpp"
#include "arrmin/distributions.hpp"
#include "arrmin/oracle.hpp"
#include "testutil.hpp"

using namespace arrmin;
using namespace testutil;
using Catch::Approx;

namespace {

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

// Monte Carlo mass of (1 - f_i / best) over the angle-restricted unit square.
McEstimate mc_segment(const Dataset& ds, const Point& p, double lo, double hi, int m,
                      std::uint64_t seed) {
  Rng rng(seed);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < m; ++i) {
    const double w1 = rng.uniform01();
    const double w2 = rng.uniform01();
    const double angle = std::atan2(w2, w1);
    double v = 0.0;
    if (angle >= lo && angle <= hi) {
      double best = 0.0;
      for (const Point& q : ds.points())
        best = std::max(best, q.coords[0] * w1 + q.coords[1] * w2);
      v = 1.0 - (p.coords[0] * w1 + p.coords[1] * w2) / best;
    }
    sum += v;
    sq += v * v;
  }
  McEstimate out;
  out.mean = sum / m;
  out.se = std::sqrt(std::max(0.0, sq / m - out.mean * out.mean) / m);
  return out;
}

// Monte Carlo average regret ratio of a solution set under uniform weights.
McEstimate mc_arr(const Dataset& ds, const SolutionSet& s, int m, std::uint64_t seed) {
  Rng rng(seed);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < m; ++i) {
    const double w1 = rng.uniform01();
    const double w2 = rng.uniform01();
    double best = 0.0;
    for (const Point& q : ds.points())
      best = std::max(best, q.coords[0] * w1 + q.coords[1] * w2);
    double in_s = 0.0;
    for (int id : s.members()) {
      const Point& q = ds.point(id);
      in_s = std::max(in_s, q.coords[0] * w1 + q.coords[1] * w2);
    }
    const double v = best > 0.0 ? 1.0 - in_s / best : 0.0;
    sum += v;
    sq += v * v;
  }
  McEstimate out;
  out.mean = sum / m;
  out.se = std::sqrt(std::max(0.0, sq / m - out.mean * out.mean) / m);
  return out;
}

Dataset dataset_with_small_skyline(int n, std::uint64_t seed, int min_sky, int max_sky) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const Dataset ds = random_dataset(n, 2, seed + 1000 * attempt);
    const int m = skyline_2d(ds).size();
    if (m >= min_sky && m <= max_sky) return ds;
  }
}

std::vector<int> brute_skyline(const Dataset& ds) {
  std::vector<int> out;
  for (int a = 0; a < ds.size(); ++a) {
    bool dominated = false;
    for (int b = 0; b < ds.size() && !dominated; ++b) {
      if (a == b) continue;
      const auto& ca = ds.point(a).coords;
      const auto& cb = ds.point(b).coords;
      dominated = cb[0] >= ca[0] && cb[1] >= ca[1] && (cb[0] > ca[0] || cb[1] > ca[1]);
    }
    if (!dominated) out.push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("skyline keeps exactly the non-dominated points in sorted order") {
  const Dataset ds = Dataset::from_rows({{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}});
  const SkylineIndex sky = skyline_2d(ds);
  CHECK(sky.ids == std::vector<int>{0, 2, 1});

  const Dataset dom = Dataset::from_rows({{1.0, 1.0}, {0.5, 0.5}});
  CHECK(skyline_2d(dom).ids == std::vector<int>{0});

  const Dataset same_x = Dataset::from_rows({{1.0, 0.2}, {1.0, 0.5}});
  CHECK(skyline_2d(same_x).ids == std::vector<int>{1});

  CHECK_THROWS_AS(skyline_2d(Dataset::from_rows({{1.0, 2.0, 3.0}})), PreconditionError);
}

TEST_CASE("skyline agrees with the quadratic dominance filter") {
  Rng rng(30301);
  for (int trial = 0; trial < 25; ++trial) {
    const Dataset ds = random_dataset(20, 2, rng.next());
    std::vector<int> expected = brute_skyline(ds);
    std::vector<int> got = skyline_2d(ds).ids;
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
  }
}

TEST_CASE("skyline order is descending in x and ascending in y") {
  Rng rng(30302);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset ds = random_dataset(40, 2, rng.next());
    const SkylineIndex sky = skyline_2d(ds);
    for (int i = 1; i < sky.size(); ++i) {
      const auto& prev = ds.point(sky.ids[i - 1]).coords;
      const auto& cur = ds.point(sky.ids[i]).coords;
      CHECK(cur[0] < prev[0]);
      CHECK(cur[1] > prev[1]);
    }
  }
}

TEST_CASE("separating angle: symmetric pair, sentinel, preference direction") {
  const Dataset ds = Dataset::from_rows({{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}});
  const AngleTable table(ds, skyline_2d(ds));

  CHECK(separating_angle(0, 2, table) == Approx(kQuarterPi).epsilon(1e-15));
  CHECK(separating_angle(0, table.size(), table) == kHalfPi);
  CHECK(separating_angle(1, table.size(), table) == kHalfPi);
  CHECK(separating_angle(0, 1, table) == separating_angle(1, 0, table));
  CHECK_THROWS_AS(separating_angle(1, 1, table), PreconditionError);

  // (1,0) vs (0.5,0.5): equal utility along the pi/4 direction; a steeper
  // weight vector such as (1,2) must prefer the higher-y point.
  CHECK(separating_angle(0, 1, table) == Approx(kQuarterPi).epsilon(1e-15));
  const UtilityFunction steep = UtilityFunction::linear({1.0, 2.0});
  CHECK(std::atan2(2.0, 1.0) > separating_angle(0, 1, table));
  CHECK(utility_of(steep, ds.point(1)) > utility_of(steep, ds.point(0)));
  CHECK(utility_of(steep, ds.point(1)) == Approx(1.5));
}

TEST_CASE("angles separate preferences on random skylines") {
  Rng rng(30303);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset ds = random_dataset(12, 2, rng.next());
    const SkylineIndex sky = skyline_2d(ds);
    if (sky.size() < 2) continue;
    const AngleTable table(ds, sky);
    const int i = static_cast<int>(rng.uniform01() * (sky.size() - 1));
    const int j = i + 1 + static_cast<int>(rng.uniform01() * (sky.size() - 1 - i));
    const double theta = table.theta(i, j);
    const double delta = 0.02 + 0.2 * rng.uniform01();
    // Above the angle the later (higher-y) point wins, below the earlier.
    const Point& earlier = table.point(i);
    const Point& later = table.point(std::min(j, sky.size() - 1));
    if (i == std::min(j, sky.size() - 1)) continue;
    const double above = std::min(theta + delta, kHalfPi);
    const double below = std::max(theta - delta, 0.0);
    auto value = [](const Point& p, double angle) {
      return p.coords[0] * std::cos(angle) + p.coords[1] * std::sin(angle);
    };
    if (above > theta + 1e-9)
      CHECK(value(later, above) >= value(earlier, above) - 1e-12);
    if (below < theta - 1e-9)
      CHECK(value(earlier, below) >= value(later, below) - 1e-12);
  }
}

TEST_CASE("best-range bounds: hull points tile the quadrant, coverage is exact") {
  Rng rng(30304);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset ds = random_dataset(15, 2, rng.next());
    const AngleTable table(ds, skyline_2d(ds));
    std::vector<std::pair<double, double>> ranges;
    for (int m = 0; m < table.size(); ++m) {
      if (table.best_upper(m) > table.best_lower(m))
        ranges.emplace_back(table.best_lower(m), table.best_upper(m));
    }
    REQUIRE_FALSE(ranges.empty());
    std::sort(ranges.begin(), ranges.end());
    CHECK(ranges.front().first == Approx(0.0).margin(1e-12));
    CHECK(ranges.back().second == Approx(kHalfPi).margin(1e-12));
    for (std::size_t r = 1; r < ranges.size(); ++r)
      CHECK(ranges[r].first == Approx(ranges[r - 1].second).margin(1e-9));
    // Measures of the clipped ranges add up to the full quadrant measure.
    double total = 0.0;
    for (const auto& [lo, hi] : ranges) total += angular_region_measure(lo, hi);
    CHECK(total == Approx(angular_region_measure(0.0, kHalfPi)).margin(1e-8));
  }
}

TEST_CASE("segment mass is zero on a point's own best range") {
  const Dataset ds = Dataset::from_rows({{1.0, 0.0}, {0.7, 0.7}, {0.0, 1.0}});
  const AngleTable table(ds, skyline_2d(ds));
  for (int i = 0; i < table.size(); ++i) {
    if (table.best_upper(i) <= table.best_lower(i)) continue;
    CHECK(segment_arr(table, i, table.best_lower(i), table.best_upper(i)) == 0.0);
  }
  CHECK(segment_arr(table, 0, 0.3, 0.3) == 0.0);
  CHECK_THROWS_AS(segment_arr(table, 0, 0.4, 0.3), PreconditionError);
}

TEST_CASE("segment mass matches Monte Carlo on the three-point skyline") {
  const Dataset ds = Dataset::from_rows({{1.0, 0.0}, {0.7, 0.7}, {0.0, 1.0}});
  const AngleTable table(ds, skyline_2d(ds));
  const McEstimate mc = mc_segment(ds, ds.point(0), 0.0, kHalfPi, 1000000, 515151);
  const double exact = segment_arr(table, 0, 0.0, kHalfPi);
  INFO("exact " << exact << " mc " << mc.mean << " se " << mc.se);
  CHECK(std::abs(exact - mc.mean) < 3.0 * mc.se);
}

TEST_CASE("segment mass is additive and agrees with the quadrature route") {
  Rng rng(30305);
  for (int trial = 0; trial < 12; ++trial) {
    const Dataset ds = dataset_with_small_skyline(12, rng.next(), 3, 8);
    const AngleTable table(ds, skyline_2d(ds));
    const int i = static_cast<int>(rng.uniform01() * table.size());
    double a = rng.uniform01() * kHalfPi;
    double b = rng.uniform01() * kHalfPi;
    double c = rng.uniform01() * kHalfPi;
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    const double whole = segment_arr(table, i, a, c);
    const double split = segment_arr(table, i, a, b) + segment_arr(table, i, b, c);
    CHECK(whole == Approx(split).margin(1e-7));
    const double quad = segment_arr_quadrature(table, i, a, c);
    CHECK(whole == Approx(quad).margin(1e-8));
  }
}

TEST_CASE("dp with k equal to the skyline size returns the skyline at zero arr") {
  const Dataset ds = dataset_with_small_skyline(12, 606, 3, 6);
  const SkylineIndex sky = skyline_2d(ds);
  const DpResult dp = dp_solve(ds, sky.size());
  std::vector<int> expected = sky.ids;
  std::sort(expected.begin(), expected.end());
  CHECK(dp.solution.members() == expected);
  CHECK(dp.arr == 0.0);
  CHECK_FALSE(dp.k_capped);

  const DpResult over = dp_solve(ds, sky.size() + 2);
  CHECK(over.k_capped);
  CHECK(over.solution.members() == expected);
  CHECK(over.arr == 0.0);
}

TEST_CASE("dp k=1 on a symmetric pair returns the lowest id") {
  const Dataset a = Dataset::from_rows({{1.0, 0.0}, {0.0, 1.0}});
  const DpResult ra = dp_solve(a, 1);
  CHECK(ra.solution.members() == std::vector<int>{0});

  // Swapped input order: the tie must still resolve to the lowest id.
  const Dataset b = Dataset::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  const DpResult rb = dp_solve(b, 1);
  CHECK(rb.solution.members() == std::vector<int>{0});
}

TEST_CASE("dp validates its inputs") {
  CHECK_THROWS_AS(dp_solve(Dataset::from_rows({{1.0, 2.0, 3.0}}), 1), PreconditionError);
  CHECK_THROWS_AS(dp_solve(Dataset::from_rows({{1.0, 2.0}}), 0), PreconditionError);
}

TEST_CASE("dp beats or ties every enumerated subset and matches Monte Carlo") {
  Rng rng(30306);
  for (int trial = 0; trial < 4; ++trial) {
    const Dataset ds = dataset_with_small_skyline(8, rng.next(), 3, 8);
    const int k = 1 + trial % 3;
    const DpResult dp = dp_solve(ds, std::min(k, skyline_2d(ds).size()));
    const AngleTable table(ds, skyline_2d(ds));

    CHECK(dp.arr == Approx(exact_linear_arr(table, dp.solution)).margin(1e-9));

    double best_enum = 2.0;
    {
      const int n = ds.size();
      const int kk = dp.solution.size();
      std::vector<int> comb(static_cast<std::size_t>(kk));
      for (int i = 0; i < kk; ++i) comb[static_cast<std::size_t>(i)] = i;
      for (;;) {
        const double value = exact_linear_arr(table, SolutionSet::of(comb, ds));
        CHECK(dp.arr <= value + 1e-7);
        best_enum = std::min(best_enum, value);
        int pos = kk - 1;
        while (pos >= 0 && comb[static_cast<std::size_t>(pos)] == n - kk + pos) --pos;
        if (pos < 0) break;
        ++comb[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < kk; ++j)
          comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    CHECK(dp.arr == Approx(best_enum).margin(1e-7));

    const McEstimate mc = mc_arr(ds, dp.solution, 400000, rng.next());
    INFO("dp " << dp.arr << " mc " << mc.mean << " se " << mc.se);
    CHECK(std::abs(dp.arr - mc.mean) < 3.0 * mc.se + 1e-9);

    // The exact optimum is never above what sampled greedy achieves, up to
    // the sampling error of the greedy evaluator.
    const SampleSet samples =
        draw_samples(ContinuousLinearSpec::uniform_box(2), 4000, rng.next(), ds);
    const ArrEvaluator eval(ds, samples);
    const GreedyReport greedy = greedy_shrink(eval, dp.solution.size());
    const double se =
        std::sqrt(vrr_sampled(samples, greedy.solution, ds) / samples.size());
    CHECK(dp.arr <= greedy.arr + 3.0 * se + 1e-9);
  }
}

TEST_CASE("collinear points share one separating angle and dp stays optimal") {
  // Every pair on the segment x + y = 1 separates at exactly pi/4, so every
  // admissibility comparison in the recurrence is an exact tie.
  const Dataset ds = Dataset::from_rows(
      {{1.0, 0.0}, {0.75, 0.25}, {0.5, 0.5}, {0.25, 0.75}, {0.0, 1.0}});
  const AngleTable table(ds, skyline_2d(ds));
  REQUIRE(table.size() == 5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      CHECK(table.theta(i, j) == kQuarterPi);

  // The two endpoints cover the whole quadrant with zero regret.
  const DpResult two = dp_solve(ds, 2);
  CHECK(two.arr == 0.0);
  CHECK(exact_linear_arr(table, two.solution) == 0.0);

  // Singletons are strictly worse, and dp agrees with enumeration.
  const DpResult one = dp_solve(ds, 1);
  CHECK(one.arr > 0.0);
  double best = 2.0;
  for (int i = 0; i < 5; ++i)
    best = std::min(best, exact_linear_arr(table, SolutionSet::of({i}, ds)));
  CHECK(one.arr == Approx(best).margin(1e-9));

  // Midpoints never hold a best region of positive measure.
  for (int m : {1, 2, 3})
    CHECK(table.best_lower(m) >= table.best_upper(m));
}

TEST_CASE("adding a dominated point changes nothing") {
  const Dataset base = dataset_with_small_skyline(10, 707, 3, 7);
  const DpResult before = dp_solve(base, 2);

  std::vector<std::vector<double>> rows;
  for (const Point& p : base.points()) rows.push_back(p.coords);
  // Strictly inside the first point's lower-left quadrant.
  rows.push_back({base.point(0).coords[0] * 0.5, base.point(0).coords[1] * 0.5});
  const Dataset extended = Dataset::from_rows(std::move(rows));
  const DpResult after = dp_solve(extended, 2);

  CHECK(before.solution.members() == after.solution.members());
  CHECK(before.arr == after.arr);
}

TEST_CASE("dp runtime growth sample (informational)") {
  // Convex-position instances of increasing skyline size; times are printed
  // for inspection against the expected quartic trend, not asserted.
  for (int m : {10, 20, 40}) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < m; ++i) {
      const double phi = (static_cast<double>(i) + 0.5) / m * kHalfPi;
      rows.push_back({std::cos(phi), std::sin(phi)});
    }
    const Dataset ds = Dataset::from_rows(std::move(rows));
    REQUIRE(skyline_2d(ds).size() == m);
    const auto t0 = std::chrono::steady_clock::now();
    const DpResult dp = dp_solve(ds, 5);
    const double secs = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    std::cout << "dp skyline=" << m << " k=5 arr=" << dp.arr << " time=" << secs
              << "s\n";
    CHECK(dp.arr >= 0.0);
  }
}
