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
// Exact solver for 2-dimensional datasets under linear utilities with
// weights uniform on the unit square. A linear utility is characterized by
// its weight angle theta = atan(w2/w1); two points swap preference exactly
// at the angle whose tangent is (x drop)/(y gain) between them. Best-point
// regions are therefore angular intervals, the average regret ratio of a
// candidate set decomposes into per-interval integrals with closed forms,
// and the optimal set follows from a dynamic program over interval chains.

#ifndef ARRMIN_DP2D_HPP_
#define ARRMIN_DP2D_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "arrmin/core.hpp"

namespace arrmin {

inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// Skyline point ids ordered by descending first coordinate (equivalently
/// ascending second coordinate); pairwise non-dominated.
struct SkylineIndex {
  std::vector<int> ids;
  int size() const { return static_cast<int>(ids.size()); }
};

inline SkylineIndex skyline_2d(const Dataset& dataset) {
  if (dataset.dim() != 2) throw PreconditionError("skyline_2d requires a 2-dimensional dataset");
  std::vector<int> order(static_cast<std::size_t>(dataset.size()));
  for (int i = 0; i < dataset.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ca = dataset.point(a).coords;
    const auto& cb = dataset.point(b).coords;
    if (ca[0] != cb[0]) return ca[0] > cb[0];
    if (ca[1] != cb[1]) return ca[1] > cb[1];  // higher y first: the lower is dominated
    return a < b;
  });
  SkylineIndex sky;
  double max_y = -1.0;
  for (int id : order) {
    const double y = dataset.point(id).coords[1];
    if (y > max_y) {
      sky.ids.push_back(id);
      max_y = y;
    }
  }
  return sky;
}

/// Angle at which two points yield equal linear utility; utilities with a
/// larger angle prefer the higher-y point. `u` and `v` must be mutually
/// non-dominated and distinct.
inline double separating_theta(const Point& u, const Point& v) {
  const Point& hi_x = u.coords[0] >= v.coords[0] ? u : v;
  const Point& hi_y = u.coords[0] >= v.coords[0] ? v : u;
  const double dx = hi_x.coords[0] - hi_y.coords[0];
  const double dy = hi_y.coords[1] - hi_x.coords[1];
  if (dx <= 0.0 && dy <= 0.0)
    throw PreconditionError("separating angle needs two distinct non-dominating points");
  return std::atan2(dx, dy);
}

/// Separating angles over a skyline, plus each skyline point's best-in-D
/// angular range. Angles are computed on demand; only the range bounds are
/// precomputed (quadratic in the skyline size).
class AngleTable {
 public:
  AngleTable(const Dataset& dataset, SkylineIndex sky)
      : dataset_(&dataset), sky_(std::move(sky)) {
    const int m = sky_.size();
    lower_.assign(static_cast<std::size_t>(m), 0.0);
    upper_.assign(static_cast<std::size_t>(m), kHalfPi);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < i; ++j)
        lower_[static_cast<std::size_t>(i)] =
            std::max(lower_[static_cast<std::size_t>(i)], theta(i, j));
      for (int j = i + 1; j < m; ++j)
        upper_[static_cast<std::size_t>(i)] =
            std::min(upper_[static_cast<std::size_t>(i)], theta(i, j));
    }
  }

  int size() const { return sky_.size(); }
  const Dataset& dataset() const { return *dataset_; }
  const SkylineIndex& skyline() const { return sky_; }
  const Point& point(int pos) const {
    return dataset_->point(sky_.ids[static_cast<std::size_t>(pos)]);
  }

  /// theta between skyline positions i and j; j == size() is the sentinel
  /// "past the end" index and maps to pi/2.
  double theta(int i, int j) const {
    if (j == sky_.size() || i == sky_.size()) return kHalfPi;
    if (i == j) throw PreconditionError("separating angle needs two distinct points");
    return separating_theta(point(i), point(j));
  }

  // Range of angles where this skyline point beats every other point in the
  // dataset. Empty (lower > upper) for skyline points off the convex hull.
  double best_lower(int pos) const { return lower_[static_cast<std::size_t>(pos)]; }
  double best_upper(int pos) const { return upper_[static_cast<std::size_t>(pos)]; }

 private:
  const Dataset* dataset_;
  SkylineIndex sky_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

inline double separating_angle(int i, int j, const AngleTable& table) {
  return table.theta(i, j);
}

namespace detail {

// Integral over t in [ca, cb] of 1 - (A + B t)/(C + D t) dt.
inline double ratio_integral(double ca, double cb, double a_num, double b_num,
                             double c_den, double d_den) {
  if (d_den != 0.0) {
    return (cb - ca) - ((b_num / d_den) * (cb - ca) +
                        ((a_num * d_den - b_num * c_den) / (d_den * d_den)) *
                            std::log((c_den + d_den * cb) / (c_den + d_den * ca)));
  }
  return (cb - ca) - (a_num * (cb - ca) + 0.5 * b_num * (cb * cb - ca * ca)) / c_den;
}

// Mass of 1 - f_p/f_ref over {w in [0,1]^2 : angle(w) in [a, b]}. The ratio
// is constant along rays, so each wedge reduces to a slope integral times
// 1/2; splitting at pi/4 keeps both wedges inside the square with slopes in
// [0, 1] (this is where the w2 <= 1 clipping is absorbed).
inline double preference_wedge_mass(double a, double b, const Point& p, const Point& ref) {
  const double pa = p.coords[0], pb = p.coords[1];
  const double ra = ref.coords[0], rb = ref.coords[1];
  double total = 0.0;
  const double lo1 = a, hi1 = std::min(b, kQuarterPi);
  if (hi1 > lo1)
    total += 0.5 * ratio_integral(std::tan(lo1), std::tan(hi1), pa, pb, ra, rb);
  const double lo2 = std::max(a, kQuarterPi), hi2 = b;
  if (hi2 > lo2)
    total += 0.5 * ratio_integral(std::tan(kHalfPi - hi2), std::tan(kHalfPi - lo2),
                                  pb, pa, rb, ra);
  return total;
}

}  // namespace detail

/// Area of {w in [0,1]^2 : angle(w) in [a, b]}.
inline double angular_region_measure(double a, double b) {
  if (a > b) throw PreconditionError("angular range is inverted");
  double total = 0.0;
  const double hi1 = std::min(b, kQuarterPi);
  if (hi1 > a) total += 0.5 * (std::tan(hi1) - std::tan(a));
  const double lo2 = std::max(a, kQuarterPi);
  if (b > lo2) total += 0.5 * (std::tan(kHalfPi - lo2) - std::tan(kHalfPi - b));
  return total;
}

/// Unnormalized regret mass of an arbitrary point `p` against the dataset
/// optimum over the angular range [theta_l, theta_u]: the range is split by
/// which skyline point is best, and each piece has a closed form.
inline double segment_mass(const AngleTable& table, const Point& p, double theta_l,
                           double theta_u) {
  if (theta_l > theta_u) throw PreconditionError("angular range is inverted");
  if (theta_l < 0.0 || theta_u > kHalfPi)
    throw PreconditionError("angular range must lie within [0, pi/2]");
  double total = 0.0;
  for (int m = 0; m < table.size(); ++m) {
    const double lo = std::max(table.best_lower(m), theta_l);
    const double hi = std::min(table.best_upper(m), theta_u);
    if (hi > lo) total += detail::preference_wedge_mass(lo, hi, p, table.point(m));
  }
  return total;
}

/// segment_mass for skyline position i.
inline double segment_arr(const AngleTable& table, int i, double theta_l, double theta_u) {
  return segment_mass(table, table.point(i), theta_l, theta_u);
}

/// Independent evaluation route for segment_arr: 1-d adaptive
/// Gauss-Kronrod over the angle, with the best point recovered pointwise
/// (no reuse of the region decomposition).
inline double segment_arr_quadrature(const AngleTable& table, int i, double theta_l,
                                     double theta_u) {
  if (theta_l > theta_u) throw PreconditionError("angular range is inverted");
  const Point& p = table.point(i);
  const auto& points = table.dataset().points();
  auto integrand = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    const double fp = p.coords[0] * c + p.coords[1] * s;
    double fbest = 0.0;
    for (const Point& q : points)
      fbest = std::max(fbest, q.coords[0] * c + q.coords[1] * s);
    const double radius = 1.0 / std::max(c, s);
    return (1.0 - fp / fbest) * 0.5 * radius * radius;
  };
  if (theta_l == theta_u) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, theta_l, theta_u, 15, 1e-10);
}

/// Memo of segment_arr values keyed by index triples: the left bound is the
/// angle separating `pred` from `i` (-1 encodes 0) and the right bound the
/// angle separating `i` from `succ` (size() encodes pi/2). Keying by indices
/// avoids comparing floating angles.
class SegmentArrCache {
 public:
  explicit SegmentArrCache(const AngleTable& table) : table_(&table) {}

  double get(int i, int pred, int succ) const {
    const std::uint64_t stride = static_cast<std::uint64_t>(table_->size()) + 2;
    const std::uint64_t key =
        (static_cast<std::uint64_t>(i) * stride + static_cast<std::uint64_t>(pred + 1)) *
            stride +
        static_cast<std::uint64_t>(succ);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const double theta_l = pred < 0 ? 0.0 : table_->theta(pred, i);
    const double theta_u = succ >= table_->size() ? kHalfPi : table_->theta(i, succ);
    const double value = segment_arr(*table_, i, theta_l, std::max(theta_l, theta_u));
    memo_.emplace(key, value);
    return value;
  }

  std::size_t size() const { return memo_.size(); }

 private:
  const AngleTable* table_;
  mutable std::unordered_map<std::uint64_t, double> memo_;
};

/// Exact average regret ratio of an arbitrary subset under the uniform
/// square weight density, by the same integral machinery the solver uses:
/// dominated members never win, the survivors' best-in-subset regions are
/// angular intervals, and each interval is a segment integral.
inline double exact_linear_arr(const AngleTable& table, const SolutionSet& s) {
  const double measure = angular_region_measure(0.0, kHalfPi);
  if (s.empty()) return 1.0;
  const Dataset& dataset = table.dataset();
  std::vector<int> live;
  for (int a : s.members()) {
    bool dominated = false;
    const auto& ca = dataset.point(a).coords;
    for (int b : s.members()) {
      if (a == b) continue;
      const auto& cb = dataset.point(b).coords;
      if (cb[0] >= ca[0] && cb[1] >= ca[1] && (cb[0] > ca[0] || cb[1] > ca[1])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) live.push_back(a);
  }
  std::sort(live.begin(), live.end(), [&](int a, int b) {
    return dataset.point(a).coords[0] > dataset.point(b).coords[0];
  });
  double mass = 0.0;
  for (std::size_t t = 0; t < live.size(); ++t) {
    double lo = 0.0, hi = kHalfPi;
    for (std::size_t u = 0; u < t; ++u)
      lo = std::max(lo, separating_theta(dataset.point(live[t]), dataset.point(live[u])));
    for (std::size_t u = t + 1; u < live.size(); ++u)
      hi = std::min(hi, separating_theta(dataset.point(live[t]), dataset.point(live[u])));
    if (hi > lo) mass += segment_mass(table, dataset.point(live[t]), lo, hi);
  }
  return mass / measure;
}

inline double exact_linear_arr(const Dataset& dataset, const SolutionSet& s) {
  AngleTable table(dataset, skyline_2d(dataset));
  return exact_linear_arr(table, s);
}

struct DpResult {
  SolutionSet solution;
  double arr = 0.0;
  bool k_capped = false;  // k reached or exceeded the skyline size
  SkylineIndex skyline;
};

/// Optimal k-subset under uniform linear utilities on a 2-d dataset.
///
/// arr_opt(r, i, theta_l) = best value achievable when p_i is already chosen
/// and covers angles from theta_l up to the handoff to the next chosen point
/// (or pi/2). States are keyed by (r, i, predecessor index); transitions try
/// every later skyline point whose separating angle does not precede
/// theta_l, plus the sentinel that lets p_i cover the rest. Ties prefer the
/// lower successor index, and the final scan prefers the lowest point id.
inline DpResult dp_solve(const Dataset& dataset, int k) {
  if (dataset.dim() != 2) throw PreconditionError("dp_solve requires a 2-dimensional dataset");
  if (k < 1) throw PreconditionError("k must be >= 1");
  SkylineIndex sky = skyline_2d(dataset);
  const int m = sky.size();

  DpResult result;
  if (k >= m) {
    // The full skyline already has zero regret for every monotone linear
    // utility; padding with dominated points cannot reduce it further.
    result.solution = SolutionSet::of(sky.ids, dataset);
    result.arr = 0.0;
    result.k_capped = k > m;
    result.skyline = std::move(sky);
    return result;
  }

  AngleTable table(dataset, sky);
  SegmentArrCache cache(table);

  // value[(r * m + i) * (m + 1) + pred + 1], pred in [-1, i)
  const std::size_t states = static_cast<std::size_t>(k) * static_cast<std::size_t>(m) *
                             static_cast<std::size_t>(m + 1);
  std::vector<double> value(states, std::numeric_limits<double>::quiet_NaN());
  std::vector<int> back(states, -2);
  auto at = [m](int r, int i, int pred) {
    return (static_cast<std::size_t>(r) * static_cast<std::size_t>(m) +
            static_cast<std::size_t>(i)) *
               static_cast<std::size_t>(m + 1) +
           static_cast<std::size_t>(pred + 1);
  };

  for (int r = 0; r < k; ++r) {
    for (int i = 0; i < m; ++i) {
      for (int pred = -1; pred < i; ++pred) {
        const double theta_l = pred < 0 ? 0.0 : table.theta(pred, i);
        double best = cache.get(i, pred, m);  // sentinel: p_i covers to pi/2
        int best_j = m;
        if (r > 0) {
          for (int j = i + 1; j < m; ++j) {
            if (table.theta(i, j) < theta_l) continue;
            const double cand = cache.get(i, pred, j) + value[at(r - 1, j, i)];
            if (cand < best) {  // strict: lowest j wins ties (sentinel last)
              best = cand;
              best_j = j;
            }
          }
        }
        value[at(r, i, pred)] = best;
        back[at(r, i, pred)] = best_j;
      }
    }
  }

  int first = 0;
  double best_mass = value[at(k - 1, 0, -1)];
  for (int i = 1; i < m; ++i) {
    const double v = value[at(k - 1, i, -1)];
    const bool better =
        v < best_mass ||
        (v == best_mass && sky.ids[static_cast<std::size_t>(i)] <
                               sky.ids[static_cast<std::size_t>(first)]);
    if (better) {
      best_mass = v;
      first = i;
    }
  }

  std::vector<int> chosen{sky.ids[static_cast<std::size_t>(first)]};
  int r = k - 1, i = first, pred = -1;
  while (true) {
    const int j = back[at(r, i, pred)];
    if (j >= m) break;
    chosen.push_back(sky.ids[static_cast<std::size_t>(j)]);
    pred = i;
    i = j;
    --r;
  }

  result.solution = SolutionSet::of(chosen, dataset);
  result.arr = best_mass / angular_region_measure(0.0, kHalfPi);
  result.skyline = std::move(sky);
  return result;
}

}  // namespace arrmin

#endif  // ARRMIN_DP2D_HPP_
