// Copyright 2026 The morse Authors
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

#pragma once

// Reference implementations used only by tests. They favour obviousness
// over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

namespace morse::oracle {

using Point = std::vector<double>;

inline bool dominates(const Point& a, const Point& b)
{
    bool strictly = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] < b[j]) return false;
        if (a[j] > b[j]) strictly = true;
    }
    return strictly;
}

/// Peels non-dominated layers one at a time.
inline std::vector<std::vector<long>> fronts(const std::vector<Point>& pts)
{
    std::set<long> left;
    for (long i = 0; i < static_cast<long>(pts.size()); ++i) left.insert(i);
    std::vector<std::vector<long>> out;
    while (!left.empty()) {
        std::vector<long> layer;
        for (long i : left) {
            bool beaten = false;
            for (long k : left)
                if (k != i && dominates(pts[static_cast<std::size_t>(k)], pts[static_cast<std::size_t>(i)])) beaten = true;
            if (!beaten) layer.push_back(i);
        }
        for (long i : layer) left.erase(i);
        out.push_back(layer);
    }
    return out;
}

/// Crowding with the documented conventions: stable order by value then
/// position, boundaries infinite, constant objectives skipped, fronts of two
/// or fewer all infinite.
inline std::vector<double> crowding(const std::vector<Point>& front)
{
    const std::size_t n = front.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n, 0.0);
    if (n <= 2) return std::vector<double>(n, inf);
    for (std::size_t j = 0; j < front[0].size(); ++j) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        // Insertion sort keeps equal values in input order.
        for (std::size_t a = 1; a < n; ++a)
            for (std::size_t b = a; b > 0 && front[order[b]][j] < front[order[b - 1]][j]; --b)
                std::swap(order[b], order[b - 1]);
        const double lo = front[order.front()][j];
        const double hi = front[order.back()][j];
        if (!(hi > lo)) continue;
        d[order.front()] = inf;
        d[order.back()] = inf;
        for (std::size_t k = 1; k + 1 < n; ++k)
            d[order[k]] += (front[order[k + 1]][j] - front[order[k - 1]][j]) / (hi - lo);
    }
    return d;
}

/// Indices kept by Top-N: whole fronts while they fit, then the overflowing
/// front by descending crowding, equal crowding in index order.
inline std::vector<long> survivors(const std::vector<Point>& pts, std::size_t n)
{
    std::vector<long> kept;
    for (const auto& f : fronts(pts)) {
        if (kept.size() + f.size() <= n) {
            kept.insert(kept.end(), f.begin(), f.end());
            continue;
        }
        std::vector<Point> members;
        for (long i : f) members.push_back(pts[static_cast<std::size_t>(i)]);
        const auto cd = crowding(members);
        std::vector<std::size_t> order(f.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
        for (std::size_t k = 0; kept.size() < n; ++k) kept.push_back(f[order[k]]);
        break;
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

/// Exact hypervolume for integer coordinates in [ref, ref + extent): counts
/// unit cells covered by at least one box.
inline double grid_hypervolume(const std::vector<std::vector<int>>& pts, const std::vector<int>& ref, int extent)
{
    long count = 0;
    for (int x = ref[0]; x < ref[0] + extent; ++x)
        for (int y = ref[1]; y < ref[1] + extent; ++y)
            for (int z = ref[2]; z < ref[2] + extent; ++z) {
                for (const auto& p : pts)
                    if (x < p[0] && y < p[1] && z < p[2]) {
                        ++count;
                        break;
                    }
            }
    return static_cast<double>(count);
}

/// Exact hypervolume for arbitrary coordinates. Each axis is cut at the
/// reference value and every point coordinate above it; a grid cell counts
/// when some point weakly dominates its upper corner.
inline double compressed_hypervolume(const std::vector<Point>& pts, const Point& ref)
{
    const std::size_t d = ref.size();
    std::vector<std::vector<double>> cuts(d);
    for (std::size_t k = 0; k < d; ++k) {
        cuts[k].push_back(ref[k]);
        for (const auto& p : pts)
            if (p[k] > ref[k]) cuts[k].push_back(p[k]);
        std::sort(cuts[k].begin(), cuts[k].end());
        cuts[k].erase(std::unique(cuts[k].begin(), cuts[k].end()), cuts[k].end());
    }
    std::vector<std::size_t> cell(d, 0);
    double total = 0.0;
    for (;;) {
        bool empty = false;
        for (std::size_t k = 0; k < d; ++k) empty = empty || cell[k] + 1 >= cuts[k].size();
        if (empty) break;
        bool covered = false;
        for (const auto& p : pts) {
            bool all = true;
            for (std::size_t k = 0; k < d && all; ++k) all = p[k] >= cuts[k][cell[k] + 1];
            if (all) {
                covered = true;
                break;
            }
        }
        if (covered) {
            double v = 1.0;
            for (std::size_t k = 0; k < d; ++k) v *= cuts[k][cell[k] + 1] - cuts[k][cell[k]];
            total += v;
        }
        std::size_t k = 0;
        while (k < d && ++cell[k] + 1 >= cuts[k].size()) cell[k++] = 0;
        if (k == d) break;
    }
    return total;
}

inline double poisson_pmf(int k, double lambda)
{
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

/// E[max(1, X)] and Var[max(1, X)] for X ~ Poisson(lambda), by summing the pmf.
inline std::pair<double, double> max1_poisson_moments(double lambda)
{
    double m1 = 0.0, m2 = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double v = std::max(1, k);
        const double p = poisson_pmf(k, lambda);
        m1 += v * p;
        m2 += v * v * p;
    }
    return {m1, m2 - m1 * m1};
}

/// Lower-tail expected shortfall of N(0, 1) at level alpha: -phi(z) / (1 - alpha)
/// with z the (1 - alpha)-quantile, found by bisection on erfc.
inline double normal_expected_shortfall(double alpha)
{
    const double tail = 1.0 - alpha;
    double lo = -10.0, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
        (cdf < tail ? lo : hi) = mid;
    }
    const double z = 0.5 * (lo + hi);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    return -pdf / tail;
}

}  // namespace morse::oracle
