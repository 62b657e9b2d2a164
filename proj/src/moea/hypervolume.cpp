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

#include "morse/moea/hypervolume.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace morse {

namespace {

using Points = std::vector<Eigen::VectorXd>;

double sweep2d(Points pts, const Eigen::VectorXd& ref)
{
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a(0) > b(0); });
    double area = 0.0, best_y = ref(1);
    for (const auto& p : pts) {
        if (p(1) > best_y) {
            area += (p(0) - ref(0)) * (p(1) - best_y);
            best_y = p(1);
        }
    }
    return area;
}

double slice(Points pts, const Eigen::VectorXd& ref)
{
    const Index dim = ref.size();
    if (pts.empty()) return 0.0;
    if (dim == 1) {
        double best = ref(0);
        for (const auto& p : pts) best = std::max(best, p(0));
        return best - ref(0);
    }
    if (dim == 2) return sweep2d(std::move(pts), ref);

    std::sort(pts.begin(), pts.end(), [dim](const auto& a, const auto& b) { return a(dim - 1) > b(dim - 1); });
    const Eigen::VectorXd sub_ref = ref.head(dim - 1);
    Points active;
    double volume = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        active.push_back(pts[k].head(dim - 1));
        const double top = pts[k](dim - 1);
        const double bottom = k + 1 < pts.size() ? pts[k + 1](dim - 1) : ref(dim - 1);
        if (top > bottom) volume += slice(active, sub_ref) * (top - bottom);
    }
    return volume;
}

}  // namespace

double hypervolume(const Eigen::MatrixXd& points, const Eigen::VectorXd& ref)
{
    if (points.rows() == 0) return 0.0;
    require(points.cols() == ref.size(), "hypervolume: reference point has the wrong dimension");
    Points pts;
    for (Index i = 0; i < points.rows(); ++i) {
        require((points.row(i).transpose().array() >= ref.array()).all(),
                "hypervolume: every point must dominate the reference point");
        pts.emplace_back(points.row(i).transpose());
    }
    return slice(std::move(pts), ref);
}

Eigen::MatrixXd points_dominating(const Eigen::MatrixXd& points, const Eigen::VectorXd& ref)
{
    std::vector<Index> keep;
    for (Index i = 0; i < points.rows(); ++i)
        if ((points.row(i).transpose().array() >= ref.array()).all()) keep.push_back(i);
    Eigen::MatrixXd out(static_cast<Index>(keep.size()), points.cols());
    for (std::size_t k = 0; k < keep.size(); ++k) out.row(static_cast<Index>(k)) = points.row(keep[k]);
    return out;
}

}  // namespace morse
