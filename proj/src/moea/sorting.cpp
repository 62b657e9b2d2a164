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

#include "morse/moea/sorting.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "morse/moea/dominance.hpp"

namespace morse {

std::vector<Front> non_dominated_sort(const FitnessMatrix& fitness)
{
    const Index n = fitness.rows();
    std::vector<Front> fronts;
    if (n == 0) return fronts;

    // Deb's bookkeeping: who each row dominates, and how many dominate it.
    std::vector<std::vector<Index>> dominated(static_cast<std::size_t>(n));
    std::vector<Index> count(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i) {
        for (Index l = i + 1; l < n; ++l) {
            if (dominates(fitness.row(i), fitness.row(l))) {
                dominated[static_cast<std::size_t>(i)].push_back(l);
                ++count[static_cast<std::size_t>(l)];
            } else if (dominates(fitness.row(l), fitness.row(i))) {
                dominated[static_cast<std::size_t>(l)].push_back(i);
                ++count[static_cast<std::size_t>(i)];
            }
        }
    }

    Front current;
    for (Index i = 0; i < n; ++i)
        if (count[static_cast<std::size_t>(i)] == 0) current.push_back(i);
    while (!current.empty()) {
        Front next;
        for (Index i : current)
            for (Index l : dominated[static_cast<std::size_t>(i)])
                if (--count[static_cast<std::size_t>(l)] == 0) next.push_back(l);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

Eigen::VectorXi front_ranks(const std::vector<Front>& fronts, Index n)
{
    Eigen::VectorXi rank = Eigen::VectorXi::Zero(n);
    for (std::size_t k = 0; k < fronts.size(); ++k)
        for (Index i : fronts[k]) rank(i) = static_cast<int>(k) + 1;
    return rank;
}

Eigen::VectorXd crowding_distance(const FitnessMatrix& front)
{
    const Index n = front.rows();
    constexpr double inf = std::numeric_limits<double>::infinity();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    if (n <= 2) {
        d.setConstant(inf);
        return d;
    }
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index j = 0; j < front.cols(); ++j) {
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return front(a, j) < front(b, j); });
        const double lo = front(order.front(), j), hi = front(order.back(), j);
        if (!(hi > lo)) continue;
        d(order.front()) = inf;
        d(order.back()) = inf;
        for (Index k = 1; k + 1 < n; ++k) {
            const auto idx = order[static_cast<std::size_t>(k)];
            d(idx) += (front(order[static_cast<std::size_t>(k + 1)], j) - front(order[static_cast<std::size_t>(k - 1)], j)) /
                      (hi - lo);
        }
    }
    return d;
}

Front non_dominated_rows(const FitnessMatrix& fitness)
{
    Front out;
    for (Index i = 0; i < fitness.rows(); ++i) {
        bool dominated = false;
        for (Index l = 0; l < fitness.rows() && !dominated; ++l)
            dominated = l != i && dominates(fitness.row(l), fitness.row(i));
        if (!dominated) out.push_back(i);
    }
    return out;
}

}  // namespace morse
