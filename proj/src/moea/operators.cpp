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

#include "morse/moea/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace morse {

FitnessMatrix fitness_matrix(std::span<const EvaluatedIndividual> individuals)
{
    if (individuals.empty()) return FitnessMatrix(0, kNumObjectives);
    FitnessMatrix f(static_cast<Index>(individuals.size()), individuals.front().fitness.size());
    for (std::size_t i = 0; i < individuals.size(); ++i) {
        require(individuals[i].fitness.size() == f.cols(), "fitness vectors differ in length");
        f.row(static_cast<Index>(i)) = individuals[i].fitness.transpose();
    }
    return f;
}

void assign_rank_and_crowding(std::span<EvaluatedIndividual> individuals)
{
    const FitnessMatrix f = fitness_matrix(individuals);
    const auto fronts = non_dominated_sort(f);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        const auto& front = fronts[k];
        FitnessMatrix sub(static_cast<Index>(front.size()), f.cols());
        for (std::size_t i = 0; i < front.size(); ++i) sub.row(static_cast<Index>(i)) = f.row(front[i]);
        const Eigen::VectorXd d = crowding_distance(sub);
        for (std::size_t i = 0; i < front.size(); ++i) {
            auto& ind = individuals[static_cast<std::size_t>(front[i])];
            ind.rank = static_cast<int>(k) + 1;
            ind.crowding = d(static_cast<Index>(i));
        }
    }
}

Index tournament_index(std::span<const EvaluatedIndividual> members, Rng& rng)
{
    require(members.size() >= 2, "tournament_select: need at least two members");
    const auto n = static_cast<Index>(members.size());
    std::uniform_int_distribution<Index> first(0, n - 1), second(0, n - 2);
    const Index a = first(rng);
    Index b = second(rng);
    if (b >= a) ++b;
    const auto& x = members[static_cast<std::size_t>(a)];
    const auto& y = members[static_cast<std::size_t>(b)];
    if (x.rank != y.rank) return x.rank < y.rank ? a : b;
    if (x.crowding != y.crowding) return x.crowding > y.crowding ? a : b;
    std::bernoulli_distribution coin(0.5);
    return coin(rng) ? a : b;
}

const Genome& tournament_select(const Population& pop, Rng& rng)
{
    return pop.members[static_cast<std::size_t>(tournament_index(pop.members, rng))].genome;
}

std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, const VariationParams& params, Rng& rng)
{
    require(a.arch == b.arch, "crossover: parents have different architectures");
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Genome c1 = a, c2 = b;
    if (!(uniform(rng) < params.crossover_prob)) return {std::move(c1), std::move(c2)};

    const double exponent = 1.0 / (params.eta_c + 1.0);
    for (Index i = 0; i < a.size(); ++i) {
        const double u = uniform(rng);
        const double swap = uniform(rng);
        const double x1 = a.params(i), x2 = b.params(i);
        const double beta = u <= 0.5 ? std::pow(2.0 * u, exponent) : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
        double y1 = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
        double y2 = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
        if (x1 == x2) y1 = y2 = x1;
        if (swap < 0.5) std::swap(y1, y2);
        c1.params(i) = y1;
        c2.params(i) = y2;
    }
    return {std::move(c1), std::move(c2)};
}

Genome mutate(const Genome& g, const VariationParams& params, Rng& rng)
{
    Genome out = g;
    const double limit = params.weight_limit;
    if (params.mutation_sigma > 0.0 && g.size() > 0) {
        const double p = params.mutation_prob > 0.0 ? params.mutation_prob : 1.0 / static_cast<double>(g.size());
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        std::normal_distribution<double> noise(0.0, params.mutation_sigma);
        for (Index i = 0; i < out.size(); ++i)
            if (uniform(rng) < p) out.params(i) += noise(rng);
    }
    out.params = out.params.cwiseMax(-limit).cwiseMin(limit);
    return out;
}

Population survival_select(std::vector<EvaluatedIndividual> pool, Index n)
{
    require(static_cast<Index>(pool.size()) >= n, "survival_select: pool smaller than target size");
    assign_rank_and_crowding(pool);
    std::vector<Index> order(pool.size());
    std::iota(order.begin(), order.end(), Index{0});
    // Stable: equal rank and crowding keep pool order.
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const auto& x = pool[static_cast<std::size_t>(a)];
        const auto& y = pool[static_cast<std::size_t>(b)];
        if (x.rank != y.rank) return x.rank < y.rank;
        return x.crowding > y.crowding;
    });
    Population out;
    out.members.reserve(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) out.members.push_back(std::move(pool[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]));
    return out;
}

}  // namespace morse
