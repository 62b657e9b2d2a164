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

#include <span>
#include <utility>
#include <vector>

#include "morse/common.hpp"
#include "morse/moea/sorting.hpp"
#include "morse/policy/network.hpp"
#include "morse/rng.hpp"

namespace morse {

struct VariationParams {
    double crossover_prob = 0.9;
    double eta_c = 15.0;
    /// Per-gene mutation probability; <= 0 means 1 / n_theta.
    double mutation_prob = 0.0;
    double mutation_sigma = 0.1;
    double weight_limit = 10.0;
};

struct EvaluatedIndividual {
    Genome genome;
    FitnessVector fitness;
    int rank = 1;
    double crowding = 0.0;
};

struct Population {
    std::vector<EvaluatedIndividual> members;
    int generation = 0;
};

FitnessMatrix fitness_matrix(std::span<const EvaluatedIndividual> individuals);

/// Sorts into fronts and writes rank and crowding into every individual.
void assign_rank_and_crowding(std::span<EvaluatedIndividual> individuals);

/// Binary tournament: two distinct members drawn uniformly; lower rank wins,
/// then larger crowding, then a fair coin. Returns the winner's index.
Index tournament_index(std::span<const EvaluatedIndividual> members, Rng& rng);
const Genome& tournament_select(const Population& pop, Rng& rng);

/// Simulated binary crossover (unbounded form) applied to every coordinate
/// with probability crossover_prob per pair; children are swapped per
/// coordinate with probability 1/2.
std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, const VariationParams& params, Rng& rng);

/// Gaussian perturbation of each gene with probability mutation_prob, then
/// clipping to [-weight_limit, weight_limit].
Genome mutate(const Genome& g, const VariationParams& params, Rng& rng);

/// Top-N by front, truncating the overflowing front by descending crowding
/// (stable in input order). Rank and crowding are recomputed over the pool.
Population survival_select(std::vector<EvaluatedIndividual> pool, Index n);

}  // namespace morse
