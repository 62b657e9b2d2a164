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

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "morse/env/config.hpp"
#include "morse/moea/operators.hpp"
#include "morse/policy/network.hpp"
#include "morse/risk/evaluation.hpp"

namespace morse {

struct EvoParams {
    int population = 20;
    int generations = 30;
    int episodes = 5;
    /// Last simulated period; < 0 keeps the config's horizon.
    int horizon = -1;
    std::vector<int> hidden{64, 64};
    VariationParams variation;
    /// Stop early once hypervolume improves by less than epsilon for
    /// `convergence_window` consecutive generations. Window 0 disables it.
    double convergence_epsilon = 0.0;
    int convergence_window = 0;
    int jobs = 1;
};

struct GenerationMetrics {
    int generation = 0;
    std::vector<int> front_sizes;
    double hypervolume = 0.0;
    FitnessVector best;   // per-objective maximum over the population
    Index evaluations = 0;
};

struct ArchiveEntry {
    int id = 0;
    Genome genome;
    FitnessVector fitness;
};

/// Non-dominated policies of a finished run plus what is needed to reproduce
/// and re-evaluate them.
struct ParetoArchive {
    std::vector<ArchiveEntry> entries;
    NetworkConfig config;
    EvoParams params;
    FitnessMode mode;
    std::uint64_t seed = 0;
    Eigen::VectorXd reference_point;
    int generations_run = 0;

    [[nodiscard]] FitnessMatrix fitness() const;
    [[nodiscard]] const ArchiveEntry& find(int id) const;
};

struct EvolutionResult {
    ParetoArchive archive;
    std::vector<GenerationMetrics> history;
    /// Generation-0 population, or the resumed population.
    Population initial;
    Population final;
};

/// Population state after a completed generation. Enough to continue a run
/// with results identical to an uninterrupted one.
struct EvolutionCheckpoint {
    Population population;
    Eigen::VectorXd reference_point;
    std::vector<GenerationMetrics> history;
    int stalled = 0;
};

struct EvolutionHooks {
    std::function<void(const GenerationMetrics&)> on_generation;
    std::function<void(const EvolutionCheckpoint&)> on_checkpoint;
    /// Continue from this state instead of a fresh initial population.
    const EvolutionCheckpoint* resume = nullptr;
};

/// Fitness of one genome given the deterministic stream seed derived from
/// (seed, generation, index).
using Evaluator = std::function<FitnessVector(const Genome&, std::uint64_t)>;

/// Generic NSGA-II loop over genomes of `arch`.
EvolutionResult run_nsga2(const Architecture& arch, const EvoParams& params, const Evaluator& evaluate,
                          std::uint64_t seed, const EvolutionHooks& hooks = {});

/// Policy search on an inventory network with mean or CVaR fitness.
EvolutionResult evolve(const NetworkConfig& cfg, const EvoParams& params, const FitnessMode& mode,
                       std::uint64_t seed, const EvolutionHooks& hooks = {});

/// Reference point below every row: min - 10% of the column range (or 1).
Eigen::VectorXd reference_point_for(const FitnessMatrix& fitness);

/// Hypervolume of the first front of `fitness` w.r.t. ref, ignoring rows
/// that do not dominate ref.
double front_hypervolume(const FitnessMatrix& fitness, const Eigen::VectorXd& ref);

}  // namespace morse
