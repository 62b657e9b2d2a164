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

#include "morse/moea/nsga2.hpp"

#include <stdexcept>
#include <string>

#include "morse/moea/hypervolume.hpp"
#include "morse/parallel.hpp"

namespace morse {

FitnessMatrix ParetoArchive::fitness() const
{
    FitnessMatrix f(static_cast<Index>(entries.size()), kNumObjectives);
    for (std::size_t i = 0; i < entries.size(); ++i) f.row(static_cast<Index>(i)) = entries[i].fitness.transpose();
    return f;
}

const ArchiveEntry& ParetoArchive::find(int id) const
{
    for (const auto& e : entries)
        if (e.id == id) return e;
    throw ContractViolation("archive has no policy with id " + std::to_string(id));
}

Eigen::VectorXd reference_point_for(const FitnessMatrix& fitness)
{
    require(fitness.rows() > 0, "reference point: empty fitness set");
    const Eigen::VectorXd lo = fitness.colwise().minCoeff().transpose();
    const Eigen::VectorXd hi = fitness.colwise().maxCoeff().transpose();
    Eigen::VectorXd margin = 0.1 * (hi - lo);
    for (Index j = 0; j < margin.size(); ++j)
        if (!(margin(j) > 0.0)) margin(j) = 1.0;
    return lo - margin;
}

double front_hypervolume(const FitnessMatrix& fitness, const Eigen::VectorXd& ref)
{
    const Front first = non_dominated_rows(fitness);
    FitnessMatrix pts(static_cast<Index>(first.size()), fitness.cols());
    for (std::size_t i = 0; i < first.size(); ++i) pts.row(static_cast<Index>(i)) = fitness.row(first[i]);
    return hypervolume(points_dominating(pts, ref), ref);
}

namespace {

void evaluate_all(std::vector<EvaluatedIndividual>& inds, const Evaluator& evaluate, std::uint64_t seed,
                  int generation, int jobs)
{
    parallel_for(static_cast<Index>(inds.size()), jobs, [&](Index i) {
        const std::uint64_t stream =
            derive_seed(seed, {stream_tag("evaluate"), static_cast<std::uint64_t>(generation), static_cast<std::uint64_t>(i)});
        try {
            auto& ind = inds[static_cast<std::size_t>(i)];
            ind.fitness = evaluate(ind.genome, stream);
            if (ind.fitness.size() != kNumObjectives || !ind.fitness.allFinite())
                throw std::runtime_error("fitness must be a finite vector of length 3");
        } catch (const std::exception& e) {
            throw std::runtime_error("evaluation failed at generation " + std::to_string(generation) +
                                     ", individual " + std::to_string(i) + ": " + e.what());
        }
    });
}

GenerationMetrics measure(const Population& pop, const Eigen::VectorXd& ref, Index evaluations)
{
    GenerationMetrics m;
    m.generation = pop.generation;
    const FitnessMatrix f = fitness_matrix(pop.members);
    for (const auto& front : non_dominated_sort(f)) m.front_sizes.push_back(static_cast<int>(front.size()));
    m.hypervolume = front_hypervolume(f, ref);
    m.best = f.colwise().maxCoeff().transpose();
    m.evaluations = evaluations;
    return m;
}

}  // namespace

EvolutionResult run_nsga2(const Architecture& arch, const EvoParams& params, const Evaluator& evaluate,
                          std::uint64_t seed, const EvolutionHooks& hooks)
{
    require(params.population >= 2, "evolve: population must be >= 2");
    require(params.generations >= 0, "evolve: generations must be >= 0");
    const auto n = static_cast<std::size_t>(params.population);

    EvolutionResult result;
    Population pop;
    Eigen::VectorXd ref;
    int stalled = 0;
    if (hooks.resume != nullptr) {
        const EvolutionCheckpoint& cp = *hooks.resume;
        require(cp.population.members.size() == n, "resume: checkpoint population size differs from params");
        require(!cp.history.empty(), "resume: checkpoint has no history");
        for (const auto& m : cp.population.members)
            require(m.genome.arch == arch, "resume: checkpoint architecture differs");
        pop = cp.population;
        ref = cp.reference_point;
        result.history = cp.history;
        stalled = cp.stalled;
    } else {
        pop.members.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = derive_stream(seed, {stream_tag("init"), static_cast<std::uint64_t>(i)});
            pop.members[i].genome = init_genome(arch, rng);
        }
        evaluate_all(pop.members, evaluate, seed, 0, params.jobs);
        assign_rank_and_crowding(pop.members);
        ref = reference_point_for(fitness_matrix(pop.members));
        result.history.push_back(measure(pop, ref, static_cast<Index>(n)));
        if (hooks.on_generation) hooks.on_generation(result.history.back());
        if (hooks.on_checkpoint) hooks.on_checkpoint({pop, ref, result.history, stalled});
    }
    result.initial = pop;
    Index evaluations = result.history.back().evaluations;

    const bool converged_already = params.convergence_window > 0 && stalled >= params.convergence_window;
    for (int g = pop.generation + 1; g <= params.generations && !converged_already; ++g) {
        Rng rng = derive_stream(seed, {stream_tag("variation"), static_cast<std::uint64_t>(g)});
        std::vector<EvaluatedIndividual> offspring;
        offspring.reserve(n);
        while (offspring.size() < n) {
            const Genome& a = tournament_select(pop, rng);
            const Genome& b = tournament_select(pop, rng);
            auto [c1, c2] = crossover(a, b, params.variation, rng);
            offspring.push_back({mutate(c1, params.variation, rng), {}, 1, 0.0});
            if (offspring.size() < n) offspring.push_back({mutate(c2, params.variation, rng), {}, 1, 0.0});
        }
        evaluate_all(offspring, evaluate, seed, g, params.jobs);
        evaluations += static_cast<Index>(n);

        std::vector<EvaluatedIndividual> pool = std::move(pop.members);
        pool.insert(pool.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));
        pop = survival_select(std::move(pool), static_cast<Index>(n));
        pop.generation = g;

        const double previous = result.history.back().hypervolume;
        result.history.push_back(measure(pop, ref, evaluations));
        if (hooks.on_generation) hooks.on_generation(result.history.back());

        if (params.convergence_window > 0)
            stalled = result.history.back().hypervolume - previous < params.convergence_epsilon ? stalled + 1 : 0;
        if (hooks.on_checkpoint) hooks.on_checkpoint({pop, ref, result.history, stalled});
        if (params.convergence_window > 0 && stalled >= params.convergence_window) break;
    }

    const Front pareto = non_dominated_rows(fitness_matrix(pop.members));
    int id = 0;
    for (Index i : pareto) {
        const auto& ind = pop.members[static_cast<std::size_t>(i)];
        result.archive.entries.push_back({id++, ind.genome, ind.fitness});
    }
    result.archive.params = params;
    result.archive.seed = seed;
    result.archive.reference_point = ref;
    result.archive.generations_run = pop.generation;
    result.final = std::move(pop);
    return result;
}

EvolutionResult evolve(const NetworkConfig& cfg, const EvoParams& params, const FitnessMode& mode,
                       std::uint64_t seed, const EvolutionHooks& hooks)
{
    validate(cfg);
    NetworkConfig run_cfg = cfg;
    if (params.horizon >= 0) run_cfg.horizon = params.horizon;
    if (mode.kind == FitnessMode::Kind::CVaR)
        require(mode.alpha > 0.0 && mode.alpha < 1.0, "evolve: alpha must lie in (0, 1)");

    EvaluationSettings settings;
    settings.episodes = params.episodes;
    // Individuals are already spread over workers; episodes stay serial.
    settings.jobs = 1;
    const Evaluator evaluator = [&](const Genome& g, std::uint64_t stream) {
        return fitness_from_returns(episode_returns(run_cfg, g, settings, stream), mode);
    };
    EvolutionResult result = run_nsga2(architecture_for(run_cfg, params.hidden), params, evaluator, seed, hooks);
    result.archive.config = run_cfg;
    result.archive.mode = mode;
    return result;
}

}  // namespace morse
