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

#include "morse/risk/evaluation.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "morse/parallel.hpp"

namespace morse {

const char* objective_name(int j)
{
    static constexpr const char* names[] = {"profit", "neg_emissions", "neg_leadtime"};
    require(j >= 0 && j < kNumObjectives, "objective index out of range");
    return names[j];
}

RewardVector rollout(const NetworkConfig& cfg, const Genome& genome, int horizon, double gamma,
                     EpisodeStreams& streams, std::span<const Disruption> disruptions)
{
    require(horizon >= 0 && horizon <= cfg.horizon, "rollout: horizon exceeds the configured horizon");
    SimState state = reset(cfg);
    return discounted_rollout(horizon, gamma, [&](int t) {
        try {
            const ActionSet action = act(genome, state, cfg, streams.policy);
            return advance(state, action, cfg, disruptions, streams.env).reward;
        } catch (const ContractViolation& e) {
            throw ContractViolation("period " + std::to_string(t) + ": " + e.what());
        }
    });
}

EpisodeReturns episode_returns(const NetworkConfig& cfg, const Genome& genome, const EvaluationSettings& settings,
                               std::uint64_t seed)
{
    require(settings.episodes >= 1, "evaluation: need at least one episode");
    const int horizon = settings.horizon < 0 ? cfg.horizon : settings.horizon;
    const double gamma = settings.discount < 0.0 ? cfg.discount : settings.discount;
    EpisodeReturns out;
    out.returns.resize(settings.episodes, kNumObjectives);
    out.seeds.resize(static_cast<std::size_t>(settings.episodes));
    for (int e = 0; e < settings.episodes; ++e)
        out.seeds[static_cast<std::size_t>(e)] = derive_seed(seed, {static_cast<std::uint64_t>(e)});
    parallel_for(settings.episodes, settings.jobs, [&](Index e) {
        EpisodeStreams streams(out.seeds[static_cast<std::size_t>(e)]);
        out.returns.row(e) = rollout(cfg, genome, horizon, gamma, streams).transpose();
    });
    return out;
}

FitnessVector mean_fitness(const EpisodeReturns& r)
{
    require(r.returns.rows() >= 1, "mean fitness: no episodes");
    return r.returns.colwise().mean().transpose();
}

FitnessVector cvar_fitness(const EpisodeReturns& r, double alpha)
{
    return estimate_risk(r.returns, alpha).cvar;
}

FitnessVector fitness_from_returns(const EpisodeReturns& r, const FitnessMode& mode)
{
    return mode.kind == FitnessMode::Kind::Mean ? mean_fitness(r) : cvar_fitness(r, mode.alpha);
}

FitnessVector evaluate_mean(const NetworkConfig& cfg, const Genome& genome, const EvaluationSettings& settings,
                            std::uint64_t seed)
{
    return mean_fitness(episode_returns(cfg, genome, settings, seed));
}

FitnessVector evaluate_cvar(const NetworkConfig& cfg, const Genome& genome, double alpha,
                            const EvaluationSettings& settings, std::uint64_t seed)
{
    return cvar_fitness(episode_returns(cfg, genome, settings, seed), alpha);
}

void write_returns_csv(std::ostream& out, const EpisodeReturns& r)
{
    const auto saved = out.precision(17);
    out << "episode,objective,value\n";
    for (Index e = 0; e < r.returns.rows(); ++e)
        for (int j = 0; j < r.returns.cols(); ++j)
            out << e << ',' << objective_name(j) << ',' << r.returns(e, j) << '\n';
    out.precision(saved);
}

EpisodeReturns read_returns_csv(std::istream& in)
{
    std::string line;
    require(static_cast<bool>(std::getline(in, line)) && line == "episode,objective,value",
            "returns csv: bad header");
    std::map<std::string, int> column;
    for (int j = 0; j < kNumObjectives; ++j) column[objective_name(j)] = j;
    std::map<Index, Eigen::Vector3d> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string episode, objective, value;
        std::getline(ss, episode, ',');
        std::getline(ss, objective, ',');
        std::getline(ss, value, ',');
        require(column.count(objective) == 1, "returns csv: unknown objective '" + objective + "'");
        auto [it, inserted] = rows.try_emplace(std::stoll(episode), Eigen::Vector3d::Zero());
        it->second(column[objective]) = std::stod(value);
    }
    EpisodeReturns r;
    r.returns.resize(static_cast<Index>(rows.size()), kNumObjectives);
    Index i = 0;
    for (const auto& [e, v] : rows) r.returns.row(i++) = v.transpose();
    return r;
}

}  // namespace morse
