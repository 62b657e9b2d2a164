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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "morse/common.hpp"
#include "morse/env/inventory.hpp"
#include "morse/policy/network.hpp"
#include "morse/risk/estimators.hpp"
#include "morse/rng.hpp"

namespace morse {

struct FitnessMode {
    enum class Kind { Mean, CVaR };
    Kind kind = Kind::Mean;
    double alpha = 0.9;

    static FitnessMode mean() { return {Kind::Mean, 0.9}; }
    static FitnessMode cvar(double alpha) { return {Kind::CVaR, alpha}; }
    [[nodiscard]] std::string name() const { return kind == Kind::Mean ? "mean" : "cvar"; }
};

/// Sums gamma^t * step_fn(t) for t = 0..horizon.
template <class StepFn>
RewardVector discounted_rollout(int horizon, double gamma, StepFn&& step_fn)
{
    require(gamma >= 0.0 && gamma <= 1.0, "rollout: discount must lie in [0, 1]");
    RewardVector total = RewardVector::Zero();
    double weight = 1.0;
    for (int t = 0; t <= horizon; ++t) {
        total += weight * step_fn(t);
        weight *= gamma;
    }
    return total;
}

/// One episode of `genome` on periods 0..horizon from a fresh reset.
RewardVector rollout(const NetworkConfig& cfg, const Genome& genome, int horizon, double gamma,
                     EpisodeStreams& streams, std::span<const Disruption> disruptions = {});

/// n_e x n_f discounted returns, one row per episode, in seed order.
struct EpisodeReturns {
    Eigen::MatrixXd returns;
    std::vector<std::uint64_t> seeds;
};

struct EvaluationSettings {
    int episodes = 5;
    int horizon = -1;       // < 0: cfg.horizon
    double discount = -1.0; // < 0: cfg.discount
    int jobs = 1;
};

/// Episode e runs on EpisodeStreams(derive_seed(seed, {e})).
EpisodeReturns episode_returns(const NetworkConfig& cfg, const Genome& genome, const EvaluationSettings& settings,
                               std::uint64_t seed);

FitnessVector mean_fitness(const EpisodeReturns& r);
FitnessVector cvar_fitness(const EpisodeReturns& r, double alpha);
FitnessVector fitness_from_returns(const EpisodeReturns& r, const FitnessMode& mode);

FitnessVector evaluate_mean(const NetworkConfig& cfg, const Genome& genome, const EvaluationSettings& settings,
                            std::uint64_t seed);
FitnessVector evaluate_cvar(const NetworkConfig& cfg, const Genome& genome, double alpha,
                            const EvaluationSettings& settings, std::uint64_t seed);

/// Long format: episode,objective,value with objectives named profit,
/// neg_emissions, neg_leadtime.
void write_returns_csv(std::ostream& out, const EpisodeReturns& r);
EpisodeReturns read_returns_csv(std::istream& in);

const char* objective_name(int j);

}  // namespace morse
