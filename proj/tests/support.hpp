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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <random>
#include <string>

#include "morse/env/config.hpp"
#include "morse/env/inventory.hpp"
#include "morse/moea/nsga2.hpp"
#include "morse/policy/network.hpp"
#include "morse/risk/evaluation.hpp"

namespace morse::test {

/// Serial chain 0 -> 1 -> ... -> nodes-1 with the last node retail. All cost
/// coefficients zero, price 1, one unit-multiplier mode, no randomness.
inline NetworkConfig quiet_chain(int nodes, int products, int horizon = 20)
{
    NetworkConfig c;
    c.name = "quiet";
    c.num_nodes = nodes;
    c.num_products = products;
    c.horizon = horizon;
    c.history = 2;
    for (int m = 0; m < nodes; ++m) c.upstream.push_back(m - 1);
    c.retail = {nodes - 1};
    c.distance = Eigen::VectorXd::Ones(nodes);
    c.price = Eigen::MatrixXd::Ones(nodes, products);
    c.reorder_cost = Eigen::MatrixXd::Zero(nodes, products);
    c.transport_cost = Eigen::MatrixXd::Zero(nodes, products);
    c.holding_cost = Eigen::MatrixXd::Zero(nodes, products);
    c.backlog_cost = Eigen::MatrixXd::Zero(nodes, products);
    c.emission_rate = Eigen::VectorXd::Zero(nodes);
    c.modes = {{"base", 1.0, 1.0, 1.0}};
    c.max_order = Eigen::VectorXi::Constant(nodes, 20);
    c.max_inventory = Eigen::VectorXi::Constant(nodes, 100);
    c.initial_inventory = CountMatrix::Zero(nodes, products);
    c.demand.base_rate = 0.0;
    c.lead_time_rate = 0.0;
    c.discount = 1.0;
    c.demand_normalizer = 10.0;
    return c;
}

inline ActionSet random_action(const NetworkConfig& cfg, Rng& rng)
{
    ActionSet a = ActionSet::zeros(cfg);
    for (int m = 0; m < cfg.num_nodes; ++m) {
        std::uniform_int_distribution<int> order(0, cfg.max_order(m));
        std::uniform_int_distribution<int> mode(0, cfg.num_modes() - 1);
        for (int p = 0; p < cfg.num_products; ++p) {
            a.order(m, p) = order(rng);
            a.mode(m, p) = mode(rng);
        }
    }
    return a;
}

inline PeriodDraws fixed_draws(const NetworkConfig& cfg, const CountMatrix& demand, int lead = 0)
{
    return {demand, Eigen::MatrixXi::Constant(cfg.num_nodes, cfg.num_products, lead)};
}

/// Policy whose output ignores the observation: every block orders
/// tanh(mean_bias) (scaled) with near-zero noise and picks `mode` with
/// probability ~1.
inline Genome constant_policy(const Architecture& arch, double mean_bias, int mode)
{
    Genome g = Genome::zeros(arch);
    const Index out = arch.output_dim();
    const Index bias0 = g.size() - out;
    const int width = 2 + arch.num_modes;
    for (int b = 0; b < arch.num_blocks; ++b) {
        const Index base = bias0 + static_cast<Index>(b) * width;
        g.params(base) = mean_bias;
        g.params(base + 1) = -30.0;
        g.params(base + 2 + mode) = 40.0;
    }
    return g;
}

inline std::shared_ptr<ParetoArchive> archive_of(const NetworkConfig& cfg, std::vector<Genome> genomes,
                                                 std::vector<FitnessVector> fitness)
{
    auto a = std::make_shared<ParetoArchive>();
    a->config = cfg;
    for (std::size_t i = 0; i < genomes.size(); ++i)
        a->entries.push_back({static_cast<int>(i), std::move(genomes[i]), fitness[i]});
    a->reference_point = Eigen::Vector3d::Zero();
    return a;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& label)
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("morse-" + label + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Two fixed-quantity policies on `cfg` that differ only in transport mode:
/// id 0 ships by mode 0 (cheaper, faster) and id 1 by mode 1 (cleaner).
/// Fitness is the mean over `episodes` evaluation episodes.
inline std::shared_ptr<ParetoArchive> mode_pair_archive(const NetworkConfig& cfg, int episodes = 20)
{
    const Architecture arch = architecture_for(cfg, {4});
    std::vector<Genome> genomes{constant_policy(arch, std::atanh(-0.4), 0), constant_policy(arch, std::atanh(-0.4), 1)};
    EvaluationSettings settings;
    settings.episodes = episodes;
    std::vector<FitnessVector> fitness;
    for (const auto& g : genomes) fitness.push_back(evaluate_mean(cfg, g, settings, 1));
    return archive_of(cfg, std::move(genomes), std::move(fitness));
}

}  // namespace morse::test
