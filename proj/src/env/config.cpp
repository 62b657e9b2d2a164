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

#include "morse/env/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace morse {

bool NetworkConfig::is_retail(int node) const
{
    return std::find(retail.begin(), retail.end(), node) != retail.end();
}

std::vector<int> NetworkConfig::downstream(int node) const
{
    std::vector<int> out;
    for (int m = 0; m < num_nodes; ++m)
        if (upstream[static_cast<std::size_t>(m)] == node) out.push_back(m);
    return out;
}

double default_demand_normalizer(const DemandParams& demand)
{
    double n = 2.0 * demand.base_rate * (1.0 + demand.amplitude);
    return n > 0.0 ? n : 1.0;
}

namespace {

void require_shape(const Eigen::MatrixXd& m, int rows, int cols, const char* name)
{
    require(m.rows() == rows && m.cols() == cols,
            std::string("network config: ") + name + " must be num_nodes x num_products");
    require((m.array() >= 0.0).all() && m.allFinite(),
            std::string("network config: ") + name + " must be finite and nonnegative");
}

}  // namespace

void validate(const NetworkConfig& cfg)
{
    require(cfg.num_nodes >= 1, "network config: num_nodes must be >= 1");
    require(cfg.num_products >= 1, "network config: num_products must be >= 1");
    require(cfg.horizon >= 0, "network config: horizon must be >= 0");
    require(cfg.history >= 1, "network config: history must be >= 1");
    const auto n = static_cast<std::size_t>(cfg.num_nodes);
    require(cfg.upstream.size() == n, "network config: upstream needs one entry per node");
    require(cfg.upstream[0] == -1, "network config: node 0 must be the root");
    // Every non-root node points at a lower id, so the graph is a tree rooted at 0.
    for (std::size_t m = 1; m < n; ++m) {
        int u = cfg.upstream[m];
        require(u >= 0 && u < static_cast<int>(m),
                "network config: upstream of node " + std::to_string(m) + " must be an earlier node");
    }
    require(!cfg.retail.empty(), "network config: at least one retail node");
    for (int r : cfg.retail)
        require(r >= 0 && r < cfg.num_nodes, "network config: retail id out of range");

    require(cfg.distance.size() == cfg.num_nodes && (cfg.distance.array() >= 0.0).all(),
            "network config: distance must be nonnegative, one per node");
    require_shape(cfg.price, cfg.num_nodes, cfg.num_products, "price");
    require_shape(cfg.reorder_cost, cfg.num_nodes, cfg.num_products, "reorder_cost");
    require_shape(cfg.transport_cost, cfg.num_nodes, cfg.num_products, "transport_cost");
    require_shape(cfg.holding_cost, cfg.num_nodes, cfg.num_products, "holding_cost");
    require_shape(cfg.backlog_cost, cfg.num_nodes, cfg.num_products, "backlog_cost");
    require(cfg.emission_rate.size() == cfg.num_nodes && (cfg.emission_rate.array() >= 0.0).all(),
            "network config: emission_rate must be nonnegative, one per node");

    require(!cfg.modes.empty(), "network config: at least one transport mode");
    for (const auto& mode : cfg.modes)
        require(mode.cost_multiplier > 0.0 && mode.emission_multiplier > 0.0 && mode.lead_multiplier > 0.0,
                "network config: transport multipliers must be positive");

    require(cfg.max_order.size() == cfg.num_nodes && (cfg.max_order.array() >= 0).all(),
            "network config: max_order must be nonnegative, one per node");
    require(cfg.max_inventory.size() == cfg.num_nodes && (cfg.max_inventory.array() >= 0).all(),
            "network config: max_inventory must be nonnegative, one per node");
    require(cfg.initial_inventory.rows() == cfg.num_nodes && cfg.initial_inventory.cols() == cfg.num_products,
            "network config: initial_inventory must be num_nodes x num_products");
    for (int m = 0; m < cfg.num_nodes; ++m)
        for (int p = 0; p < cfg.num_products; ++p)
            require(cfg.initial_inventory(m, p) >= 0 && cfg.initial_inventory(m, p) <= cfg.max_inventory(m),
                    "network config: initial_inventory must lie in [0, max_inventory]");

    const auto& d = cfg.demand;
    require(d.base_rate >= 0.0 && std::isfinite(d.base_rate), "network config: demand base rate must be >= 0");
    require(d.amplitude >= 0.0 && d.amplitude <= 1.0, "network config: demand amplitude must lie in [0, 1]");
    require(d.spike_probability >= 0.0 && d.spike_probability <= 1.0,
            "network config: spike probability must lie in [0, 1]");
    require(d.spike_multiplier >= 0.0, "network config: spike multiplier must be >= 0");
    require(cfg.lead_time_rate >= 0.0, "network config: lead time rate must be >= 0");
    require(cfg.discount > 0.0 && cfg.discount <= 1.0, "network config: discount must lie in (0, 1]");
    require(cfg.demand_normalizer > 0.0, "network config: demand normalizer must be > 0");
}

}  // namespace morse
