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

#include <string>
#include <vector>

#include <Eigen/Core>

#include "morse/common.hpp"

namespace morse {

struct TransportMode {
    std::string name;
    double cost_multiplier = 1.0;
    double emission_multiplier = 1.0;
    double lead_multiplier = 1.0;
};

/// Customer demand law. Rate is lambda0 or, when seasonal,
/// lambda0 * (1 + amplitude * sin(2 pi frequency t + phase)).
///
/// Optional spikes model heavy tails: with probability spike_probability a
/// period is a spike period and every retail rate is multiplied by
/// spike_multiplier. One spike draw is shared by all retail nodes.
struct DemandParams {
    double base_rate = 0.0;
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
    bool seasonal = false;
    double spike_probability = 0.0;
    double spike_multiplier = 1.0;
};

/// Full parameterization of the supply network. Node 0 is the root and
/// sources from an unlimited raw-material supply. Matrices are nodes x products.
struct NetworkConfig {
    std::string name;
    int num_nodes = 0;
    int num_products = 0;
    /// Last period index; an episode covers periods 0..horizon inclusive.
    int horizon = 0;
    /// Periods of order and demand history in the observation.
    int history = 4;

    /// upstream[m] is the supplier of node m; -1 for the root.
    std::vector<int> upstream;
    /// Nodes facing customer demand.
    std::vector<int> retail;

    Eigen::VectorXd distance;        // to upstream supplier
    Eigen::MatrixXd price;           // P_s
    Eigen::MatrixXd reorder_cost;    // C
    Eigen::MatrixXd transport_cost;  // T_r base, per item and distance unit
    Eigen::MatrixXd holding_cost;    // I
    Eigen::MatrixXd backlog_cost;    // B
    Eigen::VectorXd emission_rate;   // per item and distance unit, base mode
    std::vector<TransportMode> modes;

    Eigen::VectorXi max_order;       // o_r_max per node
    Eigen::VectorXi max_inventory;   // i_max per node
    /// On-hand stock at reset; nodes x products.
    CountMatrix initial_inventory;

    DemandParams demand;
    double lead_time_rate = 0.0;     // lambda_tau
    double discount = 0.99;
    /// Scale for backlog and demand entries of the observation.
    double demand_normalizer = 1.0;

    [[nodiscard]] int num_modes() const { return static_cast<int>(modes.size()); }
    [[nodiscard]] bool is_retail(int node) const;
    [[nodiscard]] std::vector<int> downstream(int node) const;
    [[nodiscard]] int observation_size() const
    {
        return num_nodes * num_products * (3 + 2 * history);
    }
};

/// Throws ContractViolation naming the first broken invariant.
void validate(const NetworkConfig& cfg);

/// Default normalizer for backlog/demand observation entries:
/// 2 * lambda0 * (1 + A_s), or 1 when that is zero.
double default_demand_normalizer(const DemandParams& demand);

}  // namespace morse
