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
#include <deque>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "morse/common.hpp"
#include "morse/env/config.hpp"
#include "morse/rng.hpp"

namespace morse {

struct Shipment {
    int node = 0;
    int product = 0;
    std::int64_t quantity = 0;
    int arrival = 0;

    bool operator==(const Shipment&) const = default;
};

/// Live state of one episode.
///
/// Every node keeps a backlog per outgoing channel: one channel per
/// downstream node (ascending id) followed by the customer channel when the
/// node is retail. `backlog` is the per-node sum over channels.
struct SimState {
    int t = 0;
    CountMatrix on_hand;
    CountMatrix backlog;
    std::vector<CountMatrix> channel_backlog;
    /// In-flight shipments in the order they were dispatched.
    std::vector<Shipment> pipeline;
    /// Most recent period first; always exactly `history` entries.
    std::deque<CountMatrix> order_history;
    std::deque<CountMatrix> demand_history;

    bool operator==(const SimState& other) const;
};

/// Reorder quantity and transport mode per node and product.
struct ActionSet {
    CountMatrix order;
    ModeMatrix mode;

    static ActionSet zeros(const NetworkConfig& cfg);
};

enum class DisruptionKind { EmissionTax, CostSurge };

/// Scripted shock, active on periods [start, start + duration).
struct Disruption {
    DisruptionKind kind = DisruptionKind::CostSurge;
    int start = 0;
    int duration = 1;
    /// Emission tax: currency per emission unit above the per-period threshold.
    double tax_rate = 0.0;
    double emission_threshold = 0.0;
    /// Cost surge: factor on reorder and transport cost.
    double cost_multiplier = 1.0;

    [[nodiscard]] bool active_at(int period) const { return period >= start && period < start + duration; }
};

void validate(const Disruption& d);
const char* to_string(DisruptionKind kind);
DisruptionKind disruption_kind_from_string(const std::string& name);

/// Everything that happened in one period; rows of the transition CSV.
struct StepRecord {
    int t = 0;
    CountMatrix order;
    ModeMatrix mode;
    Eigen::MatrixXi lead_time;
    CountMatrix arrived;
    CountMatrix demand;           // customer demand plus downstream orders
    CountMatrix customer_demand;
    CountMatrix shipped;
    CountMatrix lost;             // arrivals discarded at the storage cap
    CountMatrix dispatched;       // quantity put in transit toward each node
    CountMatrix on_hand;
    CountMatrix backlog;
    CountMatrix pipeline;

    double revenue = 0.0;
    double reorder_cost = 0.0;
    double transport_cost = 0.0;
    double holding_cost = 0.0;
    double backlog_cost = 0.0;
    double emission_tax = 0.0;
    double emissions = 0.0;
    double lead_time_total = 0.0;
    bool cost_surge_active = false;
    bool emission_tax_active = false;

    RewardVector reward = RewardVector::Zero();
};

struct StepResult {
    SimState state;
    RewardVector reward;
    StepRecord record;
};

/// Exogenous randomness of one period. Drawn before the actions are known,
/// so two policies fed the same stream face the same demand and delays.
struct PeriodDraws {
    CountMatrix customer_demand;     // nodes x products, zero off retail nodes
    Eigen::MatrixXi lead_draw;       // Poisson(lambda_tau) per node and product
};

/// Demand first, then one lead-time draw per node and product.
PeriodDraws draw_period(const NetworkConfig& cfg, int t, Rng& rng);

/// max(1, round(lead_multiplier[mode] * draw)).
int lead_time_from_draw(const NetworkConfig& cfg, int mode, int draw);

/// Poisson customer demand for period t, nodes x products (zero rows for
/// non-retail nodes).
CountMatrix sample_demand(const NetworkConfig& cfg, int t, Rng& rng);

/// Demand rate before spikes at period t.
double demand_rate(const DemandParams& demand, int t);

/// max(1, round(lead_multiplier[mode] * X)) with X ~ Poisson(lambda_tau).
int sample_lead_time(const NetworkConfig& cfg, int mode, Rng& rng);

SimState reset(const NetworkConfig& cfg);

/// Advances `state` by one period in place. Requires state.t <= horizon.
/// Random draws consumed per period do not depend on the actions.
StepRecord advance(SimState& state, const ActionSet& actions, const NetworkConfig& cfg,
                   std::span<const Disruption> disruptions, Rng& rng);
StepRecord advance(SimState& state, const ActionSet& actions, const NetworkConfig& cfg,
                   std::span<const Disruption> disruptions, const PeriodDraws& draws);

StepResult step(const SimState& state, const ActionSet& actions, const NetworkConfig& cfg,
                std::span<const Disruption> disruptions, Rng& rng);

/// V[t]: quantity in transit to each node and product.
CountMatrix pipeline_inventory(const SimState& state, const NetworkConfig& cfg);

/// Observation layout, each block flattened node-major:
///   on-hand / i_max, pipeline / i_max, backlog / normalizer,
///   orders[t-1..t-n] / o_max, demand[t-1..t-n] / normalizer.
/// Entries are clipped to [0, 1].
Eigen::VectorXd observe(const SimState& state, const NetworkConfig& cfg);

/// Channel list of a node: downstream ids ascending, then -1 for customers.
std::vector<int> channels(const NetworkConfig& cfg, int node);

/// CSV columns: t,node,product,order,mode,lead_time,arrived,demand,shipped,
/// on_hand,backlog,lost,profit,neg_emissions,neg_leadtime.
/// The last three are the period totals, repeated on every row of the period.
void write_transitions_csv(std::ostream& out, std::span<const StepRecord> records);

}  // namespace morse
