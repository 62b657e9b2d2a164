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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "morse/env/inventory.hpp"
#include "morse/moea/nsga2.hpp"

namespace morse {

/// Bundled reference networks: "A" (3 nodes, seasonal demand), "B" (3 nodes,
/// Poisson demand), "C" (5-node serial chain, Poisson demand).
NetworkConfig build_configuration(const std::string& id);

/// Disruption parameters bundled with a reference network.
struct ScenarioDefaults {
    double emission_tax_rate = 5.0;
    double emission_threshold = 10.0;
    double cost_multiplier = 1.1;
};
ScenarioDefaults scenario_defaults(const std::string& id);

/// Copy of `cfg` whose retail demand rate jumps by `multiplier` with
/// probability `probability` per period.
NetworkConfig with_demand_spikes(NetworkConfig cfg, double probability, double multiplier);

/// Argmax over the archive of weights . normalized fitness, each objective
/// min-max normalized over the archive (constant columns map to 0). Ties go
/// to the lowest id.
int select_policy(const ParetoArchive& archive, const Eigen::Vector3d& weights);
int select_policy(const std::vector<int>& ids, const FitnessMatrix& fitness, const Eigen::Vector3d& weights);

/// Presets: emission tax leans on emissions, cost surge on profit.
Eigen::Vector3d default_switch_weights(DisruptionKind kind);
inline Eigen::Vector3d uniform_weights() { return Eigen::Vector3d::Constant(1.0 / 3.0); }

/// One episode driven by an archive policy that can be swapped and disrupted
/// between periods. Shared by the scenario runner and live sessions.
class Simulation {
public:
    Simulation(NetworkConfig cfg, std::shared_ptr<const ParetoArchive> archive, int policy_id, std::uint64_t seed);

    [[nodiscard]] int period() const { return state_.t; }
    [[nodiscard]] bool finished() const { return state_.t > cfg_.horizon; }
    [[nodiscard]] int policy_id() const { return policy_id_; }
    [[nodiscard]] const SimState& state() const { return state_; }
    [[nodiscard]] const NetworkConfig& config() const { return cfg_; }
    [[nodiscard]] const std::vector<Disruption>& disruptions() const { return disruptions_; }
    [[nodiscard]] bool disruption_active() const;

    void switch_policy(int id);
    void inject(const Disruption& d);
    StepRecord step();

private:
    NetworkConfig cfg_;
    std::shared_ptr<const ParetoArchive> archive_;
    const Genome* genome_ = nullptr;
    int policy_id_ = 0;
    SimState state_;
    EpisodeStreams streams_;
    std::vector<Disruption> disruptions_;
};

struct TracePoint {
    int period = 0;
    int policy_id = 0;
    double profit = 0.0;
    double profit_cum = 0.0;
    double emissions = 0.0;
    double emissions_cum = 0.0;
    double lead_time = 0.0;
    double reorder_cost = 0.0;
    double transport_cost = 0.0;
    bool disruption_active = false;
};

struct ScenarioTrace {
    std::vector<TracePoint> points;

    void append(const StepRecord& r, int policy_id, bool disruption_active);
};

enum class SwitchTrigger { OnDisruption, AtPeriod };

struct ScenarioSpec {
    /// Bundled network id; empty runs on the archive's own network.
    std::string configuration = "A";
    std::optional<Disruption> disruption;
    /// Policy held before the trigger; defaults to select_policy(initial_weights).
    std::optional<int> initial_policy;
    Eigen::Vector3d initial_weights = uniform_weights();
    /// Defaults to default_switch_weights(disruption kind).
    std::optional<Eigen::Vector3d> switch_weights;
    SwitchTrigger trigger = SwitchTrigger::OnDisruption;
    int trigger_period = 200;
    /// Number of simulated periods.
    int horizon = 400;

    [[nodiscard]] int effective_trigger() const;
};

void validate(const ScenarioSpec& spec);

/// Default spec for a disruption kind on a reference network: trigger at
/// period 200 of 400, disruption lasting to the end of the horizon.
ScenarioSpec default_scenario(const std::string& configuration, DisruptionKind kind);

struct ScenarioResult {
    ScenarioTrace switching;
    ScenarioTrace fixed;
    int initial_policy = 0;
    int switched_policy = 0;
    int trigger_period = 0;
};

/// Runs the switching and static arms on identical seeds.
ScenarioResult run_scenario(const ScenarioSpec& spec, std::shared_ptr<const ParetoArchive> archive,
                            std::uint64_t seed);

struct ArmSummary {
    double profit_cum = 0.0;
    double emissions_cum = 0.0;
    double lead_time_total = 0.0;
    Eigen::Vector3d pre_mean = Eigen::Vector3d::Zero();   // profit, emissions, lead time per period
    Eigen::Vector3d post_mean = Eigen::Vector3d::Zero();
    int periods = 0;
};

struct ScenarioReport {
    int trigger_period = 0;
    ArmSummary switching;
    ArmSummary fixed;
    /// switching minus fixed.
    Eigen::Vector3d delta_final = Eigen::Vector3d::Zero();
    Eigen::Vector3d delta_post_mean = Eigen::Vector3d::Zero();
};

ArmSummary summarize(const ScenarioTrace& trace, int trigger_period);
ScenarioReport summarize(const ScenarioTrace& switching, const ScenarioTrace& fixed, int trigger_period);

/// {"kind": "emission_tax" | "cost_surge", "start", "duration", "tax_rate",
/// "emission_threshold", "cost_multiplier"}. Missing start/duration default
/// to the given values.
nlohmann::json disruption_to_json(const Disruption& d);
Disruption disruption_from_json(const nlohmann::json& doc, int default_start = 0, int default_duration = 1);

/// Columns: period,policy_id,profit_cum,emissions_cum,lead_time,disruption_active.
void write_trace_csv(std::ostream& out, const ScenarioTrace& trace);
nlohmann::json report_to_json(const ScenarioReport& report);

}  // namespace morse
