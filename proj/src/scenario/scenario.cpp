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

#include "morse/scenario/scenario.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <string>

#include "morse/default_configurations.hpp"
#include "morse/env/config_io.hpp"

namespace morse {

namespace {

const nlohmann::json& bundled()
{
    static const nlohmann::json doc = nlohmann::json::parse(detail::kDefaultConfigurations);
    return doc;
}

const nlohmann::json& bundled_entry(const std::string& id)
{
    const auto& all = bundled().at("configurations");
    if (!all.contains(id)) throw ContractViolation("unknown configuration id '" + id + "' (expected A, B or C)");
    return all.at(id);
}

}  // namespace

NetworkConfig build_configuration(const std::string& id)
{
    return config_from_json(bundled_entry(id));
}

ScenarioDefaults scenario_defaults(const std::string& id)
{
    const auto& entry = bundled_entry(id);
    ScenarioDefaults d;
    if (entry.contains("scenario")) {
        const auto& s = entry.at("scenario");
        d.emission_tax_rate = s.value("emission_tax_rate", d.emission_tax_rate);
        d.emission_threshold = s.value("emission_threshold", d.emission_threshold);
        d.cost_multiplier = s.value("cost_multiplier", d.cost_multiplier);
    }
    return d;
}

NetworkConfig with_demand_spikes(NetworkConfig cfg, double probability, double multiplier)
{
    require(probability >= 0.0 && probability <= 1.0, "spike probability must lie in [0, 1]");
    require(multiplier >= 1.0, "spike multiplier must be >= 1");
    cfg.demand.spike_probability = probability;
    cfg.demand.spike_multiplier = multiplier;
    cfg.name += "-spiky";
    return cfg;
}

int select_policy(const std::vector<int>& ids, const FitnessMatrix& fitness, const Eigen::Vector3d& weights)
{
    require(!ids.empty(), "select_policy: empty archive");
    require(static_cast<Index>(ids.size()) == fitness.rows() && fitness.cols() == kNumObjectives,
            "select_policy: ids and fitness disagree");
    require(weights.allFinite() && (weights.array() >= 0.0).all(), "select_policy: weights must be non-negative");

    const Eigen::RowVectorXd lo = fitness.colwise().minCoeff();
    const Eigen::RowVectorXd range = fitness.colwise().maxCoeff() - lo;
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < fitness.rows(); ++i) {
        double score = 0.0;
        for (Index j = 0; j < kNumObjectives; ++j)
            if (range(j) > 0.0) score += weights(j) * (fitness(i, j) - lo(j)) / range(j);
        const int id = ids[static_cast<std::size_t>(i)];
        if (score > best_score || (score == best_score && id < best)) {
            best_score = score;
            best = id;
        }
    }
    return best;
}

int select_policy(const ParetoArchive& archive, const Eigen::Vector3d& weights)
{
    std::vector<int> ids;
    for (const auto& e : archive.entries) ids.push_back(e.id);
    return select_policy(ids, archive.fitness(), weights);
}

Eigen::Vector3d default_switch_weights(DisruptionKind kind)
{
    if (kind == DisruptionKind::EmissionTax) return {0.1, 0.8, 0.1};
    return {0.8, 0.1, 0.1};
}

Simulation::Simulation(NetworkConfig cfg, std::shared_ptr<const ParetoArchive> archive, int policy_id,
                       std::uint64_t seed)
    : cfg_(std::move(cfg)), archive_(std::move(archive)), streams_(seed)
{
    require(archive_ != nullptr, "simulation: archive is required");
    validate(cfg_);
    const Architecture expected = architecture_for(cfg_);
    for (const auto& e : archive_->entries) {
        const Architecture& a = e.genome.arch;
        require(a.input_dim == expected.input_dim && a.num_blocks == expected.num_blocks &&
                    a.num_modes == expected.num_modes,
                "simulation: archive policies were trained on a different network shape");
    }
    state_ = reset(cfg_);
    switch_policy(policy_id);
}

bool Simulation::disruption_active() const
{
    return std::any_of(disruptions_.begin(), disruptions_.end(),
                       [&](const Disruption& d) { return d.active_at(state_.t); });
}

void Simulation::switch_policy(int id)
{
    genome_ = &archive_->find(id).genome;
    policy_id_ = id;
}

void Simulation::inject(const Disruption& d)
{
    validate(d);
    disruptions_.push_back(d);
}

StepRecord Simulation::step()
{
    require(!finished(), "simulation: episode already finished");
    const ActionSet action = act(*genome_, state_, cfg_, streams_.policy);
    return advance(state_, action, cfg_, disruptions_, streams_.env);
}

void ScenarioTrace::append(const StepRecord& r, int policy_id, bool disruption_active)
{
    TracePoint p;
    p.period = r.t;
    p.policy_id = policy_id;
    p.profit = r.reward(kProfit);
    p.emissions = r.emissions;
    p.lead_time = r.lead_time_total;
    p.reorder_cost = r.reorder_cost;
    p.transport_cost = r.transport_cost;
    p.disruption_active = disruption_active;
    p.profit_cum = (points.empty() ? 0.0 : points.back().profit_cum) + p.profit;
    p.emissions_cum = (points.empty() ? 0.0 : points.back().emissions_cum) + p.emissions;
    points.push_back(p);
}

int ScenarioSpec::effective_trigger() const
{
    if (trigger == SwitchTrigger::OnDisruption && disruption) return disruption->start;
    return trigger_period;
}

void validate(const ScenarioSpec& spec)
{
    require(spec.horizon >= 1, "scenario: horizon must be >= 1");
    require(spec.trigger != SwitchTrigger::OnDisruption || spec.disruption.has_value(),
            "scenario: on-disruption trigger needs a disruption");
    const int trigger = spec.effective_trigger();
    require(trigger >= 0 && trigger < spec.horizon, "scenario: trigger period must lie within the horizon");
    if (spec.disruption) validate(*spec.disruption);
}

ScenarioSpec default_scenario(const std::string& configuration, DisruptionKind kind)
{
    const ScenarioDefaults defaults = scenario_defaults(configuration);
    ScenarioSpec spec;
    spec.configuration = configuration;
    Disruption d;
    d.kind = kind;
    d.start = spec.trigger_period;
    d.duration = spec.horizon - spec.trigger_period;
    if (kind == DisruptionKind::EmissionTax) {
        d.tax_rate = defaults.emission_tax_rate;
        d.emission_threshold = defaults.emission_threshold;
    } else {
        d.cost_multiplier = defaults.cost_multiplier;
    }
    spec.disruption = d;
    return spec;
}

ScenarioResult run_scenario(const ScenarioSpec& spec, std::shared_ptr<const ParetoArchive> archive,
                            std::uint64_t seed)
{
    validate(spec);
    require(archive != nullptr && !archive->entries.empty(), "scenario: archive is empty");
    NetworkConfig cfg = spec.configuration.empty() ? archive->config : build_configuration(spec.configuration);
    cfg.horizon = spec.horizon - 1;

    ScenarioResult result;
    result.trigger_period = spec.effective_trigger();
    result.initial_policy = spec.initial_policy ? *spec.initial_policy : select_policy(*archive, spec.initial_weights);
    const Eigen::Vector3d switch_weights =
        spec.switch_weights ? *spec.switch_weights
                            : default_switch_weights(spec.disruption ? spec.disruption->kind : DisruptionKind::CostSurge);
    result.switched_policy = select_policy(*archive, switch_weights);

    Simulation switching(cfg, archive, result.initial_policy, seed);
    Simulation fixed(cfg, archive, result.initial_policy, seed);
    if (spec.disruption) {
        switching.inject(*spec.disruption);
        fixed.inject(*spec.disruption);
    }
    while (!switching.finished()) {
        if (switching.period() == result.trigger_period) switching.switch_policy(result.switched_policy);
        const bool active = switching.disruption_active();
        const int sw_policy = switching.policy_id();
        result.switching.append(switching.step(), sw_policy, active);
        result.fixed.append(fixed.step(), fixed.policy_id(), active);
    }
    return result;
}

ArmSummary summarize(const ScenarioTrace& trace, int trigger_period)
{
    ArmSummary s;
    s.periods = static_cast<int>(trace.points.size());
    if (trace.points.empty()) return s;
    s.profit_cum = trace.points.back().profit_cum;
    s.emissions_cum = trace.points.back().emissions_cum;
    int pre = 0;
    int post = 0;
    for (const auto& p : trace.points) {
        s.lead_time_total += p.lead_time;
        const Eigen::Vector3d v(p.profit, p.emissions, p.lead_time);
        if (p.period < trigger_period) {
            s.pre_mean += v;
            ++pre;
        } else {
            s.post_mean += v;
            ++post;
        }
    }
    if (pre > 0) s.pre_mean /= pre;
    if (post > 0) s.post_mean /= post;
    return s;
}

ScenarioReport summarize(const ScenarioTrace& switching, const ScenarioTrace& fixed, int trigger_period)
{
    ScenarioReport r;
    r.trigger_period = trigger_period;
    r.switching = summarize(switching, trigger_period);
    r.fixed = summarize(fixed, trigger_period);
    r.delta_final = Eigen::Vector3d(r.switching.profit_cum - r.fixed.profit_cum,
                                    r.switching.emissions_cum - r.fixed.emissions_cum,
                                    r.switching.lead_time_total - r.fixed.lead_time_total);
    r.delta_post_mean = r.switching.post_mean - r.fixed.post_mean;
    return r;
}

nlohmann::json disruption_to_json(const Disruption& d)
{
    nlohmann::json doc = {{"kind", to_string(d.kind)}, {"start", d.start}, {"duration", d.duration}};
    if (d.kind == DisruptionKind::EmissionTax) {
        doc["tax_rate"] = d.tax_rate;
        doc["emission_threshold"] = d.emission_threshold;
    } else {
        doc["cost_multiplier"] = d.cost_multiplier;
    }
    return doc;
}

Disruption disruption_from_json(const nlohmann::json& doc, int default_start, int default_duration)
{
    try {
        require(doc.is_object(), "disruption must be an object");
        Disruption d;
        d.kind = disruption_kind_from_string(doc.at("kind").get<std::string>());
        d.start = doc.value("start", default_start);
        d.duration = doc.value("duration", default_duration);
        d.tax_rate = doc.value("tax_rate", 0.0);
        d.emission_threshold = doc.value("emission_threshold", 0.0);
        d.cost_multiplier = doc.value("cost_multiplier", 1.0);
        validate(d);
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw ContractViolation(std::string("disruption: ") + e.what());
    }
}

void write_trace_csv(std::ostream& out, const ScenarioTrace& trace)
{
    const auto saved = out.precision(17);
    out << "period,policy_id,profit_cum,emissions_cum,lead_time,disruption_active\n";
    for (const auto& p : trace.points)
        out << p.period << ',' << p.policy_id << ',' << p.profit_cum << ',' << p.emissions_cum << ','
            << p.lead_time << ',' << (p.disruption_active ? 1 : 0) << '\n';
    out.precision(saved);
}

namespace {

nlohmann::json vec3(const Eigen::Vector3d& v)
{
    return {{"profit", v(0)}, {"emissions", v(1)}, {"lead_time", v(2)}};
}

nlohmann::json arm_json(const ArmSummary& s)
{
    return {{"periods", s.periods},
            {"profit_cum", s.profit_cum},
            {"emissions_cum", s.emissions_cum},
            {"lead_time_total", s.lead_time_total},
            {"pre_trigger_mean", vec3(s.pre_mean)},
            {"post_trigger_mean", vec3(s.post_mean)}};
}

}  // namespace

nlohmann::json report_to_json(const ScenarioReport& report)
{
    return {{"schema_version", kSchemaVersion},
            {"trigger_period", report.trigger_period},
            {"switching", arm_json(report.switching)},
            {"static", arm_json(report.fixed)},
            {"delta_final", vec3(report.delta_final)},
            {"delta_post_trigger_mean", vec3(report.delta_post_mean)}};
}

}  // namespace morse
