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

#include "morse/env/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace morse {

bool SimState::operator==(const SimState& other) const
{
    return t == other.t && on_hand == other.on_hand && backlog == other.backlog &&
           channel_backlog == other.channel_backlog && pipeline == other.pipeline &&
           order_history == other.order_history && demand_history == other.demand_history;
}

ActionSet ActionSet::zeros(const NetworkConfig& cfg)
{
    return {CountMatrix::Zero(cfg.num_nodes, cfg.num_products), ModeMatrix::Zero(cfg.num_nodes, cfg.num_products)};
}

void validate(const Disruption& d)
{
    require(d.start >= 0, "disruption: start must be >= 0");
    require(d.duration >= 1, "disruption: duration must be >= 1");
    require(d.cost_multiplier > 0.0 && std::isfinite(d.cost_multiplier), "disruption: multiplier must be > 0");
    require(d.tax_rate >= 0.0 && std::isfinite(d.tax_rate), "disruption: tax rate must be >= 0");
    require(d.emission_threshold >= 0.0 && std::isfinite(d.emission_threshold),
            "disruption: emission threshold must be >= 0");
}

const char* to_string(DisruptionKind kind)
{
    return kind == DisruptionKind::EmissionTax ? "emission_tax" : "cost_surge";
}

DisruptionKind disruption_kind_from_string(const std::string& name)
{
    if (name == "emission_tax") return DisruptionKind::EmissionTax;
    if (name == "cost_surge") return DisruptionKind::CostSurge;
    throw ContractViolation("unknown disruption kind '" + name + "'");
}

namespace {

std::int64_t draw_poisson(double rate, Rng& rng)
{
    if (rate <= 0.0) return 0;
    std::poisson_distribution<std::int64_t> dist(rate);
    return dist(rng);
}

}  // namespace

double demand_rate(const DemandParams& demand, int t)
{
    if (!demand.seasonal) return demand.base_rate;
    return demand.base_rate *
           (1.0 + demand.amplitude * std::sin(2.0 * std::numbers::pi * demand.frequency * t + demand.phase));
}

CountMatrix sample_demand(const NetworkConfig& cfg, int t, Rng& rng)
{
    double rate = std::max(0.0, demand_rate(cfg.demand, t));
    if (cfg.demand.spike_probability > 0.0) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (u(rng) < cfg.demand.spike_probability) rate *= cfg.demand.spike_multiplier;
    }
    CountMatrix out = CountMatrix::Zero(cfg.num_nodes, cfg.num_products);
    for (int r : cfg.retail)
        for (int p = 0; p < cfg.num_products; ++p) out(r, p) += draw_poisson(rate, rng);
    return out;
}

int lead_time_from_draw(const NetworkConfig& cfg, int mode, int draw)
{
    require(mode >= 0 && mode < cfg.num_modes(), "lead time: transport mode out of range");
    const double scaled = std::round(cfg.modes[static_cast<std::size_t>(mode)].lead_multiplier * draw);
    return std::max(1, static_cast<int>(scaled));
}

int sample_lead_time(const NetworkConfig& cfg, int mode, Rng& rng)
{
    require(mode >= 0 && mode < cfg.num_modes(), "sample_lead_time: transport mode out of range");
    return lead_time_from_draw(cfg, mode, static_cast<int>(draw_poisson(cfg.lead_time_rate, rng)));
}

PeriodDraws draw_period(const NetworkConfig& cfg, int t, Rng& rng)
{
    PeriodDraws d;
    d.customer_demand = sample_demand(cfg, t, rng);
    d.lead_draw.resize(cfg.num_nodes, cfg.num_products);
    for (int m = 0; m < cfg.num_nodes; ++m)
        for (int p = 0; p < cfg.num_products; ++p)
            d.lead_draw(m, p) = static_cast<int>(draw_poisson(cfg.lead_time_rate, rng));
    return d;
}

std::vector<int> channels(const NetworkConfig& cfg, int node)
{
    std::vector<int> out = cfg.downstream(node);
    if (cfg.is_retail(node)) out.push_back(-1);
    return out;
}

SimState reset(const NetworkConfig& cfg)
{
    SimState s;
    s.t = 0;
    s.on_hand = cfg.initial_inventory;
    s.backlog = CountMatrix::Zero(cfg.num_nodes, cfg.num_products);
    for (int m = 0; m < cfg.num_nodes; ++m)
        s.channel_backlog.push_back(
            CountMatrix::Zero(static_cast<Index>(channels(cfg, m).size()), cfg.num_products));
    const CountMatrix zero = CountMatrix::Zero(cfg.num_nodes, cfg.num_products);
    s.order_history.assign(static_cast<std::size_t>(cfg.history), zero);
    s.demand_history.assign(static_cast<std::size_t>(cfg.history), zero);
    return s;
}

CountMatrix pipeline_inventory(const SimState& state, const NetworkConfig& cfg)
{
    CountMatrix v = CountMatrix::Zero(cfg.num_nodes, cfg.num_products);
    for (const auto& s : state.pipeline) v(s.node, s.product) += s.quantity;
    return v;
}

namespace {

void check_actions(const ActionSet& a, const NetworkConfig& cfg)
{
    require(a.order.rows() == cfg.num_nodes && a.order.cols() == cfg.num_products && a.mode.rows() == cfg.num_nodes &&
                a.mode.cols() == cfg.num_products,
            "step: action matrices must be num_nodes x num_products");
    for (int m = 0; m < cfg.num_nodes; ++m)
        for (int p = 0; p < cfg.num_products; ++p) {
            require(a.order(m, p) >= 0 && a.order(m, p) <= cfg.max_order(m), "step: reorder quantity out of bounds");
            require(a.mode(m, p) >= 0 && a.mode(m, p) < cfg.num_modes(), "step: transport mode out of range");
        }
}

/// Splits `amount` over channel requirements proportionally (floor), then
/// hands out the remainder one unit at a time in channel order.
std::vector<std::int64_t> allocate(std::int64_t amount, const std::vector<std::int64_t>& need)
{
    std::vector<std::int64_t> share(need.size(), 0);
    std::int64_t total = 0;
    for (auto n : need) total += n;
    if (total == 0 || amount == 0) return share;
    std::int64_t given = 0;
    for (std::size_t c = 0; c < need.size(); ++c) {
        share[c] = amount * need[c] / total;
        given += share[c];
    }
    for (std::size_t c = 0; given < amount; c = (c + 1) % need.size()) {
        if (share[c] < need[c]) {
            ++share[c];
            ++given;
        }
    }
    return share;
}

}  // namespace

StepRecord advance(SimState& s, const ActionSet& a, const NetworkConfig& cfg,
                   std::span<const Disruption> disruptions, Rng& rng)
{
    require(s.t >= 0 && s.t <= cfg.horizon, "step: episode already finished");
    check_actions(a, cfg);
    return advance(s, a, cfg, disruptions, draw_period(cfg, s.t, rng));
}

StepRecord advance(SimState& s, const ActionSet& a, const NetworkConfig& cfg,
                   std::span<const Disruption> disruptions, const PeriodDraws& draws)
{
    require(s.t >= 0 && s.t <= cfg.horizon, "step: episode already finished");
    check_actions(a, cfg);
    const int nm = cfg.num_nodes, np = cfg.num_products;
    require(draws.customer_demand.rows() == nm && draws.customer_demand.cols() == np &&
                draws.lead_draw.rows() == nm && draws.lead_draw.cols() == np,
            "step: draws must be num_nodes x num_products");
    require((draws.customer_demand.array() >= 0).all() && (draws.lead_draw.array() >= 0).all(),
            "step: draws must be non-negative");

    StepRecord rec;
    rec.t = s.t;
    rec.order = a.order;
    rec.mode = a.mode;
    rec.customer_demand = draws.customer_demand;
    rec.lead_time.resize(nm, np);
    for (int m = 0; m < nm; ++m)
        for (int p = 0; p < np; ++p) rec.lead_time(m, p) = lead_time_from_draw(cfg, a.mode(m, p), draws.lead_draw(m, p));

    // (1) deliveries due this period
    rec.arrived = CountMatrix::Zero(nm, np);
    std::erase_if(s.pipeline, [&](const Shipment& sh) {
        if (sh.arrival != s.t) return false;
        rec.arrived(sh.node, sh.product) += sh.quantity;
        return true;
    });

    // (2) demand: downstream orders and customer demand, per channel
    rec.demand = CountMatrix::Zero(nm, np);
    std::vector<std::vector<int>> chans(static_cast<std::size_t>(nm));
    for (int m = 0; m < nm; ++m) {
        auto& ch = chans[static_cast<std::size_t>(m)];
        ch = channels(cfg, m);
        auto& cb = s.channel_backlog[static_cast<std::size_t>(m)];
        for (std::size_t c = 0; c < ch.size(); ++c) {
            for (int p = 0; p < np; ++p) {
                std::int64_t d = ch[c] < 0 ? rec.customer_demand(m, p) : a.order(ch[c], p);
                cb(static_cast<Index>(c), p) += d;
                rec.demand(m, p) += d;
            }
        }
    }

    // (3) ship, (4) balance update, (5) dispatch to downstream pipelines
    rec.shipped = CountMatrix::Zero(nm, np);
    rec.lost = CountMatrix::Zero(nm, np);
    rec.dispatched = CountMatrix::Zero(nm, np);
    for (int m = 0; m < nm; ++m) {
        const auto& ch = chans[static_cast<std::size_t>(m)];
        auto& cb = s.channel_backlog[static_cast<std::size_t>(m)];
        for (int p = 0; p < np; ++p) {
            const std::int64_t available = s.on_hand(m, p) + rec.arrived(m, p);
            const std::int64_t owed = s.backlog(m, p) + rec.demand(m, p);
            const std::int64_t ship = std::min(available, owed);
            rec.shipped(m, p) = ship;

            std::vector<std::int64_t> need(ch.size());
            for (std::size_t c = 0; c < ch.size(); ++c) need[c] = cb(static_cast<Index>(c), p);
            const auto share = allocate(ship, need);
            for (std::size_t c = 0; c < ch.size(); ++c) {
                cb(static_cast<Index>(c), p) -= share[c];
                const int dest = ch[c];
                if (dest >= 0 && share[c] > 0) {
                    s.pipeline.push_back({dest, p, share[c], s.t + rec.lead_time(dest, p)});
                    rec.dispatched(dest, p) += share[c];
                }
            }

            const std::int64_t unclipped = s.on_hand(m, p) - ship + rec.arrived(m, p);
            const std::int64_t cap = cfg.max_inventory(m);
            s.on_hand(m, p) = std::min(unclipped, cap);
            rec.lost(m, p) = unclipped - s.on_hand(m, p);
            s.backlog(m, p) = owed - ship;
        }
    }
    // The root orders from an unlimited source.
    for (int p = 0; p < np; ++p)
        if (a.order(0, p) > 0) {
            s.pipeline.push_back({0, p, a.order(0, p), s.t + rec.lead_time(0, p)});
            rec.dispatched(0, p) += a.order(0, p);
        }

    // (6) reward, (7) disruptions
    double cost_factor = 1.0;
    for (const auto& d : disruptions)
        if (d.kind == DisruptionKind::CostSurge && d.active_at(s.t)) {
            cost_factor *= d.cost_multiplier;
            rec.cost_surge_active = true;
        }

    for (int m = 0; m < nm; ++m) {
        for (int p = 0; p < np; ++p) {
            const auto o = static_cast<double>(a.order(m, p));
            const auto& mode = cfg.modes[static_cast<std::size_t>(a.mode(m, p))];
            rec.revenue += cfg.price(m, p) * static_cast<double>(rec.shipped(m, p));
            rec.reorder_cost += cost_factor * cfg.reorder_cost(m, p) * o;
            rec.transport_cost += cost_factor * cfg.transport_cost(m, p) * mode.cost_multiplier * cfg.distance(m) * o;
            rec.holding_cost += cfg.holding_cost(m, p) * static_cast<double>(s.on_hand(m, p));
            rec.backlog_cost += cfg.backlog_cost(m, p) * static_cast<double>(s.backlog(m, p));
            rec.emissions += cfg.emission_rate(m) * mode.emission_multiplier * cfg.distance(m) * o;
            if (a.order(m, p) > 0) rec.lead_time_total += rec.lead_time(m, p);
        }
    }
    for (const auto& d : disruptions)
        if (d.kind == DisruptionKind::EmissionTax && d.active_at(s.t)) {
            rec.emission_tax += d.tax_rate * std::max(0.0, rec.emissions - d.emission_threshold);
            rec.emission_tax_active = true;
        }

    const double profit = rec.revenue - rec.reorder_cost - rec.transport_cost - rec.holding_cost -
                          rec.backlog_cost - rec.emission_tax;
    rec.reward = RewardVector(profit, -rec.emissions, -rec.lead_time_total);

    // (8) histories and clock
    s.order_history.push_front(a.order);
    s.order_history.pop_back();
    s.demand_history.push_front(rec.demand);
    s.demand_history.pop_back();
    s.t += 1;

    rec.on_hand = s.on_hand;
    rec.backlog = s.backlog;
    rec.pipeline = pipeline_inventory(s, cfg);
    return rec;
}

StepResult step(const SimState& state, const ActionSet& actions, const NetworkConfig& cfg,
                std::span<const Disruption> disruptions, Rng& rng)
{
    StepResult out{state, RewardVector::Zero(), {}};
    out.record = advance(out.state, actions, cfg, disruptions, rng);
    out.reward = out.record.reward;
    return out;
}

Eigen::VectorXd observe(const SimState& s, const NetworkConfig& cfg)
{
    const int nm = cfg.num_nodes, np = cfg.num_products;
    Eigen::VectorXd obs(cfg.observation_size());
    Index k = 0;
    auto put = [&](const CountMatrix& x, auto scale) {
        for (int m = 0; m < nm; ++m)
            for (int p = 0; p < np; ++p) {
                const double denom = scale(m);
                const double v = denom > 0.0 ? static_cast<double>(x(m, p)) / denom : 0.0;
                obs(k++) = std::clamp(v, 0.0, 1.0);
            }
    };
    auto by_capacity = [&](int m) { return static_cast<double>(cfg.max_inventory(m)); };
    auto by_order_cap = [&](int m) { return static_cast<double>(cfg.max_order(m)); };
    auto by_normalizer = [&](int) { return cfg.demand_normalizer; };

    put(s.on_hand, by_capacity);
    put(pipeline_inventory(s, cfg), by_capacity);
    put(s.backlog, by_normalizer);
    for (const auto& o : s.order_history) put(o, by_order_cap);
    for (const auto& d : s.demand_history) put(d, by_normalizer);
    return obs;
}

void write_transitions_csv(std::ostream& out, std::span<const StepRecord> records)
{
    const auto saved = out.precision(17);
    out << "t,node,product,order,mode,lead_time,arrived,demand,shipped,on_hand,backlog,lost,profit,neg_emissions,"
           "neg_leadtime\n";
    for (const auto& r : records) {
        for (Index m = 0; m < r.order.rows(); ++m)
            for (Index p = 0; p < r.order.cols(); ++p)
                out << r.t << ',' << m << ',' << p << ',' << r.order(m, p) << ',' << r.mode(m, p) << ','
                    << r.lead_time(m, p) << ',' << r.arrived(m, p) << ',' << r.demand(m, p) << ','
                    << r.shipped(m, p) << ',' << r.on_hand(m, p) << ',' << r.backlog(m, p) << ','
                    << r.lost(m, p) << ',' << r.reward(kProfit) << ',' << r.reward(kEmissions) << ','
                    << r.reward(kLeadTime) << '\n';
    }
    out.precision(saved);
}

}  // namespace morse
