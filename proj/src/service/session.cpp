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

#include "morse/service/session.hpp"

#include <algorithm>
#include <cmath>

namespace morse {

using nlohmann::json;

json event_to_json(const Event& e)
{
    return {{"seq", e.seq}, {"type", e.type}, {"period", e.period}, {"data", e.data}};
}

Event event_from_json(const json& doc)
{
    Event e;
    e.seq = doc.at("seq").get<std::uint64_t>();
    e.type = doc.at("type").get<std::string>();
    e.period = doc.at("period").get<int>();
    e.data = doc.value("data", json::object());
    return e;
}

void apply_event(SessionView& v, const Event& e)
{
    v.seq = e.seq;
    if (e.type == "created" || e.type == "reset") {
        v.status = "paused";
        v.period = 0;
        v.policy_id = e.data.at("policy_id").get<int>();
        v.profit_cum = v.emissions_cum = v.lead_time_cum = 0.0;
        v.disruptions.clear();
    } else if (e.type == "period") {
        v.period = e.period + 1;
        v.profit_cum += e.data.at("profit").get<double>();
        v.emissions_cum += e.data.at("emissions").get<double>();
        v.lead_time_cum += e.data.at("lead_time").get<double>();
    } else if (e.type == "status") {
        v.status = e.data.at("status").get<std::string>();
    } else if (e.type == "policy_switched") {
        v.policy_id = e.data.at("to").get<int>();
    } else if (e.type == "disruption_injected") {
        v.disruptions.push_back(e.data.at("disruption"));
    }
}

namespace {

// The period event is stamped with the period that was simulated.
Event period_event(const StepRecord& r, int policy, bool disrupted, const SessionView& before)
{
    Event ev;
    ev.type = "period";
    ev.period = r.t;
    ev.data = {{"policy_id", policy},
               {"profit", r.reward(kProfit)},
               {"emissions", r.emissions},
               {"lead_time", r.lead_time_total},
               {"reward", {r.reward(0), r.reward(1), r.reward(2)}},
               {"revenue", r.revenue},
               {"emission_tax", r.emission_tax},
               {"disruption_active", disrupted},
               {"on_hand_total", r.on_hand.sum()},
               {"backlog_total", r.backlog.sum()},
               {"customer_demand_total", r.customer_demand.sum()},
               {"profit_cum", before.profit_cum + r.reward(kProfit)},
               {"emissions_cum", before.emissions_cum + r.emissions},
               {"lead_time_cum", before.lead_time_cum + r.lead_time_total}};
    return ev;
}

json count_matrix_json(const CountMatrix& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

int checked_int(const json& doc, const char* key, int fallback)
{
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer()) throw CommandError(std::string("'") + key + "' must be an integer", false);
    return v.get<int>();
}

}  // namespace

std::vector<Event> reenact(const std::vector<Event>& log, const SessionOptions& options)
{
    std::vector<Event> out;
    std::unique_ptr<Simulation> sim;
    SessionView view;
    auto record = [&](Event e) {
        e.seq = out.size() + 1;
        apply_event(view, e);
        out.push_back(std::move(e));
    };
    for (const auto& e : log) {
        if (e.type == "created" || e.type == "reset") {
            sim = std::make_unique<Simulation>(options.config, options.archive, e.data.at("policy_id").get<int>(),
                                               e.data.at("seed").get<std::uint64_t>());
            record(e);
            continue;
        }
        require(sim != nullptr, "reenact: log does not start with a created event");
        if (e.type == "period") {
            require(!sim->finished() && sim->period() == e.period, "reenact: period events are out of order");
            const int policy = sim->policy_id();
            const bool disrupted = sim->disruption_active();
            record(period_event(sim->step(), policy, disrupted, view));
        } else if (e.type == "policy_switched") {
            sim->switch_policy(e.data.at("to").get<int>());
            record(e);
        } else if (e.type == "disruption_injected") {
            sim->inject(disruption_from_json(e.data.at("disruption")));
            record(e);
        } else {
            record(e);
        }
    }
    return out;
}

SessionView replay(const std::vector<Event>& events, SessionView start)
{
    for (const auto& e : events) apply_event(start, e);
    return start;
}

json view_to_json(const SessionView& v)
{
    return {{"seq", v.seq},
            {"status", v.status},
            {"period", v.period},
            {"policy_id", v.policy_id},
            {"profit_cum", v.profit_cum},
            {"emissions_cum", v.emissions_cum},
            {"lead_time_cum", v.lead_time_cum},
            {"disruptions", v.disruptions}};
}

SessionView view_from_json(const json& doc)
{
    SessionView v;
    v.seq = doc.at("seq").get<std::uint64_t>();
    v.status = doc.at("status").get<std::string>();
    v.period = doc.at("period").get<int>();
    v.policy_id = doc.at("policy_id").get<int>();
    v.profit_cum = doc.at("profit_cum").get<double>();
    v.emissions_cum = doc.at("emissions_cum").get<double>();
    v.lead_time_cum = doc.at("lead_time_cum").get<double>();
    v.disruptions = doc.at("disruptions").get<std::vector<json>>();
    return v;
}

Command parse_command(const json& doc, const ParetoArchive& archive, int period, int horizon)
{
    if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string())
        throw CommandError("command must be an object with a string 'type'", false);
    const auto type = doc.at("type").get<std::string>();
    Command c;
    try {
        if (type == "step") {
            c.type = Command::Type::Step;
            c.steps = checked_int(doc, "n", 1);
            if (c.steps < 1 || c.steps > 1'000'000) throw CommandError("'n' must lie in [1, 1000000]", false);
        } else if (type == "run") {
            c.type = Command::Type::Run;
            c.speed = doc.value("speed", 0.0);
            if (!std::isfinite(c.speed) || c.speed < 0.0) throw CommandError("'speed' must be >= 0", false);
        } else if (type == "pause") {
            c.type = Command::Type::Pause;
        } else if (type == "switch_policy") {
            c.type = Command::Type::SwitchPolicy;
            if (doc.contains("weights")) {
                const auto w = doc.at("weights").get<std::vector<double>>();
                if (w.size() != 3) throw CommandError("'weights' must have 3 entries", false);
                c.policy_id = select_policy(archive, Eigen::Vector3d(w[0], w[1], w[2]));
            } else {
                if (!doc.contains("policy_id")) throw CommandError("switch_policy needs 'policy_id' or 'weights'", false);
                c.policy_id = checked_int(doc, "policy_id", 0);
                (void)archive.find(c.policy_id);
            }
        } else if (type == "inject") {
            c.type = Command::Type::Inject;
            if (!doc.contains("disruption")) throw CommandError("inject needs 'disruption'", false);
            c.disruption = disruption_from_json(doc.at("disruption"), period, std::max(1, horizon + 1 - period));
        } else if (type == "reset") {
            c.type = Command::Type::Reset;
            if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
        } else {
            throw CommandError("unknown command type '" + type + "'", false);
        }
    } catch (const json::exception& e) {
        throw CommandError(std::string("malformed command: ") + e.what(), false);
    } catch (const ContractViolation& e) {
        throw CommandError(e.what(), false);
    }
    return c;
}

Session::Session(std::string id, SessionOptions options) : id_(std::move(id)), options_(std::move(options))
{
    sim_ = std::make_unique<Simulation>(options_.config, options_.archive, options_.policy_id, options_.seed);
    emit("created", {{"policy_id", options_.policy_id}, {"seed", options_.seed}, {"horizon", options_.config.horizon}});
    thread_ = std::jthread([this] { worker(); });
}

Session::~Session()
{
    close();
}

void Session::close()
{
    {
        std::lock_guard lock(mutex_);
        closing_ = true;
    }
    wake_.notify_all();
    events_cv_.notify_all();
    if (thread_.joinable() && std::this_thread::get_id() != thread_.get_id()) thread_.join();
}

bool Session::closed() const
{
    std::lock_guard lock(mutex_);
    return closing_;
}

Command Session::submit(const json& doc)
{
    Command c;
    {
        std::lock_guard lock(mutex_);
        c = parse_command(doc, *options_.archive, sim_->period(), sim_->config().horizon);
    }
    submit(c);
    return c;
}

void Session::submit(const Command& c)
{
    {
        std::lock_guard lock(mutex_);
        if (closing_) throw CommandError("session is closed", true);
        const bool reset_queued = std::any_of(queue_.begin(), queue_.end(),
                                              [](const Command& q) { return q.type == Command::Type::Reset; });
        const bool advancing = c.type == Command::Type::Step || c.type == Command::Type::Run;
        if (advancing && sim_->finished() && !reset_queued)
            throw CommandError("episode has finished; reset the session to continue", true);
        queue_.push_back(c);
    }
    wake_.notify_all();
}

SessionView Session::view() const
{
    std::lock_guard lock(mutex_);
    return view_;
}

json Session::snapshot() const
{
    std::lock_guard lock(mutex_);
    json doc = view_to_json(view_);
    const NetworkConfig& cfg = sim_->config();
    doc["id"] = id_;
    doc["config"] = {{"name", cfg.name},
                     {"num_nodes", cfg.num_nodes},
                     {"num_products", cfg.num_products},
                     {"horizon", cfg.horizon},
                     {"modes", [&] {
                          json names = json::array();
                          for (const auto& m : cfg.modes) names.push_back(m.name);
                          return names;
                      }()}};
    doc["on_hand"] = count_matrix_json(sim_->state().on_hand);
    doc["backlog"] = count_matrix_json(sim_->state().backlog);
    doc["pipeline"] = count_matrix_json(pipeline_inventory(sim_->state(), cfg));
    doc["finished"] = sim_->finished();
    doc["queued_commands"] = queue_.size();
    return doc;
}

std::vector<Event> Session::events_since(std::uint64_t seq) const
{
    std::lock_guard lock(mutex_);
    // seq numbers are 1-based and dense, so the log index of seq+1 is seq.
    if (seq >= log_.size()) return {};
    return {log_.begin() + static_cast<std::ptrdiff_t>(seq), log_.end()};
}

bool Session::wait_for_events(std::uint64_t seq, std::chrono::milliseconds timeout) const
{
    std::unique_lock lock(mutex_);
    return events_cv_.wait_for(lock, timeout, [&] { return closing_ || log_.size() > seq; }) && log_.size() > seq;
}

bool Session::busy() const
{
    const bool can_step = !sim_->finished();
    return !queue_.empty() || (can_step && (pending_steps_ > 0 || running_));
}

bool Session::wait_idle(std::chrono::milliseconds timeout) const
{
    std::unique_lock lock(mutex_);
    return events_cv_.wait_for(lock, timeout, [&] { return closing_ || !busy(); });
}

void Session::emit(std::string type, json data)
{
    Event e;
    e.seq = log_.size() + 1;
    e.type = std::move(type);
    e.period = sim_->period();
    e.data = std::move(data);
    apply_event(view_, e);
    log_.push_back(std::move(e));
    events_cv_.notify_all();
}

void Session::step_once()
{
    const int policy = sim_->policy_id();
    const bool disrupted = sim_->disruption_active();
    const StepRecord r = sim_->step();
    Event ev = period_event(r, policy, disrupted, view_);
    ev.seq = log_.size() + 1;
    apply_event(view_, ev);
    log_.push_back(std::move(ev));
    events_cv_.notify_all();
    if (sim_->finished()) {
        running_ = false;
        pending_steps_ = 0;
        emit("status", {{"status", "finished"}});
    }
}

void Session::apply(const Command& c)
{
    switch (c.type) {
    case Command::Type::Step:
        if (sim_->finished()) return;
        pending_steps_ += c.steps;
        return;
    case Command::Type::Run:
        if (sim_->finished()) return;
        running_ = true;
        speed_ = c.speed;
        emit("status", {{"status", "running"}, {"speed", c.speed}});
        return;
    case Command::Type::Pause:
        running_ = false;
        pending_steps_ = 0;
        if (!sim_->finished()) emit("status", {{"status", "paused"}});
        return;
    case Command::Type::SwitchPolicy: {
        const int from = sim_->policy_id();
        sim_->switch_policy(c.policy_id);
        emit("policy_switched", {{"from", from}, {"to", c.policy_id}});
        return;
    }
    case Command::Type::Inject:
        sim_->inject(c.disruption);
        emit("disruption_injected", {{"disruption", disruption_to_json(c.disruption)}});
        return;
    case Command::Type::Reset: {
        const int policy = sim_->policy_id();
        const std::uint64_t seed = c.seed.value_or(options_.seed);
        sim_ = std::make_unique<Simulation>(options_.config, options_.archive, policy, seed);
        running_ = false;
        pending_steps_ = 0;
        emit("reset", {{"policy_id", policy}, {"seed", seed}, {"horizon", options_.config.horizon}});
        return;
    }
    }
}

void Session::worker()
{
    std::unique_lock lock(mutex_);
    while (!closing_) {
        // Commands apply in arrival order, so a queued command waits for the
        // steps requested before it. Pause is the exception and cuts in.
        const bool stepping = !sim_->finished() && pending_steps_ > 0;
        if (!queue_.empty() && (!stepping || queue_.front().type == Command::Type::Pause)) {
            const Command c = queue_.front();
            queue_.pop_front();
            apply(c);
        } else if (stepping) {
            step_once();
            if (pending_steps_ > 0) --pending_steps_;
        } else if (!sim_->finished() && running_) {
            step_once();
            if (speed_ > 0.0) {
                const auto pause = std::chrono::duration<double>(1.0 / speed_);
                wake_.wait_for(lock, pause, [&] { return closing_ || !queue_.empty(); });
            }
        } else {
            events_cv_.notify_all();
            wake_.wait(lock, [&] { return closing_ || busy(); });
        }
    }
    events_cv_.notify_all();
}

}  // namespace morse
