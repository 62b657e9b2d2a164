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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "morse/scenario/scenario.hpp"

namespace morse {

/// Entry of a session's append-only log. Sequence numbers start at 1 and
/// increase by one per event.
struct Event {
    std::uint64_t seq = 0;
    std::string type;
    int period = 0;
    nlohmann::json data = nlohmann::json::object();
};

nlohmann::json event_to_json(const Event& e);
Event event_from_json(const nlohmann::json& doc);

/// Rejected command. `conflict` marks commands that are well formed but not
/// allowed in the current state (the episode has finished).
class CommandError : public std::runtime_error {
public:
    CommandError(const std::string& what, bool conflict) : std::runtime_error(what), conflict_(conflict) {}
    [[nodiscard]] bool conflict() const { return conflict_; }

private:
    bool conflict_;
};

struct Command {
    enum class Type { Step, Run, Pause, SwitchPolicy, Inject, Reset };
    Type type = Type::Step;
    int steps = 1;
    /// Periods per second while running; 0 runs without pausing.
    double speed = 0.0;
    int policy_id = 0;
    Disruption disruption;
    std::optional<std::uint64_t> seed;
};

/// Parses {"type": "step", "n": 5}, {"type": "run", "speed": 10},
/// {"type": "pause"}, {"type": "switch_policy", "policy_id": 2} or
/// {"type": "switch_policy", "weights": [w1, w2, w3]},
/// {"type": "inject", "disruption": {...}}, {"type": "reset", "seed": 7}.
/// Policy ids and weights are resolved against `archive`; disruption start
/// defaults to `period`. Throws CommandError.
Command parse_command(const nlohmann::json& doc, const ParetoArchive& archive, int period, int horizon);

/// State that can be rebuilt from the event log alone.
struct SessionView {
    std::uint64_t seq = 0;
    std::string status = "paused";
    int period = 0;
    int policy_id = 0;
    double profit_cum = 0.0;
    double emissions_cum = 0.0;
    double lead_time_cum = 0.0;
    std::vector<nlohmann::json> disruptions;

    bool operator==(const SessionView&) const = default;
};

nlohmann::json view_to_json(const SessionView& v);
SessionView view_from_json(const nlohmann::json& doc);

/// Applies one event to a view.
void apply_event(SessionView& view, const Event& e);

/// Folds events in order, starting from `start` (default: an empty view).
SessionView replay(const std::vector<Event>& events, SessionView start = {});

struct SessionOptions {
    std::shared_ptr<const ParetoArchive> archive;
    NetworkConfig config;
    int policy_id = 0;
    std::uint64_t seed = 0;
};

/// Re-executes a session log on a fresh simulation built from `options`
/// (config and archive; policy and seed come from the log). Returns the log
/// the re-execution produces; it equals the input when the session is
/// deterministic.
std::vector<Event> reenact(const std::vector<Event>& log, const SessionOptions& options);

/// Live simulation driven by a worker thread. Commands are queued and
/// applied only between periods, in arrival order; a command queued behind
/// a multi-period step waits for it, except pause, which takes effect at
/// the next period boundary.
class Session {
public:
    Session(std::string id, SessionOptions options);
    ~Session();
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    [[nodiscard]] const std::string& id() const { return id_; }
    [[nodiscard]] const ParetoArchive& archive() const { return *options_.archive; }

    /// Validates and enqueues; returns the parsed command.
    Command submit(const nlohmann::json& command);
    void submit(const Command& command);

    [[nodiscard]] SessionView view() const;
    /// View plus live state (inventory, backlog, config summary).
    [[nodiscard]] nlohmann::json snapshot() const;
    [[nodiscard]] std::vector<Event> events_since(std::uint64_t seq) const;
    /// Blocks until an event newer than `seq` exists, the session closes or
    /// the timeout expires. Returns true when new events are available.
    bool wait_for_events(std::uint64_t seq, std::chrono::milliseconds timeout) const;
    /// Blocks until the command queue is empty and no steps are pending.
    bool wait_idle(std::chrono::milliseconds timeout) const;
    [[nodiscard]] bool closed() const;

    void close();

private:
    void worker();
    void apply(const Command& c);
    void step_once();
    void emit(std::string type, nlohmann::json data);
    [[nodiscard]] bool busy() const;

    std::string id_;
    SessionOptions options_;

    mutable std::mutex mutex_;
    mutable std::condition_variable wake_;
    mutable std::condition_variable events_cv_;
    std::deque<Command> queue_;
    std::unique_ptr<Simulation> sim_;
    SessionView view_;
    std::vector<Event> log_;
    int pending_steps_ = 0;
    bool running_ = false;
    double speed_ = 0.0;
    bool closing_ = false;
    std::jthread thread_;
};

}  // namespace morse
