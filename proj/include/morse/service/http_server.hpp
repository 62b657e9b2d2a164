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
#include <memory>
#include <string>

#include "morse/moea/nsga2.hpp"
#include "morse/service/session.hpp"

namespace morse {

struct ServiceOptions {
    std::shared_ptr<const ParetoArchive> archive;
    std::uint64_t default_seed = 0;
    int max_sessions = 64;
};

/// HTTP + JSON control API over live sessions.
///
///   GET    /health                      liveness
///   GET    /version                     library and schema version
///   GET    /sessions                    ids and views of every session
///   POST   /sessions                    create; body {policy_id | weights, seed, periods}
///   GET    /sessions/{id}               snapshot
///   DELETE /sessions/{id}               stop and discard
///   GET    /sessions/{id}/policies      archive entries with fitness
///   POST   /sessions/{id}/commands      enqueue a command (202)
///   GET    /sessions/{id}/events?since= log entries with seq > since
///   GET    /sessions/{id}/stream        server-sent events, resumable via
///                                       ?since= or Last-Event-ID
///
/// Errors are JSON {"error": message}: 400 malformed request, 404 unknown
/// session, 409 command not allowed in the current state.
class ControlService {
public:
    explicit ControlService(ServiceOptions options);
    ~ControlService();
    ControlService(const ControlService&) = delete;
    ControlService& operator=(const ControlService&) = delete;

    /// Binds to host:port; port 0 picks a free port. Returns the bound port
    /// or -1 on failure.
    int bind(const std::string& host, int port);
    /// Serves until stop(). Requires a prior bind().
    bool run();
    /// run() on a background thread; returns once the server accepts.
    void start();
    void stop();

    std::shared_ptr<Session> session(const std::string& id) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace morse
