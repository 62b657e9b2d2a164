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

#include "morse/service/http_server.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include <httplib.h>

namespace morse {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message)
{
    send_json(res, status, {{"error", message}});
}

std::uint64_t parse_since(const httplib::Request& req)
{
    std::string raw;
    if (req.has_param("since"))
        raw = req.get_param_value("since");
    else if (req.has_header("Last-Event-ID"))
        raw = req.get_header_value("Last-Event-ID");
    if (raw.empty()) return 0;
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("since must be a non-negative integer");
    return v;
}

std::string sse_frame(const Event& e)
{
    return "id: " + std::to_string(e.seq) + "\nevent: " + e.type + "\ndata: " + event_to_json(e).dump() + "\n\n";
}

}  // namespace

struct ControlService::Impl {
    ServiceOptions options;
    httplib::Server server;
    mutable std::mutex mutex;
    std::map<std::string, std::shared_ptr<Session>> sessions;
    std::uint64_t next_id = 1;
    std::atomic<bool> stopping{false};
    std::thread thread;

    explicit Impl(ServiceOptions o) : options(std::move(o)) { routes(); }

    std::shared_ptr<Session> find(const std::string& id) const
    {
        std::lock_guard lock(mutex);
        auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second;
    }

    std::shared_ptr<Session> lookup(const httplib::Request& req, httplib::Response& res) const
    {
        auto s = find(req.matches[1]);
        if (!s) send_error(res, 404, "no session '" + std::string(req.matches[1]) + "'");
        return s;
    }

    void create(const httplib::Request& req, httplib::Response& res)
    {
        json body = json::object();
        if (!req.body.empty()) {
            body = json::parse(req.body, nullptr, false);
            if (body.is_discarded() || !body.is_object()) return send_error(res, 400, "body must be a JSON object");
        }
        const ParetoArchive& archive = *options.archive;
        SessionOptions so;
        so.archive = options.archive;
        so.config = archive.config;
        try {
            so.seed = body.value("seed", options.default_seed);
            if (body.contains("weights")) {
                const auto w = body.at("weights").get<std::vector<double>>();
                if (w.size() != 3) return send_error(res, 400, "'weights' must have 3 entries");
                so.policy_id = select_policy(archive, Eigen::Vector3d(w[0], w[1], w[2]));
            } else {
                so.policy_id = body.value("policy_id", select_policy(archive, uniform_weights()));
                (void)archive.find(so.policy_id);
            }
            const int periods = body.value("periods", archive.config.horizon + 1);
            if (periods < 1) return send_error(res, 400, "'periods' must be >= 1");
            so.config.horizon = periods - 1;
        } catch (const json::exception& e) {
            return send_error(res, 400, e.what());
        } catch (const ContractViolation& e) {
            return send_error(res, 400, e.what());
        }

        std::shared_ptr<Session> session;
        {
            std::lock_guard lock(mutex);
            if (static_cast<int>(sessions.size()) >= options.max_sessions)
                return send_error(res, 409, "session limit reached");
            const std::string id = "s" + std::to_string(next_id++);
            session = std::make_shared<Session>(id, std::move(so));
            sessions.emplace(id, session);
        }
        res.set_header("Location", "/sessions/" + session->id());
        send_json(res, 201, session->snapshot());
    }

    void routes()
    {
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) send_error(res, res.status, httplib::status_message(res.status));
        });
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                send_error(res, 500, e.what());
            } catch (...) {
                send_error(res, 500, "unknown error");
            }
        });

        server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, {{"status", "ok"}});
        });
        server.Get("/version", [](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, {{"version", version()}, {"schema_version", kSchemaVersion}});
        });
        server.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
            json list = json::array();
            std::lock_guard lock(mutex);
            for (const auto& [id, s] : sessions) {
                json v = view_to_json(s->view());
                v["id"] = id;
                list.push_back(v);
            }
            send_json(res, 200, {{"sessions", list}});
        });
        server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) { create(req, res); });
        server.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            if (auto s = lookup(req, res)) send_json(res, 200, s->snapshot());
        });
        server.Delete(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            std::shared_ptr<Session> s;
            {
                std::lock_guard lock(mutex);
                auto it = sessions.find(req.matches[1]);
                if (it != sessions.end()) {
                    s = it->second;
                    sessions.erase(it);
                }
            }
            if (!s) return send_error(res, 404, "no session '" + std::string(req.matches[1]) + "'");
            s->close();
            res.status = 204;
        });
        server.Get(R"(/sessions/([^/]+)/policies)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = lookup(req, res);
            if (!s) return;
            json list = json::array();
            for (const auto& e : s->archive().entries)
                list.push_back({{"id", e.id},
                                {"fitness",
                                 {{"profit", e.fitness(0)}, {"neg_emissions", e.fitness(1)}, {"neg_leadtime", e.fitness(2)}}}});
            send_json(res, 200, {{"active", s->view().policy_id}, {"policies", list}});
        });
        server.Post(R"(/sessions/([^/]+)/commands)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = lookup(req, res);
            if (!s) return;
            const json body = json::parse(req.body, nullptr, false);
            if (body.is_discarded()) return send_error(res, 400, "body is not valid JSON");
            try {
                s->submit(body);
            } catch (const CommandError& e) {
                return send_error(res, e.conflict() ? 409 : 400, e.what());
            }
            send_json(res, 202, {{"accepted", true}, {"command", body}});
        });
        server.Get(R"(/sessions/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = lookup(req, res);
            if (!s) return;
            std::uint64_t since = 0;
            try {
                since = parse_since(req);
            } catch (const std::exception&) {
                return send_error(res, 400, "since must be a non-negative integer");
            }
            json events = json::array();
            for (const auto& e : s->events_since(since)) events.push_back(event_to_json(e));
            send_json(res, 200, {{"events", events}, {"last_seq", s->view().seq}});
        });
        server.Get(R"(/sessions/([^/]+)/stream)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = lookup(req, res);
            if (!s) return;
            std::uint64_t since = 0;
            try {
                since = parse_since(req);
            } catch (const std::exception&) {
                return send_error(res, 400, "since must be a non-negative integer");
            }
            // Subscribers without a cursor get a snapshot first, then deltas.
            std::optional<std::string> opening;
            if (!req.has_param("since") && !req.has_header("Last-Event-ID")) {
                const json snap = s->snapshot();
                since = snap.at("seq").get<std::uint64_t>();
                opening = "id: " + std::to_string(since) + "\nevent: snapshot\ndata: " + snap.dump() + "\n\n";
            }
            res.set_header("Cache-Control", "no-cache");
            auto cursor = std::make_shared<std::uint64_t>(since);
            auto first = std::make_shared<std::optional<std::string>>(std::move(opening));
            res.set_chunked_content_provider("text/event-stream", [this, s, cursor, first](std::size_t,
                                                                                         httplib::DataSink& sink) {
                if (*first) {
                    const std::string frame = **first;
                    first->reset();
                    return sink.write(frame.data(), frame.size());
                }
                if (stopping || s->closed()) {
                    sink.done();
                    return true;
                }
                if (!s->wait_for_events(*cursor, std::chrono::milliseconds(250))) {
                    // Comment frames keep proxies from timing out and detect closed clients.
                    const std::string ping = ": keep-alive\n\n";
                    return sink.write(ping.data(), ping.size());
                }
                for (const auto& e : s->events_since(*cursor)) {
                    const std::string frame = sse_frame(e);
                    if (!sink.write(frame.data(), frame.size())) return false;
                    *cursor = e.seq;
                }
                return true;
            });
        });
    }
};

ControlService::ControlService(ServiceOptions options)
{
    require(options.archive != nullptr && !options.archive->entries.empty(), "service: archive is empty");
    impl_ = std::make_unique<Impl>(std::move(options));
}

ControlService::~ControlService()
{
    stop();
}

int ControlService::bind(const std::string& host, int port)
{
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ControlService::run()
{
    return impl_->server.listen_after_bind();
}

void ControlService::start()
{
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void ControlService::stop()
{
    if (!impl_) return;
    impl_->stopping = true;
    {
        std::lock_guard lock(impl_->mutex);
        for (auto& [id, s] : impl_->sessions) s->close();
    }
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

std::shared_ptr<Session> ControlService::session(const std::string& id) const
{
    return impl_->find(id);
}

}  // namespace morse
