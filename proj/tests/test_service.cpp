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

#include <doctest.h>

#include "morse/scenario/scenario.hpp"
#include "morse/service/http_server.hpp"
#include "morse/service/session.hpp"
#include "support.hpp"

// After Eigen: the resolver headers pulled in here define macros that
// collide with Eigen parameter names.
#include <httplib.h>

using namespace morse;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

std::shared_ptr<const ParetoArchive> shared_archive()
{
    static const std::shared_ptr<const ParetoArchive> archive = test::mode_pair_archive(build_configuration("A"), 2);
    return archive;
}

SessionOptions options(int periods = 30, std::uint64_t seed = 7)
{
    SessionOptions o;
    o.archive = shared_archive();
    o.config = shared_archive()->config;
    o.config.horizon = periods - 1;
    o.seed = seed;
    return o;
}

std::vector<json> as_json(const std::vector<Event>& events)
{
    std::vector<json> out;
    for (const auto& e : events) out.push_back(event_to_json(e));
    return out;
}

std::vector<Event> periods_of(const std::vector<Event>& events)
{
    std::vector<Event> out;
    for (const auto& e : events)
        if (e.type == "period") out.push_back(e);
    return out;
}

}  // namespace

TEST_SUITE("commands")
{
    TEST_CASE("parsing accepts each command type")
    {
        const ParetoArchive& a = *shared_archive();
        CHECK(parse_command({{"type", "step"}}, a, 0, 10).steps == 1);
        CHECK(parse_command({{"type", "step"}, {"n", 5}}, a, 0, 10).steps == 5);
        CHECK(parse_command({{"type", "run"}, {"speed", 2.5}}, a, 0, 10).speed == 2.5);
        CHECK(parse_command({{"type", "pause"}}, a, 0, 10).type == Command::Type::Pause);
        CHECK(parse_command({{"type", "switch_policy"}, {"policy_id", 1}}, a, 0, 10).policy_id == 1);
        CHECK(parse_command({{"type", "switch_policy"}, {"weights", {0, 1, 0}}}, a, 0, 10).policy_id == 1);
        CHECK(parse_command({{"type", "switch_policy"}, {"weights", {1, 0, 0}}}, a, 0, 10).policy_id == 0);
        const Command inj =
            parse_command({{"type", "inject"}, {"disruption", {{"kind", "cost_surge"}, {"cost_multiplier", 1.5}}}}, a,
                          4, 10);
        CHECK(inj.disruption.start == 4);
        CHECK(inj.disruption.duration == 7);
        CHECK(parse_command({{"type", "reset"}, {"seed", 3}}, a, 0, 10).seed == 3u);
        CHECK_FALSE(parse_command({{"type", "reset"}}, a, 0, 10).seed.has_value());
    }

    TEST_CASE("malformed commands are rejected as bad requests")
    {
        const ParetoArchive& a = *shared_archive();
        const std::vector<json> bad{json::array(),
                                    {{"kind", "step"}},
                                    {{"type", "fly"}},
                                    {{"type", "step"}, {"n", 0}},
                                    {{"type", "step"}, {"n", "five"}},
                                    {{"type", "run"}, {"speed", -1}},
                                    {{"type", "switch_policy"}},
                                    {{"type", "switch_policy"}, {"policy_id", 9}},
                                    {{"type", "switch_policy"}, {"weights", {1, 0}}},
                                    {{"type", "inject"}},
                                    {{"type", "inject"}, {"disruption", {{"kind", "flood"}}}},
                                    {{"type", "reset"}, {"seed", "x"}}};
        for (const auto& doc : bad) {
            CAPTURE(doc.dump());
            try {
                (void)parse_command(doc, a, 0, 10);
                FAIL("accepted");
            } catch (const CommandError& e) {
                CHECK_FALSE(e.conflict());
            }
        }
    }
}

TEST_SUITE("event log")
{
    TEST_CASE("views fold from events")
    {
        std::vector<Event> log;
        log.push_back({1, "created", 0, {{"policy_id", 1}, {"seed", 2}}});
        log.push_back({2, "period", 0, {{"profit", 2.0}, {"emissions", 1.0}, {"lead_time", 3.0}}});
        log.push_back({3, "policy_switched", 1, {{"from", 1}, {"to", 0}}});
        log.push_back({4, "period", 1, {{"profit", -1.0}, {"emissions", 0.5}, {"lead_time", 0.0}}});
        log.push_back({5, "status", 2, {{"status", "running"}}});
        log.push_back({6, "disruption_injected", 2, {{"disruption", {{"kind", "cost_surge"}}}}});
        const SessionView v = replay(log);
        CHECK(v.seq == 6);
        CHECK(v.period == 2);
        CHECK(v.policy_id == 0);
        CHECK(v.profit_cum == 1.0);
        CHECK(v.emissions_cum == 1.5);
        CHECK(v.lead_time_cum == 3.0);
        CHECK(v.status == "running");
        CHECK(v.disruptions.size() == 1);
        CHECK(view_from_json(view_to_json(v)) == v);
        // Replaying a suffix onto a prefix view gives the same result.
        const std::vector<Event> head(log.begin(), log.begin() + 3), tail(log.begin() + 3, log.end());
        CHECK(replay(tail, replay(head)) == v);
        log.push_back({7, "reset", 2, {{"policy_id", 1}, {"seed", 2}}});
        const SessionView r = replay(log);
        CHECK(r.period == 0);
        CHECK(r.profit_cum == 0.0);
        CHECK(r.disruptions.empty());
    }

    TEST_CASE("event json round-trip")
    {
        const Event e{4, "period", 3, {{"profit", 1.25}}};
        const Event back = event_from_json(event_to_json(e));
        CHECK(back.seq == 4);
        CHECK(back.type == "period");
        CHECK(back.period == 3);
        CHECK(back.data == e.data);
    }
}

TEST_SUITE("session")
{
    TEST_CASE("steps are applied between periods and logged densely")
    {
        Session s("t", options());
        s.submit(json{{"type", "step"}, {"n", 5}});
        REQUIRE(s.wait_idle(10s));
        const SessionView v = s.view();
        CHECK(v.period == 5);
        const auto events = s.events_since(0);
        REQUIRE(events.size() == 6);
        for (std::size_t i = 0; i < events.size(); ++i) CHECK(events[i].seq == i + 1);
        CHECK(events.front().type == "created");
        CHECK(replay(events) == v);
        CHECK(s.events_since(3).size() == 3);
        CHECK(s.events_since(99).empty());
    }

    TEST_CASE("switching after a period changes the next one")
    {
        Session s("t", options());
        s.submit(json{{"type", "step"}, {"n", 3}});
        s.submit(json{{"type", "switch_policy"}, {"policy_id", 1}});
        s.submit(json{{"type", "step"}, {"n", 2}});
        REQUIRE(s.wait_idle(10s));
        const auto periods = periods_of(s.events_since(0));
        REQUIRE(periods.size() == 5);
        CHECK(periods[2].data.at("policy_id") == 0);
        CHECK(periods[3].data.at("policy_id") == 1);
        CHECK(periods[3].period == 3);
    }

    TEST_CASE("matches an offline simulation with the same inputs")
    {
        SessionOptions o = options(20, 11);
        Session s("t", o);
        Disruption d;
        d.kind = DisruptionKind::EmissionTax;
        d.start = 6;
        d.duration = 100;
        d.tax_rate = 5;
        d.emission_threshold = 1;
        s.submit(json{{"type", "step"}, {"n", 4}});
        s.submit(json{{"type", "inject"}, {"disruption", disruption_to_json(d)}});
        s.submit(json{{"type", "switch_policy"}, {"policy_id", 1}});
        s.submit(json{{"type", "run"}});
        REQUIRE(s.wait_idle(10s));
        const auto periods = periods_of(s.events_since(0));
        REQUIRE(periods.size() == 20);

        Simulation sim(o.config, o.archive, 0, 11);
        for (int t = 0; t < 20; ++t) {
            if (t == 4) {
                sim.inject(d);
                sim.switch_policy(1);
            }
            const StepRecord r = sim.step();
            CHECK(periods[static_cast<std::size_t>(t)].data.at("profit").get<double>() == r.reward(kProfit));
            CHECK(periods[static_cast<std::size_t>(t)].data.at("emission_tax").get<double>() == r.emission_tax);
        }
        CHECK(s.view().status == "finished");
        CHECK(s.snapshot().at("finished") == true);
    }

    TEST_CASE("reenacting the log reproduces it exactly")
    {
        const SessionOptions o = options(25, 3);
        Session s("t", o);
        s.submit(json{{"type", "step"}, {"n", 7}});
        s.submit(json{{"type", "inject"}, {"disruption", {{"kind", "cost_surge"}, {"cost_multiplier", 1.4}}}});
        s.submit(json{{"type", "step"}, {"n", 3}});
        s.submit(json{{"type", "switch_policy"}, {"weights", {0, 1, 0}}});
        s.submit(json{{"type", "run"}});
        REQUIRE(s.wait_idle(10s));
        s.submit(json{{"type", "reset"}, {"seed", 9}});
        s.submit(json{{"type", "step"}, {"n", 4}});
        REQUIRE(s.wait_idle(10s));
        const auto log = s.events_since(0);
        CHECK(as_json(reenact(log, o)) == as_json(log));
        CHECK(replay(log) == s.view());
    }

    TEST_CASE("finished episodes refuse to advance until reset")
    {
        Session s("t", options(5));
        s.submit(json{{"type", "run"}});
        REQUIRE(s.wait_idle(10s));
        CHECK(s.view().period == 5);
        try {
            s.submit(json{{"type", "step"}});
            FAIL("accepted");
        } catch (const CommandError& e) {
            CHECK(e.conflict());
        }
        s.submit(json{{"type", "reset"}});
        s.submit(json{{"type", "step"}, {"n", 2}});
        REQUIRE(s.wait_idle(10s));
        CHECK(s.view().period == 2);
    }

    TEST_CASE("pause stops a slow run")
    {
        Session s("t", options(1000));
        s.submit(json{{"type", "run"}, {"speed", 200}});
        std::this_thread::sleep_for(50ms);
        s.submit(json{{"type", "pause"}});
        REQUIRE(s.wait_idle(10s));
        const SessionView v = s.view();
        CHECK(v.status == "paused");
        CHECK(v.period < 1000);
        std::this_thread::sleep_for(30ms);
        CHECK(s.view().period == v.period);
    }

    TEST_CASE("closing stops the worker and rejects commands")
    {
        Session s("t", options());
        s.close();
        CHECK(s.closed());
        CHECK_THROWS_AS(s.submit(json{{"type", "pause"}}), CommandError);
    }
}

TEST_SUITE("http service")
{
    struct Fixture {
        ControlService service;
        int port;
        httplib::Client client;

        Fixture()
            : service(ServiceOptions{shared_archive(), 5, 4}),
              port(service.bind("127.0.0.1", 0)),
              client("127.0.0.1", port)
        {
            REQUIRE(port > 0);
            service.start();
            client.set_read_timeout(10, 0);
        }

        json post(const std::string& path, const json& body, int expect)
        {
            auto res = client.Post(path, body.dump(), "application/json");
            REQUIRE(res);
            CHECK_MESSAGE(res->status == expect, res->body);
            return res->body.empty() ? json() : json::parse(res->body);
        }

        json get(const std::string& path, int expect = 200)
        {
            auto res = client.Get(path);
            REQUIRE(res);
            CHECK_MESSAGE(res->status == expect, res->body);
            return json::parse(res->body);
        }
    };

    TEST_CASE("health, version and unknown routes")
    {
        Fixture f;
        CHECK(f.get("/health").at("status") == "ok");
        CHECK(f.get("/version").at("schema_version") == kSchemaVersion);
        auto res = f.client.Get("/nope");
        REQUIRE(res);
        CHECK(res->status == 404);
        CHECK(json::parse(res->body).contains("error"));
        CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    }

    TEST_CASE("session lifecycle over http")
    {
        Fixture f;
        const json created = f.post("/sessions", {{"policy_id", 0}, {"seed", 2}, {"periods", 12}}, 201);
        const std::string id = created.at("id");
        const std::string base = "/sessions/" + id;
        CHECK(created.at("period") == 0);
        CHECK(created.at("config").at("horizon") == 11);
        CHECK(f.get("/sessions").at("sessions").size() == 1);
        CHECK(f.get(base + "/policies").at("policies").size() == 2);

        f.post(base + "/commands", {{"type", "step"}, {"n", 4}}, 202);
        f.post(base + "/commands", {{"type", "switch_policy"}, {"policy_id", 1}}, 202);
        f.post(base + "/commands", {{"type", "run"}}, 202);
        REQUIRE(f.service.session(id)->wait_idle(10s));
        const json snap = f.get(base);
        CHECK(snap.at("period") == 12);
        CHECK(snap.at("status") == "finished");
        CHECK(f.get(base + "/policies").at("active") == 1);

        const json events = f.get(base + "/events?since=0");
        std::vector<Event> log;
        for (const auto& e : events.at("events")) log.push_back(event_from_json(e));
        CHECK(events.at("last_seq") == log.back().seq);
        CHECK(view_to_json(replay(log)) == json{{"seq", snap.at("seq")},
                                                {"status", snap.at("status")},
                                                {"period", snap.at("period")},
                                                {"policy_id", snap.at("policy_id")},
                                                {"profit_cum", snap.at("profit_cum")},
                                                {"emissions_cum", snap.at("emissions_cum")},
                                                {"lead_time_cum", snap.at("lead_time_cum")},
                                                {"disruptions", snap.at("disruptions")}});
        CHECK(f.get(base + "/events?since=" + std::to_string(log.size() - 1)).at("events").size() == 1);

        f.post(base + "/commands", {{"type", "step"}}, 409);
        f.post(base + "/commands", {{"type", "warp"}}, 400);
        auto bad = f.client.Post(base + "/commands", "{not json", "application/json");
        REQUIRE(bad);
        CHECK(bad->status == 400);
        f.get(base + "/events?since=abc", 400);

        auto del = f.client.Delete(base);
        REQUIRE(del);
        CHECK(del->status == 204);
        f.get(base, 404);
        f.post(base + "/commands", {{"type", "pause"}}, 404);
    }

    TEST_CASE("session creation errors and limits")
    {
        Fixture f;
        f.post("/sessions", {{"policy_id", 42}}, 400);
        f.post("/sessions", {{"weights", {1, 0}}}, 400);
        f.post("/sessions", {{"periods", 0}}, 400);
        auto res = f.client.Post("/sessions", "[1,2]", "application/json");
        REQUIRE(res);
        CHECK(res->status == 400);
        CHECK(f.post("/sessions", {{"weights", {0, 1, 0}}}, 201).at("policy_id") == 1);
        for (int i = 0; i < 3; ++i) f.post("/sessions", json::object(), 201);
        f.post("/sessions", json::object(), 409);
    }

    TEST_CASE("event stream sends a snapshot then live events")
    {
        Fixture f;
        const std::string id = f.post("/sessions", {{"periods", 6}}, 201).at("id");
        const std::string base = "/sessions/" + id;
        std::string body;
        std::thread driver([&] {
            std::this_thread::sleep_for(100ms);
            httplib::Client c("127.0.0.1", f.port);
            c.Post(base + "/commands", R"({"type":"run"})", "application/json");
        });
        auto res = f.client.Get(base + "/stream", [&](const char* data, std::size_t n) {
            body.append(data, n);
            return body.find("\"status\":\"finished\"") == std::string::npos;
        });
        driver.join();
        CHECK(body.rfind("id: 1\nevent: snapshot\ndata: ", 0) == 0);
        std::size_t frames = 0;
        for (std::size_t pos = body.find("event: period\n"); pos != std::string::npos;
             pos = body.find("event: period\n", pos + 1))
            ++frames;
        CHECK(frames == 6);
        CHECK(body.find("event: status") != std::string::npos);
    }

    TEST_CASE("event stream resumes from a cursor")
    {
        Fixture f;
        const std::string id = f.post("/sessions", {{"periods", 4}}, 201).at("id");
        const std::string base = "/sessions/" + id;
        f.post(base + "/commands", {{"type", "run"}}, 202);
        REQUIRE(f.service.session(id)->wait_idle(10s));
        std::string body;
        httplib::Headers headers{{"Last-Event-ID", "3"}};
        (void)f.client.Get(base + "/stream", headers, [&](const char* data, std::size_t n) {
            body.append(data, n);
            return body.find("\"status\":\"finished\"") == std::string::npos;
        });
        CHECK(body.find("event: snapshot") == std::string::npos);
        CHECK(body.rfind("id: 4\n", 0) == 0);
    }
}
