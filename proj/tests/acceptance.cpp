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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
//   morse_acceptance [--cli PATH] [--only N]...

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "moea_checks.hpp"
#include "morse/moea/hypervolume.hpp"
#include "morse/moea/nsga2.hpp"
#include "morse/risk/estimators.hpp"
#include "morse/scenario/scenario.hpp"
#include "morse/service/session.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace morse;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

// ------------------------------------------------------------------ 1

Verdict moea_equivalence()
{
    Rng rng(20260101);
    for (int trial = 0; trial < 500; ++trial) {
        const auto pts = test::random_points(rng, 64, 3);
        std::string err = test::compare_sort(pts);
        if (err.empty()) err = test::compare_crowding(pts);
        if (err.empty()) {
            std::uniform_int_distribution<std::size_t> keep(1, pts.size());
            err = test::compare_survival(pts, keep(rng));
        }
        if (!err.empty()) return {false, "population " + std::to_string(trial) + ": " + err};
    }
    for (int trial = 0; trial < 10000; ++trial) {
        const auto abc = test::random_points(rng, 3, 3);
        const auto& a = abc[0];
        const auto& b = abc.size() > 1 ? abc[1] : abc[0];
        const auto& c = abc.size() > 2 ? abc[2] : b;
        if (const std::string err = test::check_dominance_triple(a, b, c); !err.empty())
            return {false, "triple " + std::to_string(trial) + ": " + err};
    }
    return {true, "500 populations, 10000 triples"};
}

// ------------------------------------------------------------------ 2

Verdict cvar_correctness()
{
    std::vector<double> d(10);
    std::iota(d.begin(), d.end(), 1.0);
    if (var_estimate<double>(d, 0.9) != 1.0 || cvar_estimate<double>(d, 0.9) != 1.0)
        return {false, "alpha 0.9 on 1..10"};
    if (var_estimate<double>(d, 0.8) != 2.0 || cvar_estimate<double>(d, 0.8) != 1.5)
        return {false, "alpha 0.8 on 1..10"};

    Rng rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> xs(100000);
    for (double& x : xs) x = normal(rng);
    const double got = cvar_estimate<double>(sorted_copy<double>(xs), 0.9);
    const double expect = oracle::normal_expected_shortfall(0.9);
    if (std::abs(got - expect) >= 0.05) return {false, "normal tail mean " + std::to_string(got)};

    std::uniform_int_distribution<int> size(1, 500);
    std::uniform_real_distribution<double> level(0.01, 0.99);
    std::student_t_distribution<double> heavy(2.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> s(static_cast<std::size_t>(size(rng)));
        for (double& x : s) x = heavy(rng);
        const auto sorted = sorted_copy<double>(s);
        const double alpha = level(rng);
        if (cvar_estimate<double>(sorted, alpha) > var_estimate<double>(sorted, alpha))
            return {false, "cvar above var in set " + std::to_string(trial)};
    }
    std::ostringstream msg;
    msg << "normal tail mean " << got << " vs " << expect;
    return {true, msg.str()};
}

// ------------------------------------------------------------------ 3

std::string check_transition(const SimState& before, const SimState& after, const StepRecord& r,
                             const NetworkConfig& cfg, const ActionSet& a)
{
    if (before.on_hand - r.shipped + r.arrived - r.lost != after.on_hand) return "inventory balance";
    if (after.backlog - before.backlog != r.demand - r.shipped) return "backlog balance";
    if (!(r.shipped.array() <= (before.on_hand + r.arrived).array()).all()) return "shipped beyond available";
    if (!(r.shipped.array() <= (before.backlog + r.demand).array()).all()) return "shipped beyond owed";
    if ((r.shipped.array() < 0).any() || (r.lost.array() < 0).any()) return "negative flow";
    for (int m = 0; m < cfg.num_nodes; ++m) {
        if ((after.on_hand.row(m).array() > cfg.max_inventory(m)).any()) return "capacity";
        if ((after.on_hand.row(m).array() < 0).any()) return "negative stock";
    }
    CountMatrix v = CountMatrix::Zero(cfg.num_nodes, cfg.num_products);
    for (const auto& sh : after.pipeline) {
        if (sh.arrival <= r.t) return "shipment already due";
        v(sh.node, sh.product) += sh.quantity;
    }
    if (v != r.pipeline) return "pipeline total";
    if (r.dispatched.row(0) != a.order.row(0)) return "root order not dispatched";
    return {};
}

Verdict environment_conservation()
{
    int transitions = 0;
    for (const char* id : {"A", "B", "C"}) {
        NetworkConfig cfg = build_configuration(id);
        Rng env(derive_seed(3, {stream_tag(id)})), actions(derive_seed(4, {stream_tag(id)}));
        CountMatrix sent = CountMatrix::Zero(cfg.num_nodes, cfg.num_products);
        CountMatrix received = sent;
        SimState s = reset(cfg);
        int episode_transitions = 0;
        while (episode_transitions < 3334) {
            if (s.t > cfg.horizon) {
                s = reset(cfg);
                sent.setZero();
                received.setZero();
            }
            const SimState before = s;
            const ActionSet a = test::random_action(cfg, actions);
            const StepRecord r = advance(s, a, cfg, {}, env);
            if (const std::string err = check_transition(before, s, r, cfg, a); !err.empty())
                return {false, std::string(id) + " period " + std::to_string(r.t) + ": " + err};
            sent += r.dispatched;
            received += r.arrived;
            if (sent != received + r.pipeline) return {false, std::string(id) + ": shipments not conserved"};
            ++episode_transitions;
        }
        transitions += episode_transitions;
    }

    auto trajectory = [](const NetworkConfig& cfg) {
        Rng env(99), actions(100);
        SimState s = reset(cfg);
        std::vector<StepRecord> out;
        for (int t = 0; t <= cfg.horizon; ++t) out.push_back(advance(s, test::random_action(cfg, actions), cfg, {}, env));
        std::ostringstream csv;
        write_transitions_csv(csv, out);
        return csv.str();
    };
    for (const char* id : {"A", "B", "C"}) {
        const NetworkConfig cfg = build_configuration(id);
        if (trajectory(cfg) != trajectory(cfg)) return {false, std::string(id) + ": trajectory not reproducible"};
    }
    return {true, std::to_string(transitions) + " transitions"};
}

// ------------------------------------------------------------------ 4

oracle::Point to_point(const FitnessVector& f) { return {f.data(), f.data() + f.size()}; }

Verdict evolution_progress()
{
    EvoParams p;
    p.population = 20;
    p.generations = 30;
    p.episodes = 5;
    p.horizon = 50;
    const EvolutionResult r = evolve(build_configuration("A"), p, FitnessMode::mean(), 2026);

    std::vector<oracle::Point> final_front;
    for (const auto& e : r.archive.entries) final_front.push_back(to_point(e.fitness));
    for (std::size_t i = 0; i < final_front.size(); ++i)
        for (std::size_t j = 0; j < final_front.size(); ++j)
            if (oracle::dominates(final_front[i], final_front[j])) return {false, "archive contains a dominated policy"};
    if (final_front.size() < 3) return {false, "only " + std::to_string(final_front.size()) + " policies"};

    std::vector<oracle::Point> initial;
    for (const auto& m : r.initial.members) initial.push_back(to_point(m.fitness));
    std::vector<oracle::Point> initial_front;
    const auto initial_fronts = oracle::fronts(initial);
    for (long i : initial_fronts.front()) initial_front.push_back(initial[static_cast<std::size_t>(i)]);

    const oracle::Point ref = to_point(r.archive.reference_point);
    const double hv_initial = oracle::compressed_hypervolume(initial_front, ref);
    const double hv_final = oracle::compressed_hypervolume(final_front, ref);
    std::ostringstream msg;
    msg << final_front.size() << " policies, hypervolume " << hv_initial << " -> " << hv_final;
    return {hv_final >= hv_initial, msg.str()};
}

// ------------------------------------------------------------------ 5

Verdict adaptive_switching()
{
    auto archive = test::mode_pair_archive(build_configuration("A"));
    int tax_wins = 0, surge_wins = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ScenarioSpec tax = default_scenario("A", DisruptionKind::EmissionTax);
        const ScenarioResult t = run_scenario(tax, archive, seed);
        const ScenarioReport tr = summarize(t.switching, t.fixed, t.trigger_period);
        if (t.switched_policy == 1 && tr.switching.emissions_cum - tr.fixed.emissions_cum < 0.0) ++tax_wins;

        ScenarioSpec surge = default_scenario("A", DisruptionKind::CostSurge);
        surge.initial_policy = 1;
        const ScenarioResult c = run_scenario(surge, archive, seed);
        if (c.switched_policy == 0 && c.switching.points.back().profit_cum >= c.fixed.points.back().profit_cum)
            ++surge_wins;
    }
    std::ostringstream msg;
    msg << "emission tax " << tax_wins << "/10, cost surge " << surge_wins << "/10";
    return {tax_wins == 10 && surge_wins == 10, msg.str()};
}

// ------------------------------------------------------------------ 6

Verdict risk_training()
{
    const NetworkConfig cfg = with_demand_spikes(build_configuration("B"), 0.05, 5.0);
    EvoParams p;
    p.population = 12;
    p.generations = 15;
    p.episodes = 100;

    auto best_profit = [](const ParetoArchive& a) -> const Genome& {
        const ArchiveEntry* best = &a.entries.front();
        for (const auto& e : a.entries)
            if (e.fitness(kProfit) > best->fitness(kProfit)) best = &e;
        return best->genome;
    };
    EvaluationSettings held_out;
    held_out.episodes = 1000;
    auto profit_cvar = [&](const Genome& g) {
        const EpisodeReturns r = episode_returns(cfg, g, held_out, 0x5eed);
        const Eigen::VectorXd profit = r.returns.col(kProfit);
        const auto sorted = sorted_copy<double>(std::span<const double>(profit.data(), profit.size()));
        return cvar_estimate<double>(sorted, 0.9);
    };

    int wins = 0;
    std::ostringstream msg;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const double risk = profit_cvar(best_profit(evolve(cfg, p, FitnessMode::cvar(0.9), seed).archive));
        const double neutral = profit_cvar(best_profit(evolve(cfg, p, FitnessMode::mean(), seed).archive));
        wins += risk >= neutral ? 1 : 0;
        msg << (seed > 1 ? ", " : "cvar/mean ") << static_cast<long>(std::lround(risk)) << '/'
            << static_cast<long>(std::lround(neutral));
    }
    msg << " (" << wins << "/10 seeds)";
    return {wins >= 8, msg.str()};
}

// ------------------------------------------------------------------ 7

std::string shell_quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

std::optional<fs::path> train_once(const std::string& cli, const fs::path& root)
{
    const std::string cmd = shell_quote(cli) + " train --configuration A --seed 31 --population 8 --generations 3"
                            " --episodes 3 --horizon 20 --hidden 16,16 --quiet --out " + shell_quote(root.string()) +
                            " > /dev/null";
    if (std::system(cmd.c_str()) != 0) return std::nullopt;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) return entry.path() / "archive.json";
    return std::nullopt;
}

Verdict reproducibility(const std::string& cli)
{
    if (cli.empty()) return {false, "no --cli binary given"};
    test::TempDir one("accept-train-1"), two("accept-train-2");
    const auto a = train_once(cli, one.path());
    const auto b = train_once(cli, two.path());
    if (!a || !b) return {false, "train command failed"};
    const std::string bytes = test::slurp(*a);
    if (bytes.empty() || bytes != test::slurp(*b)) return {false, "archives differ"};

    using namespace std::chrono_literals;
    SessionOptions o;
    o.archive = test::mode_pair_archive(build_configuration("A"), 5);
    o.config = o.archive->config;
    o.config.horizon = 59;
    o.seed = 12;
    Session live("accept", o);
    live.submit(nlohmann::json{{"type", "step"}, {"n", 15}});
    live.submit(nlohmann::json{{"type", "inject"},
                               {"disruption", {{"kind", "emission_tax"}, {"tax_rate", 5.0}, {"duration", 20}}}});
    live.submit(nlohmann::json{{"type", "step"}, {"n", 10}});
    live.submit(nlohmann::json{{"type", "switch_policy"}, {"weights", {0, 1, 0}}});
    live.submit(nlohmann::json{{"type", "run"}});
    if (!live.wait_idle(60s)) return {false, "session did not finish"};
    live.submit(nlohmann::json{{"type", "reset"}, {"seed", 4}});
    live.submit(nlohmann::json{{"type", "step"}, {"n", 8}});
    if (!live.wait_idle(60s)) return {false, "session did not finish after reset"};
    const std::vector<Event> log = live.events_since(0);
    const std::vector<Event> again = reenact(log, o);
    if (again.size() != log.size()) return {false, "replayed log length differs"};
    int periods = 0;
    for (std::size_t i = 0; i < log.size(); ++i) {
        if (event_to_json(again[i]) != event_to_json(log[i]))
            return {false, "replayed event " + std::to_string(log[i].seq) + " differs"};
        periods += log[i].type == "period" ? 1 : 0;
    }
    if (replay(log) != live.view()) return {false, "replayed view differs"};
    return {true, std::to_string(bytes.size()) + "-byte archives, " + std::to_string(periods) + " replayed periods"};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"morse acceptance suite"};
    std::string cli;
    std::vector<int> only;
    app.add_option("--cli", cli, "Path to the morse executable");
    app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 7));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"MOEA oracle equivalence", moea_equivalence},
        {"CVaR estimator correctness", cvar_correctness},
        {"environment conservation", environment_conservation},
        {"evolution progress", evolution_progress},
        {"adaptive switching direction", adaptive_switching},
        {"risk-training direction", risk_training},
        {"reproducibility", [&] { return reproducibility(cli); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %d (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", number,
                    criteria[i].first.c_str(), v.detail.c_str(), seconds);
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
