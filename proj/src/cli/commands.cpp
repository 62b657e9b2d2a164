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

#include "morse/cli/commands.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <pthread.h>

#include "morse/env/config_io.hpp"
#include "morse/moea/nsga2.hpp"
#include "morse/risk/evaluation.hpp"
#include "morse/scenario/scenario.hpp"
#include "morse/service/http_server.hpp"
#include "morse/store/archive_io.hpp"
#include "morse/store/manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace morse {

namespace {

/// Input problems the user can fix: bad flags, configs, archives or ids.
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path default_out_root()
{
    if (const char* env = std::getenv("MORSE_OUT"); env != nullptr && *env != '\0') return env;
    return "runs";
}

bool is_bundled(const std::string& name)
{
    return name == "A" || name == "B" || name == "C";
}

struct NetworkChoice {
    std::string config_path;
    std::string configuration = "A";

    NetworkConfig load() const
    {
        if (!config_path.empty()) {
            if (!fs::exists(config_path)) throw InvalidInput("config file not found: " + config_path);
            return load_config(config_path);
        }
        return build_configuration(configuration);
    }
};

std::string slurp_csv(const auto& writer)
{
    std::ostringstream ss;
    writer(ss);
    return ss.str();
}

ParetoArchive load_archive_arg(const std::string& path)
{
    if (path.empty()) throw InvalidInput("--archive is required");
    fs::path p = path;
    if (fs::is_directory(p)) p /= "archive.json";
    if (!fs::exists(p)) throw InvalidInput("archive not found: " + p.string());
    return load_archive(p);
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    NetworkChoice network;
    std::string out;
    std::uint64_t seed = 0;
    EvoParams params;
    std::optional<double> risk_alpha;
    std::string hidden = "64,64";
    bool resume = false;
    bool quiet = false;
};

std::vector<int> parse_hidden(const std::string& text)
{
    std::vector<int> widths;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            widths.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw InvalidInput("--hidden must be a comma-separated list of positive integers");
        }
        if (widths.back() <= 0) throw InvalidInput("--hidden widths must be positive");
    }
    if (widths.empty()) throw InvalidInput("--hidden needs at least one layer");
    return widths;
}

int train(const TrainArgs& args, std::ostream& out)
{
    const NetworkConfig cfg = args.network.load();
    EvoParams params = args.params;
    params.hidden = parse_hidden(args.hidden);
    if (params.jobs <= 0) params.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const FitnessMode mode = args.risk_alpha ? FitnessMode::cvar(*args.risk_alpha) : FitnessMode::mean();
    if (args.risk_alpha && !(*args.risk_alpha > 0.0 && *args.risk_alpha < 1.0))
        throw InvalidInput("--risk-alpha must lie in (0, 1)");

    NetworkConfig run_cfg = cfg;
    if (params.horizon >= 0) run_cfg.horizon = params.horizon;

    const fs::path root = args.out.empty() ? default_out_root() : fs::path(args.out);
    const std::string run_id = make_run_id("train", run_cfg, args.seed);
    const fs::path dir = root / run_id;
    const fs::path checkpoint_path = dir / "checkpoint.json";

    RunManifest manifest;
    json params_json = evo_params_to_json(params);
    std::optional<EvolutionCheckpoint> resume_from;
    if (args.resume) {
        if (!fs::exists(dir / "manifest.json") || !fs::exists(checkpoint_path))
            throw InvalidInput("nothing to resume in " + dir.string());
        manifest = manifest_from_json(read_json_file(dir / "manifest.json"));
        if (manifest.params != params_json || manifest.fitness != fitness_mode_to_json(mode))
            throw InvalidInput("--resume: parameters differ from the interrupted run");
        if (manifest.status == "complete") {
            out << dir.string() << " is already complete\n";
            return kExitOk;
        }
        resume_from = checkpoint_from_json(read_json_file(checkpoint_path));
        manifest.status = "incomplete";
    } else {
        manifest.run_id = run_id;
        manifest.command = "train";
        manifest.seed = args.seed;
        manifest.config_name = run_cfg.name;
        manifest.config_hash = config_hash(run_cfg);
        manifest.params = params_json;
        manifest.fitness = fitness_mode_to_json(mode);
        manifest.started_at = utc_timestamp();
        manifest.version = version();
    }
    write_json_file(dir / "config.json", config_to_json(run_cfg));
    write_json_file(dir / "manifest.json", manifest_to_json(manifest));

    EvolutionHooks hooks;
    hooks.resume = resume_from ? &*resume_from : nullptr;
    hooks.on_generation = [&](const GenerationMetrics& m) {
        if (args.quiet) return;
        out << "generation " << m.generation << "  hv " << m.hypervolume << "  first front "
            << (m.front_sizes.empty() ? 0 : m.front_sizes.front()) << '\n';
    };
    hooks.on_checkpoint = [&](const EvolutionCheckpoint& cp) {
        write_json_file(checkpoint_path, checkpoint_to_json(cp));
    };

    const EvolutionResult result = evolve(cfg, params, mode, args.seed, hooks);

    save_archive(dir / "archive.json", result.archive);
    write_text_file(dir / "generations.csv",
                    slurp_csv([&](std::ostream& s) { write_generations_csv(s, result.history); }));
    write_text_file(dir / "front.csv", slurp_csv([&](std::ostream& s) { write_front_csv(s, result.archive); }));
    manifest.status = "complete";
    manifest.finished_at = utc_timestamp();
    manifest.outputs = {"config.json", "checkpoint.json", "archive.json", "generations.csv", "front.csv"};
    write_json_file(dir / "manifest.json", manifest_to_json(manifest));
    out << dir.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string archive;
    std::optional<int> policy;
    int episodes = 1000;
    double alpha = 0.9;
    int horizon = -1;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out;
};

int evaluate(const EvaluateArgs& args, std::ostream& out)
{
    const ParetoArchive archive = load_archive_arg(args.archive);
    if (!(args.alpha > 0.0 && args.alpha < 1.0)) throw InvalidInput("--risk-alpha must lie in (0, 1)");
    if (args.episodes < 1) throw InvalidInput("--episodes must be >= 1");
    std::vector<int> ids;
    if (args.policy) {
        (void)archive.find(*args.policy);
        ids.push_back(*args.policy);
    } else {
        for (const auto& e : archive.entries) ids.push_back(e.id);
    }

    NetworkConfig cfg = archive.config;
    if (args.horizon >= 0) cfg.horizon = args.horizon;
    EvaluationSettings settings;
    settings.episodes = args.episodes;
    settings.jobs = args.jobs <= 0 ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency())) : args.jobs;

    const fs::path root = args.out.empty() ? default_out_root() : fs::path(args.out);
    const fs::path dir = root / make_run_id("evaluate", cfg, args.seed);
    RunManifest manifest;
    manifest.run_id = dir.filename().string();
    manifest.command = "evaluate";
    manifest.seed = args.seed;
    manifest.config_name = cfg.name;
    manifest.config_hash = config_hash(cfg);
    manifest.params = {{"episodes", args.episodes}, {"horizon", cfg.horizon}, {"alpha", args.alpha}};
    manifest.fitness = fitness_mode_to_json(FitnessMode::cvar(args.alpha));
    manifest.started_at = utc_timestamp();
    manifest.version = version();
    write_json_file(dir / "manifest.json", manifest_to_json(manifest));

    // Held-out streams never overlap the training streams of the same seed.
    const std::uint64_t holdout = derive_seed(args.seed, {stream_tag("holdout")});
    json summary = json::array();
    for (int id : ids) {
        const EpisodeReturns r = episode_returns(cfg, archive.find(id).genome, settings, holdout);
        const RiskEstimate risk = estimate_risk(r.returns, args.alpha);
        const std::string stem = "policy_" + std::to_string(id);
        write_text_file(dir / (stem + "_returns.csv"), slurp_csv([&](std::ostream& s) { write_returns_csv(s, r); }));
        json doc = {{"schema_version", kSchemaVersion}, {"policy_id", id}, {"alpha", args.alpha},
                    {"episodes", args.episodes}, {"objectives", json::object()}};
        for (int j = 0; j < kNumObjectives; ++j)
            doc["objectives"][objective_name(j)] = {
                {"mean", risk.mean(j)}, {"var", risk.var(j)}, {"cvar", risk.cvar(j)}};
        write_json_file(dir / (stem + "_risk.json"), doc);
        manifest.outputs.push_back(stem + "_returns.csv");
        manifest.outputs.push_back(stem + "_risk.json");
        summary.push_back(doc);
        out << "policy " << id << "  mean profit " << risk.mean(kProfit) << "  cvar profit " << risk.cvar(kProfit)
            << '\n';
    }
    write_json_file(dir / "summary.json", summary);
    manifest.outputs.push_back("summary.json");
    manifest.status = "complete";
    manifest.finished_at = utc_timestamp();
    write_json_file(dir / "manifest.json", manifest_to_json(manifest));
    out << dir.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- scenario

struct ScenarioArgs {
    std::string archive;
    std::string configuration;
    std::string disruption = "emission_tax";
    int horizon = 400;
    int trigger = 200;
    std::optional<int> policy;
    std::uint64_t seed = 0;
    int replications = 1;
    std::optional<double> tax_rate;
    std::optional<double> emission_threshold;
    std::optional<double> cost_multiplier;
    std::string out;
};

int scenario(const ScenarioArgs& args, std::ostream& out)
{
    auto archive = std::make_shared<const ParetoArchive>(load_archive_arg(args.archive));
    if (args.replications < 1) throw InvalidInput("--replications must be >= 1");
    if (args.policy) (void)archive->find(*args.policy);

    if (!args.configuration.empty() && !is_bundled(args.configuration))
        throw InvalidInput("unknown configuration id '" + args.configuration + "' (expected A, B or C)");
    const std::string network = args.configuration.empty() ? archive->config.name : args.configuration;
    const ScenarioDefaults defaults = is_bundled(network) ? scenario_defaults(network) : ScenarioDefaults{};
    ScenarioSpec spec;
    spec.configuration = args.configuration;
    spec.horizon = args.horizon;
    spec.trigger_period = args.trigger;
    spec.initial_policy = args.policy;
    if (args.disruption == "none") {
        spec.trigger = SwitchTrigger::AtPeriod;
    } else {
        Disruption d;
        try {
            d.kind = disruption_kind_from_string(args.disruption);
        } catch (const ContractViolation&) {
            throw InvalidInput("--disruption must be emission_tax, cost_surge or none");
        }
        d.start = args.trigger;
        d.duration = std::max(1, args.horizon - args.trigger);
        d.tax_rate = args.tax_rate.value_or(defaults.emission_tax_rate);
        d.emission_threshold = args.emission_threshold.value_or(defaults.emission_threshold);
        d.cost_multiplier = args.cost_multiplier.value_or(defaults.cost_multiplier);
        spec.disruption = d;
    }
    validate(spec);

    const fs::path root = args.out.empty() ? default_out_root() : fs::path(args.out);
    const fs::path dir = root / (make_run_id("scenario", archive->config, args.seed) + "-" + args.disruption);
    json reports = json::array();
    Eigen::Vector3d delta_sum = Eigen::Vector3d::Zero();
    for (int k = 0; k < args.replications; ++k) {
        const std::uint64_t seed = derive_seed(args.seed, {stream_tag("scenario"), static_cast<std::uint64_t>(k)});
        const ScenarioResult result = run_scenario(spec, archive, seed);
        const ScenarioReport report = summarize(result.switching, result.fixed, result.trigger_period);
        const fs::path rep = dir / ("rep_" + std::to_string(k));
        write_text_file(rep / "trace_switching.csv",
                        slurp_csv([&](std::ostream& s) { write_trace_csv(s, result.switching); }));
        write_text_file(rep / "trace_static.csv", slurp_csv([&](std::ostream& s) { write_trace_csv(s, result.fixed); }));
        json doc = report_to_json(report);
        doc["initial_policy"] = result.initial_policy;
        doc["switched_policy"] = result.switched_policy;
        doc["seed"] = seed;
        write_json_file(rep / "report.json", doc);
        reports.push_back(doc);
        delta_sum += report.delta_final;
    }
    const Eigen::Vector3d delta_mean = delta_sum / args.replications;
    json summary = {{"schema_version", kSchemaVersion},
                    {"disruption", spec.disruption ? disruption_to_json(*spec.disruption) : json(nullptr)},
                    {"horizon", spec.horizon},
                    {"trigger_period", spec.effective_trigger()},
                    {"replications", args.replications},
                    {"mean_delta_final",
                     {{"profit", delta_mean(0)}, {"emissions", delta_mean(1)}, {"lead_time", delta_mean(2)}}},
                    {"reports", reports}};
    write_json_file(dir / "report.json", summary);
    out << "mean switching - static: profit " << delta_mean(0) << "  emissions " << delta_mean(1) << '\n';
    out << dir.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
    std::string archive;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::uint64_t seed = 0;
};

int serve(const ServeArgs& args, std::ostream& out)
{
    ServiceOptions options;
    options.archive = std::make_shared<const ParetoArchive>(load_archive_arg(args.archive));
    options.default_seed = args.seed;
    ControlService service(options);

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    const int port = service.bind(args.host, args.port);
    if (port < 0) throw std::runtime_error("cannot bind " + args.host + ":" + std::to_string(args.port));
    out << "listening on http://" << args.host << ':' << port << std::endl;
    std::jthread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        service.stop();
    });
    service.run();
    service.stop();
    // Wake the waiter if the server stopped for another reason.
    pthread_kill(waiter.native_handle(), SIGTERM);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multi-objective neuroevolution for supply-chain inventory control", "morse"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    const auto add_network = [](CLI::App* cmd, NetworkChoice& n) {
        auto* path = cmd->add_option("--config", n.config_path, "Network config JSON file");
        cmd->add_option("--configuration", n.configuration, "Bundled network id")
            ->check(CLI::IsMember({"A", "B", "C"}))
            ->excludes(path);
    };

    TrainArgs ta;
    auto* train_cmd = app.add_subcommand("train", "Evolve a Pareto archive of policies");
    add_network(train_cmd, ta.network);
    train_cmd->add_option("--out", ta.out, "Output root (default $MORSE_OUT or ./runs)");
    train_cmd->add_option("--seed", ta.seed, "Root seed");
    train_cmd->add_option("--population", ta.params.population, "Population size")->check(CLI::Range(2, 100000));
    train_cmd->add_option("--generations", ta.params.generations, "Generations")->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--episodes", ta.params.episodes, "Episodes per fitness evaluation")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--horizon", ta.params.horizon, "Last simulated period (default from config)")
        ->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--hidden", ta.hidden, "Hidden layer widths, comma separated");
    train_cmd->add_option("--risk-alpha", ta.risk_alpha, "Use CVaR fitness at this level");
    train_cmd->add_option("--jobs", ta.params.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--convergence-window", ta.params.convergence_window,
                          "Stop after this many generations without hypervolume gain");
    train_cmd->add_option("--convergence-epsilon", ta.params.convergence_epsilon, "Minimum hypervolume gain");
    train_cmd->add_flag("--resume", ta.resume, "Continue from the run's last checkpoint");
    train_cmd->add_flag("--quiet", ta.quiet, "Do not print per-generation progress");

    EvaluateArgs ea;
    auto* eval_cmd = app.add_subcommand("evaluate", "Monte Carlo returns and risk of archive policies");
    eval_cmd->add_option("--archive", ea.archive, "archive.json or run directory")->required();
    eval_cmd->add_option("--policy", ea.policy, "Policy id (default: all)");
    eval_cmd->add_option("--episodes", ea.episodes, "Held-out episodes");
    eval_cmd->add_option("--risk-alpha", ea.alpha, "CVaR level");
    eval_cmd->add_option("--horizon", ea.horizon, "Last simulated period");
    eval_cmd->add_option("--seed", ea.seed, "Root seed");
    eval_cmd->add_option("--jobs", ea.jobs, "Worker threads (0 = all cores)");
    eval_cmd->add_option("--out", ea.out, "Output root");

    ScenarioArgs sa;
    auto* scen_cmd = app.add_subcommand("scenario", "Compare Pareto switching with a static policy under disruption");
    scen_cmd->add_option("--archive", sa.archive, "archive.json or run directory")->required();
    scen_cmd->add_option("--configuration", sa.configuration, "Bundled network id (default: the archive's network)");
    scen_cmd->add_option("--disruption", sa.disruption, "emission_tax, cost_surge or none");
    scen_cmd->add_option("--horizon", sa.horizon, "Number of simulated periods");
    scen_cmd->add_option("--trigger", sa.trigger, "Disruption and switching period");
    scen_cmd->add_option("--policy", sa.policy, "Initial policy id (default: balanced choice)");
    scen_cmd->add_option("--seed", sa.seed, "Root seed");
    scen_cmd->add_option("--replications", sa.replications, "Independent seeds");
    scen_cmd->add_option("--tax-rate", sa.tax_rate, "Emission tax per unit above threshold");
    scen_cmd->add_option("--emission-threshold", sa.emission_threshold, "Untaxed emissions per period");
    scen_cmd->add_option("--cost-multiplier", sa.cost_multiplier, "Cost surge factor");
    scen_cmd->add_option("--out", sa.out, "Output root");

    ServeArgs va;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP control service");
    serve_cmd->add_option("--archive", va.archive, "archive.json or run directory")->required();
    serve_cmd->add_option("--host", va.host, "Bind address");
    serve_cmd->add_option("--port", va.port, "Port (0 picks a free port)")->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--seed", va.seed, "Default session seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (*train_cmd) return train(ta, out);
        if (*eval_cmd) return evaluate(ea, out);
        if (*scen_cmd) return scenario(sa, out);
        if (*serve_cmd) return serve(va, out);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const ContractViolation& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitInvalidInput;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"morse"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace morse
