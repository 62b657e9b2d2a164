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

#include "morse/store/archive_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "morse/env/config_io.hpp"
#include "morse/policy/genome_io.hpp"

namespace morse {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from(const json& doc)
{
    const auto values = doc.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
}

template <class Fn>
auto guarded(const char* what, Fn&& fn)
{
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ContractViolation(std::string(what) + ": " + e.what());
    }
}

json metrics_to_json(const GenerationMetrics& m)
{
    return {{"generation", m.generation},
            {"front_sizes", m.front_sizes},
            {"hypervolume", m.hypervolume},
            {"best", vector_json(m.best)},
            {"evaluations", m.evaluations}};
}

GenerationMetrics metrics_from_json(const json& doc)
{
    GenerationMetrics m;
    m.generation = doc.at("generation").get<int>();
    m.front_sizes = doc.at("front_sizes").get<std::vector<int>>();
    m.hypervolume = doc.at("hypervolume").get<double>();
    m.best = vector_from(doc.at("best"));
    m.evaluations = doc.at("evaluations").get<Index>();
    return m;
}

}  // namespace

json evo_params_to_json(const EvoParams& p)
{
    return {{"population", p.population},
            {"generations", p.generations},
            {"episodes", p.episodes},
            {"horizon", p.horizon},
            {"hidden", p.hidden},
            {"crossover_prob", p.variation.crossover_prob},
            {"eta_c", p.variation.eta_c},
            {"mutation_prob", p.variation.mutation_prob},
            {"mutation_sigma", p.variation.mutation_sigma},
            {"weight_limit", p.variation.weight_limit},
            {"convergence_epsilon", p.convergence_epsilon},
            {"convergence_window", p.convergence_window}};
}

EvoParams evo_params_from_json(const json& doc)
{
    return guarded("params", [&] {
        EvoParams p;
        p.population = doc.value("population", p.population);
        p.generations = doc.value("generations", p.generations);
        p.episodes = doc.value("episodes", p.episodes);
        p.horizon = doc.value("horizon", p.horizon);
        p.hidden = doc.value("hidden", p.hidden);
        p.variation.crossover_prob = doc.value("crossover_prob", p.variation.crossover_prob);
        p.variation.eta_c = doc.value("eta_c", p.variation.eta_c);
        p.variation.mutation_prob = doc.value("mutation_prob", p.variation.mutation_prob);
        p.variation.mutation_sigma = doc.value("mutation_sigma", p.variation.mutation_sigma);
        p.variation.weight_limit = doc.value("weight_limit", p.variation.weight_limit);
        p.convergence_epsilon = doc.value("convergence_epsilon", p.convergence_epsilon);
        p.convergence_window = doc.value("convergence_window", p.convergence_window);
        return p;
    });
}

json fitness_mode_to_json(const FitnessMode& mode)
{
    json doc = {{"kind", mode.name()}};
    if (mode.kind == FitnessMode::Kind::CVaR) doc["alpha"] = mode.alpha;
    return doc;
}

FitnessMode fitness_mode_from_json(const json& doc)
{
    return guarded("fitness mode", [&] {
        const auto kind = doc.at("kind").get<std::string>();
        if (kind == "mean") return FitnessMode::mean();
        require(kind == "cvar", "fitness mode: unknown kind '" + kind + "'");
        return FitnessMode::cvar(doc.at("alpha").get<double>());
    });
}

json archive_to_json(const ParetoArchive& archive)
{
    json entries = json::array();
    for (const auto& e : archive.entries)
        entries.push_back({{"id", e.id}, {"fitness", vector_json(e.fitness)}, {"genome", genome_to_json(e.genome)}});
    return {{"schema_version", kSchemaVersion},
            {"kind", "pareto_archive"},
            {"seed", archive.seed},
            {"fitness", fitness_mode_to_json(archive.mode)},
            {"params", evo_params_to_json(archive.params)},
            {"generations_run", archive.generations_run},
            {"reference_point", vector_json(archive.reference_point)},
            {"objectives", {"profit", "neg_emissions", "neg_leadtime"}},
            {"config", config_to_json(archive.config)},
            {"policies", entries}};
}

ParetoArchive archive_from_json(const json& doc)
{
    return guarded("archive", [&] {
        require(doc.is_object() && doc.value("schema_version", 0) == kSchemaVersion,
                "archive: missing or unsupported schema_version");
        ParetoArchive a;
        a.seed = doc.at("seed").get<std::uint64_t>();
        a.mode = fitness_mode_from_json(doc.at("fitness"));
        a.params = evo_params_from_json(doc.at("params"));
        a.generations_run = doc.at("generations_run").get<int>();
        a.reference_point = vector_from(doc.at("reference_point"));
        a.config = config_from_json(doc.at("config"));
        for (const auto& p : doc.at("policies")) {
            ArchiveEntry e;
            e.id = p.at("id").get<int>();
            e.fitness = vector_from(p.at("fitness"));
            require(e.fitness.size() == kNumObjectives, "archive: fitness must have 3 entries");
            e.genome = genome_from_json(p.at("genome"));
            a.entries.push_back(std::move(e));
        }
        require(!a.entries.empty(), "archive: no policies");
        return a;
    });
}

void save_archive(const std::filesystem::path& path, const ParetoArchive& archive)
{
    write_json_file(path, archive_to_json(archive));
}

ParetoArchive load_archive(const std::filesystem::path& path)
{
    return archive_from_json(read_json_file(path));
}

json checkpoint_to_json(const EvolutionCheckpoint& cp)
{
    json members = json::array();
    for (const auto& m : cp.population.members) {
        json crowding = std::isfinite(m.crowding) ? json(m.crowding) : json(nullptr);
        members.push_back({{"fitness", vector_json(m.fitness)},
                           {"rank", m.rank},
                           {"crowding", crowding},
                           {"genome", genome_to_json(m.genome)}});
    }
    json history = json::array();
    for (const auto& h : cp.history) history.push_back(metrics_to_json(h));
    return {{"schema_version", kSchemaVersion},
            {"kind", "checkpoint"},
            {"generation", cp.population.generation},
            {"stalled", cp.stalled},
            {"reference_point", vector_json(cp.reference_point)},
            {"history", history},
            {"population", members}};
}

EvolutionCheckpoint checkpoint_from_json(const json& doc)
{
    return guarded("checkpoint", [&] {
        require(doc.value("schema_version", 0) == kSchemaVersion, "checkpoint: unsupported schema_version");
        EvolutionCheckpoint cp;
        cp.population.generation = doc.at("generation").get<int>();
        cp.stalled = doc.at("stalled").get<int>();
        cp.reference_point = vector_from(doc.at("reference_point"));
        for (const auto& h : doc.at("history")) cp.history.push_back(metrics_from_json(h));
        for (const auto& m : doc.at("population")) {
            EvaluatedIndividual ind;
            ind.fitness = vector_from(m.at("fitness"));
            ind.rank = m.at("rank").get<int>();
            ind.crowding = m.at("crowding").is_null() ? std::numeric_limits<double>::infinity()
                                                      : m.at("crowding").get<double>();
            ind.genome = genome_from_json(m.at("genome"));
            cp.population.members.push_back(std::move(ind));
        }
        return cp;
    });
}

void write_generations_csv(std::ostream& out, std::span<const GenerationMetrics> history)
{
    const auto saved = out.precision(17);
    out << "generation,evaluations,hypervolume,front_count,first_front_size,best_profit,best_neg_emissions,"
           "best_neg_leadtime\n";
    for (const auto& m : history) {
        out << m.generation << ',' << m.evaluations << ',' << m.hypervolume << ',' << m.front_sizes.size() << ','
            << (m.front_sizes.empty() ? 0 : m.front_sizes.front());
        for (Index j = 0; j < m.best.size(); ++j) out << ',' << m.best(j);
        out << '\n';
    }
    out.precision(saved);
}

void write_front_csv(std::ostream& out, const ParetoArchive& archive)
{
    const auto saved = out.precision(17);
    out << "id,profit,neg_emissions,neg_leadtime\n";
    for (const auto& e : archive.entries)
        out << e.id << ',' << e.fitness(0) << ',' << e.fitness(1) << ',' << e.fitness(2) << '\n';
    out.precision(saved);
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ContractViolation(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_json_file(const std::filesystem::path& path, const json& doc)
{
    write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace morse
