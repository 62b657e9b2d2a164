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

#include <filesystem>
#include <iosfwd>
#include <span>

#include <json.hpp>

#include "morse/moea/nsga2.hpp"

namespace morse {

nlohmann::json evo_params_to_json(const EvoParams& params);
EvoParams evo_params_from_json(const nlohmann::json& doc);

nlohmann::json fitness_mode_to_json(const FitnessMode& mode);
FitnessMode fitness_mode_from_json(const nlohmann::json& doc);

/// Self-contained archive document: network config, run parameters, seed,
/// reference point and every policy with its genome. Serialization is a pure
/// function of the archive, so equal archives produce identical bytes.
nlohmann::json archive_to_json(const ParetoArchive& archive);
ParetoArchive archive_from_json(const nlohmann::json& doc);

void save_archive(const std::filesystem::path& path, const ParetoArchive& archive);
ParetoArchive load_archive(const std::filesystem::path& path);

/// Rank and crowding are stored alongside fitness; infinite crowding is
/// written as null.
nlohmann::json checkpoint_to_json(const EvolutionCheckpoint& cp);
EvolutionCheckpoint checkpoint_from_json(const nlohmann::json& doc);

/// generation,evaluations,hypervolume,front_count,first_front_size,
/// best_profit,best_neg_emissions,best_neg_leadtime
void write_generations_csv(std::ostream& out, std::span<const GenerationMetrics> history);

/// id,profit,neg_emissions,neg_leadtime
void write_front_csv(std::ostream& out, const ParetoArchive& archive);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace morse
