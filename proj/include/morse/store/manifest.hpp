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
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "morse/env/config.hpp"

namespace morse {

struct RunManifest {
    std::string run_id;
    std::string command;
    std::uint64_t seed = 0;
    std::string config_name;
    std::string config_hash;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json fitness = nlohmann::json::object();
    std::string started_at;
    std::string finished_at;
    std::string version;
    /// "incomplete" until every output has been written.
    std::string status = "incomplete";
    std::vector<std::string> outputs;
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& doc);

std::string sha256_hex(std::string_view data);
/// SHA-256 of the canonical config document.
std::string config_hash(const NetworkConfig& cfg);
/// ISO-8601 UTC, second resolution.
std::string utc_timestamp();
/// Deterministic id: <command>-<config name>-s<seed>-<first 8 hash digits>.
std::string make_run_id(const std::string& command, const NetworkConfig& cfg, std::uint64_t seed);

}  // namespace morse
