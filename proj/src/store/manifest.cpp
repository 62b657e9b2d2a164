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

#include "morse/store/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include <openssl/evp.h>

#include "morse/env/config_io.hpp"

namespace morse {

using nlohmann::json;

json manifest_to_json(const RunManifest& m)
{
    return {{"schema_version", kSchemaVersion},
            {"run_id", m.run_id},
            {"command", m.command},
            {"seed", m.seed},
            {"config_name", m.config_name},
            {"config_hash", m.config_hash},
            {"params", m.params},
            {"fitness", m.fitness},
            {"started_at", m.started_at},
            {"finished_at", m.finished_at},
            {"version", m.version},
            {"status", m.status},
            {"outputs", m.outputs}};
}

RunManifest manifest_from_json(const json& doc)
{
    try {
        RunManifest m;
        m.run_id = doc.at("run_id").get<std::string>();
        m.command = doc.at("command").get<std::string>();
        m.seed = doc.at("seed").get<std::uint64_t>();
        m.config_name = doc.value("config_name", "");
        m.config_hash = doc.at("config_hash").get<std::string>();
        m.params = doc.value("params", json::object());
        m.fitness = doc.value("fitness", json::object());
        m.started_at = doc.value("started_at", "");
        m.finished_at = doc.value("finished_at", "");
        m.version = doc.value("version", "");
        m.status = doc.at("status").get<std::string>();
        m.outputs = doc.value("outputs", std::vector<std::string>{});
        return m;
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("manifest: ") + e.what());
    }
}

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::string hex;
    hex.reserve(2 * len);
    static constexpr char digits[] = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(digits[digest[i] >> 4]);
        hex.push_back(digits[digest[i] & 0xf]);
    }
    return hex;
}

std::string config_hash(const NetworkConfig& cfg)
{
    return sha256_hex(config_to_json(cfg).dump());
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string make_run_id(const std::string& command, const NetworkConfig& cfg, std::uint64_t seed)
{
    const std::string name = cfg.name.empty() ? "custom" : cfg.name;
    return command + "-" + name + "-s" + std::to_string(seed) + "-" + config_hash(cfg).substr(0, 8);
}

}  // namespace morse
