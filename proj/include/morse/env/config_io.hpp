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
#include <string>

#include <json.hpp>

#include "morse/env/config.hpp"

namespace morse {

/// Parses a network config document. Cost matrices may be given as a full
/// nodes x products array, a single per-product row (repeated for every
/// node) or a scalar. Missing optional fields take documented defaults:
/// history 4, discount 0.99, initial_inventory = min(max_order/2, max_inventory),
/// demand_normalizer = 2 * base_rate * (1 + amplitude).
/// The result is validated; invalid documents throw ContractViolation.
NetworkConfig config_from_json(const nlohmann::json& doc);

/// Canonical form: every matrix written out in full.
nlohmann::json config_to_json(const NetworkConfig& cfg);

NetworkConfig load_config(const std::filesystem::path& path);

}  // namespace morse
