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

#include <iosfwd>

#include <json.hpp>

#include "morse/policy/network.hpp"

namespace morse {

nlohmann::json architecture_to_json(const Architecture& arch);
Architecture architecture_from_json(const nlohmann::json& doc);

/// {"schema_version", "architecture", "n_theta", "metadata", "params": [...]}.
/// Parameters are written with round-trip precision.
nlohmann::json genome_to_json(const Genome& g, const nlohmann::json& metadata = nlohmann::json::object());
Genome genome_from_json(const nlohmann::json& doc);

/// Binary checkpoint: the JSON header (without "params") on one line,
/// terminated by '\n', followed by n_theta IEEE-754 doubles in little-endian
/// byte order.
void write_genome_binary(std::ostream& out, const Genome& g,
                         const nlohmann::json& metadata = nlohmann::json::object());
Genome read_genome_binary(std::istream& in);

}  // namespace morse
