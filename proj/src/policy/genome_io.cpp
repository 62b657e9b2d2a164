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

#include "morse/policy/genome_io.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace morse {

using nlohmann::json;

json architecture_to_json(const Architecture& arch)
{
    return {{"input_dim", arch.input_dim},
            {"hidden", arch.hidden},
            {"num_blocks", arch.num_blocks},
            {"num_modes", arch.num_modes},
            {"activation", "relu"}};
}

Architecture architecture_from_json(const json& doc)
{
    try {
        Architecture a;
        a.input_dim = doc.at("input_dim").get<int>();
        a.hidden = doc.at("hidden").get<std::vector<int>>();
        a.num_blocks = doc.at("num_blocks").get<int>();
        a.num_modes = doc.at("num_modes").get<int>();
        require(a.input_dim > 0 && a.num_blocks > 0 && a.num_modes > 0, "architecture: dimensions must be positive");
        for (int h : a.hidden) require(h > 0, "architecture: hidden widths must be positive");
        return a;
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("architecture: ") + e.what());
    }
}

namespace {

json header(const Genome& g, const json& metadata)
{
    return {{"schema_version", kSchemaVersion},
            {"architecture", architecture_to_json(g.arch)},
            {"n_theta", g.size()},
            {"metadata", metadata}};
}

Architecture checked_header(const json& doc)
{
    require(doc.is_object() && doc.contains("architecture") && doc.contains("n_theta"),
            "genome: missing architecture or n_theta");
    require(doc.value("schema_version", 0) == kSchemaVersion, "genome: unsupported schema_version");
    Architecture arch = architecture_from_json(doc.at("architecture"));
    require(doc.at("n_theta").get<Index>() == arch.num_params(), "genome: n_theta does not match architecture");
    return arch;
}

}  // namespace

json genome_to_json(const Genome& g, const json& metadata)
{
    json doc = header(g, metadata);
    doc["params"] = std::vector<double>(g.params.data(), g.params.data() + g.params.size());
    return doc;
}

Genome genome_from_json(const json& doc)
{
    Architecture arch = checked_header(doc);
    require(doc.contains("params") && doc.at("params").is_array(), "genome: missing params");
    const auto values = doc.at("params").get<std::vector<double>>();
    require(static_cast<Index>(values.size()) == arch.num_params(), "genome: params length does not match n_theta");
    return Genome(std::move(arch), Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size())));
}

void write_genome_binary(std::ostream& out, const Genome& g, const json& metadata)
{
    out << header(g, metadata).dump() << '\n';
    for (Index i = 0; i < g.size(); ++i) {
        auto bits = std::bit_cast<std::uint64_t>(g.params(i));
        char bytes[8];
        for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
        out.write(bytes, 8);
    }
}

Genome read_genome_binary(std::istream& in)
{
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "genome: missing binary header");
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ContractViolation(std::string("genome: bad binary header: ") + e.what());
    }
    Architecture arch = checked_header(doc);
    Eigen::VectorXd params(arch.num_params());
    for (Index i = 0; i < params.size(); ++i) {
        unsigned char bytes[8];
        in.read(reinterpret_cast<char*>(bytes), 8);
        require(in.gcount() == 8, "genome: truncated binary payload");
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
        params(i) = std::bit_cast<double>(bits);
    }
    return Genome(std::move(arch), std::move(params));
}

}  // namespace morse
