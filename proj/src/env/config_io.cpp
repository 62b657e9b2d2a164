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

#include "morse/env/config_io.hpp"

#include <fstream>

namespace morse {

using nlohmann::json;

namespace {

template <class T>
T field(const json& doc, const char* key)
{
    require(doc.contains(key), std::string("network config: missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("network config: bad field '") + key + "': " + e.what());
    }
}

template <class T>
T field_or(const json& doc, const char* key, T fallback)
{
    return doc.contains(key) ? field<T>(doc, key) : fallback;
}

Eigen::MatrixXd matrix_field(const json& doc, const char* key, int rows, int cols)
{
    require(doc.contains(key), std::string("network config: missing field '") + key + "'");
    const json& v = doc.at(key);
    Eigen::MatrixXd out(rows, cols);
    const std::string bad = std::string("network config: '") + key + "' has the wrong shape";
    if (v.is_number()) {
        out.setConstant(v.get<double>());
    } else if (v.is_array() && !v.empty() && v.front().is_number()) {
        require(static_cast<int>(v.size()) == cols, bad);
        for (int m = 0; m < rows; ++m)
            for (int p = 0; p < cols; ++p) out(m, p) = v[static_cast<std::size_t>(p)].get<double>();
    } else {
        require(v.is_array() && static_cast<int>(v.size()) == rows, bad);
        for (int m = 0; m < rows; ++m) {
            const json& row = v[static_cast<std::size_t>(m)];
            require(row.is_array() && static_cast<int>(row.size()) == cols, bad);
            for (int p = 0; p < cols; ++p) out(m, p) = row[static_cast<std::size_t>(p)].get<double>();
        }
    }
    return out;
}

template <class Vec>
Vec vector_field(const json& doc, const char* key, int size)
{
    using Scalar = typename Vec::Scalar;
    require(doc.contains(key), std::string("network config: missing field '") + key + "'");
    const json& v = doc.at(key);
    Vec out(size);
    if (v.is_number()) {
        out.setConstant(v.get<Scalar>());
        return out;
    }
    require(v.is_array() && static_cast<int>(v.size()) == size,
            std::string("network config: '") + key + "' needs one entry per node");
    for (int i = 0; i < size; ++i) out(i) = v[static_cast<std::size_t>(i)].get<Scalar>();
    return out;
}

json matrix_json(const Eigen::MatrixXd& m)
{
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

NetworkConfig config_from_json(const json& doc)
{
    require(doc.is_object(), "network config: document must be a JSON object");
    NetworkConfig cfg;
    cfg.name = field_or<std::string>(doc, "name", "");
    cfg.num_nodes = field<int>(doc, "num_nodes");
    cfg.num_products = field<int>(doc, "num_products");
    require(cfg.num_nodes >= 1 && cfg.num_products >= 1, "network config: empty network");
    cfg.horizon = field<int>(doc, "horizon");
    cfg.history = field_or<int>(doc, "history", 4);
    cfg.upstream = field<std::vector<int>>(doc, "upstream");
    require(static_cast<int>(cfg.upstream.size()) == cfg.num_nodes,
            "network config: upstream needs one entry per node");
    if (doc.contains("retail")) {
        cfg.retail = field<std::vector<int>>(doc, "retail");
    } else {
        // Leaves of the tree serve customers.
        for (int m = 0; m < cfg.num_nodes; ++m)
            if (cfg.downstream(m).empty()) cfg.retail.push_back(m);
    }

    const int n = cfg.num_nodes, p = cfg.num_products;
    cfg.distance = vector_field<Eigen::VectorXd>(doc, "distance", n);
    cfg.price = matrix_field(doc, "price", n, p);
    cfg.reorder_cost = matrix_field(doc, "reorder_cost", n, p);
    cfg.transport_cost = matrix_field(doc, "transport_cost", n, p);
    cfg.holding_cost = matrix_field(doc, "holding_cost", n, p);
    cfg.backlog_cost = matrix_field(doc, "backlog_cost", n, p);
    cfg.emission_rate = vector_field<Eigen::VectorXd>(doc, "emission_rate", n);

    require(doc.contains("transport_modes") && doc.at("transport_modes").is_array(),
            "network config: missing field 'transport_modes'");
    for (const json& m : doc.at("transport_modes")) {
        TransportMode mode;
        mode.name = field_or<std::string>(m, "name", "");
        mode.cost_multiplier = field<double>(m, "cost_multiplier");
        mode.emission_multiplier = field<double>(m, "emission_multiplier");
        mode.lead_multiplier = field<double>(m, "lead_multiplier");
        cfg.modes.push_back(std::move(mode));
    }

    cfg.max_order = vector_field<Eigen::VectorXi>(doc, "max_order", n);
    cfg.max_inventory = vector_field<Eigen::VectorXi>(doc, "max_inventory", n);
    if (doc.contains("initial_inventory")) {
        Eigen::MatrixXd init = matrix_field(doc, "initial_inventory", n, p);
        cfg.initial_inventory = init.array().round().cast<std::int64_t>().matrix();
    } else {
        cfg.initial_inventory.resize(n, p);
        for (int m = 0; m < n; ++m)
            cfg.initial_inventory.row(m).setConstant(std::min(cfg.max_order(m) / 2, cfg.max_inventory(m)));
    }

    require(doc.contains("demand"), "network config: missing field 'demand'");
    const json& d = doc.at("demand");
    cfg.demand.base_rate = field<double>(d, "base_rate");
    cfg.demand.seasonal = field_or<bool>(d, "seasonal", false);
    cfg.demand.amplitude = field_or<double>(d, "amplitude", 0.0);
    cfg.demand.frequency = field_or<double>(d, "frequency", 0.0);
    cfg.demand.phase = field_or<double>(d, "phase", 0.0);
    cfg.demand.spike_probability = field_or<double>(d, "spike_probability", 0.0);
    cfg.demand.spike_multiplier = field_or<double>(d, "spike_multiplier", 1.0);

    cfg.lead_time_rate = field<double>(doc, "lead_time_rate");
    cfg.discount = field_or<double>(doc, "discount", 0.99);
    cfg.demand_normalizer = field_or<double>(doc, "demand_normalizer", default_demand_normalizer(cfg.demand));

    validate(cfg);
    return cfg;
}

json config_to_json(const NetworkConfig& cfg)
{
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["name"] = cfg.name;
    doc["num_nodes"] = cfg.num_nodes;
    doc["num_products"] = cfg.num_products;
    doc["horizon"] = cfg.horizon;
    doc["history"] = cfg.history;
    doc["upstream"] = cfg.upstream;
    doc["retail"] = cfg.retail;
    doc["distance"] = std::vector<double>(cfg.distance.data(), cfg.distance.data() + cfg.distance.size());
    doc["price"] = matrix_json(cfg.price);
    doc["reorder_cost"] = matrix_json(cfg.reorder_cost);
    doc["transport_cost"] = matrix_json(cfg.transport_cost);
    doc["holding_cost"] = matrix_json(cfg.holding_cost);
    doc["backlog_cost"] = matrix_json(cfg.backlog_cost);
    doc["emission_rate"] =
        std::vector<double>(cfg.emission_rate.data(), cfg.emission_rate.data() + cfg.emission_rate.size());
    json modes = json::array();
    for (const auto& m : cfg.modes)
        modes.push_back({{"name", m.name},
                         {"cost_multiplier", m.cost_multiplier},
                         {"emission_multiplier", m.emission_multiplier},
                         {"lead_multiplier", m.lead_multiplier}});
    doc["transport_modes"] = std::move(modes);
    doc["max_order"] = std::vector<int>(cfg.max_order.data(), cfg.max_order.data() + cfg.max_order.size());
    doc["max_inventory"] =
        std::vector<int>(cfg.max_inventory.data(), cfg.max_inventory.data() + cfg.max_inventory.size());
    doc["initial_inventory"] = matrix_json(cfg.initial_inventory.cast<double>());
    doc["demand"] = {{"base_rate", cfg.demand.base_rate},
                     {"seasonal", cfg.demand.seasonal},
                     {"amplitude", cfg.demand.amplitude},
                     {"frequency", cfg.demand.frequency},
                     {"phase", cfg.demand.phase},
                     {"spike_probability", cfg.demand.spike_probability},
                     {"spike_multiplier", cfg.demand.spike_multiplier}};
    doc["lead_time_rate"] = cfg.lead_time_rate;
    doc["discount"] = cfg.discount;
    doc["demand_normalizer"] = cfg.demand_normalizer;
    return doc;
}

NetworkConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ContractViolation("network config " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

}  // namespace morse
