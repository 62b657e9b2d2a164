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

#include <vector>

#include <Eigen/Core>

#include "morse/common.hpp"
#include "morse/env/config.hpp"
#include "morse/env/inventory.hpp"
#include "morse/rng.hpp"

namespace morse {

/// Feed-forward layout. Output is one block per (node, product), node-major:
/// [raw mean, raw std, logit_0 .. logit_{n_z-1}].
struct Architecture {
    int input_dim = 0;
    std::vector<int> hidden{64, 64};
    int num_blocks = 0;
    int num_modes = 1;

    [[nodiscard]] int output_dim() const { return num_blocks * (2 + num_modes); }
    /// Layer widths including input and output.
    [[nodiscard]] std::vector<int> widths() const;
    [[nodiscard]] Index num_params() const;

    bool operator==(const Architecture&) const = default;
};

Architecture architecture_for(const NetworkConfig& cfg, std::vector<int> hidden = {64, 64});

/// Policy parameters. Layers are stored in order, each as a row-major
/// (out x in) weight block followed by its bias vector.
struct Genome {
    Architecture arch;
    Eigen::VectorXd params;

    Genome() = default;
    Genome(Architecture a, Eigen::VectorXd p);
    static Genome zeros(const Architecture& a);

    [[nodiscard]] Index size() const { return params.size(); }
    bool operator==(const Genome& other) const { return arch == other.arch && params == other.params; }
};

inline constexpr double kMinStddev = 1e-3;

struct PolicyHeads {
    Eigen::VectorXd mean;       // tanh-squashed, one per block
    Eigen::VectorXd stddev;     // softplus + kMinStddev
    Eigen::MatrixXd mode_probs; // blocks x n_z, rows sum to 1
};

/// Unscaled action: orders in [-1, 1] and mode indices.
struct RawAction {
    Eigen::VectorXd order;
    Eigen::VectorXi mode;
};

/// He initialization: weights N(0, 2 / fan_in), biases zero.
Genome init_genome(const Architecture& arch, Rng& rng);

PolicyHeads forward(const Genome& g, const Eigen::Ref<const Eigen::VectorXd>& obs);

RawAction sample_action(const PolicyHeads& heads, Rng& rng);

/// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits);

/// Min-max map from [-1, 1] onto [lo, hi].
template <typename Scalar>
Scalar scale_order(Scalar unscaled, Scalar lo, Scalar hi)
{
    require(lo <= hi, "scale_order: lower bound exceeds upper bound");
    return (unscaled + Scalar(1)) / Scalar(2) * (hi - lo) + lo;
}

/// Rounds scaled orders to integers within [0, max_order].
ActionSet to_env_action(const RawAction& raw, const NetworkConfig& cfg);

/// observe -> forward -> sample -> scale, for one period.
ActionSet act(const Genome& g, const SimState& state, const NetworkConfig& cfg, Rng& rng);

}  // namespace morse
