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

#include "morse/policy/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace morse {

using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

std::vector<int> Architecture::widths() const
{
    std::vector<int> w;
    w.push_back(input_dim);
    w.insert(w.end(), hidden.begin(), hidden.end());
    w.push_back(output_dim());
    return w;
}

Index Architecture::num_params() const
{
    const auto w = widths();
    Index n = 0;
    for (std::size_t l = 1; l < w.size(); ++l) n += static_cast<Index>(w[l]) * (w[l - 1] + 1);
    return n;
}

Architecture architecture_for(const NetworkConfig& cfg, std::vector<int> hidden)
{
    Architecture a;
    a.input_dim = cfg.observation_size();
    a.hidden = std::move(hidden);
    a.num_blocks = cfg.num_nodes * cfg.num_products;
    a.num_modes = cfg.num_modes();
    return a;
}

Genome::Genome(Architecture a, Eigen::VectorXd p) : arch(std::move(a)), params(std::move(p))
{
    require(params.size() == arch.num_params(), "genome: parameter count does not match architecture");
    require(params.allFinite(), "genome: parameters must be finite");
}

Genome Genome::zeros(const Architecture& a)
{
    return Genome(a, Eigen::VectorXd::Zero(a.num_params()));
}

Genome init_genome(const Architecture& arch, Rng& rng)
{
    require(arch.input_dim > 0 && arch.num_blocks > 0 && arch.num_modes > 0, "init_genome: invalid architecture");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(arch.num_params());
    const auto w = arch.widths();
    Index offset = 0;
    for (std::size_t l = 1; l < w.size(); ++l) {
        const Index fan_in = w[l - 1];
        const Index weights = static_cast<Index>(w[l]) * fan_in;
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
        for (Index i = 0; i < weights; ++i) p(offset + i) = dist(rng);
        offset += weights + w[l];
    }
    return Genome(arch, std::move(p));
}

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits)
{
    Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
    return e / e.sum();
}

namespace {

double softplus(double x)
{
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

PolicyHeads forward(const Genome& g, const Eigen::Ref<const Eigen::VectorXd>& obs)
{
    require(obs.size() == g.arch.input_dim,
            "forward: observation has " + std::to_string(obs.size()) + " entries, architecture expects " +
                std::to_string(g.arch.input_dim));
    const auto w = g.arch.widths();
    Eigen::VectorXd x = obs;
    Index offset = 0;
    for (std::size_t l = 1; l < w.size(); ++l) {
        const Index in = w[l - 1], out = w[l];
        RowMajorMap weights(g.params.data() + offset, out, in);
        offset += out * in;
        Eigen::VectorXd y = weights * x + g.params.segment(offset, out);
        offset += out;
        if (l + 1 < w.size()) y = y.cwiseMax(0.0);
        x = std::move(y);
    }

    const int blocks = g.arch.num_blocks, nz = g.arch.num_modes, stride = 2 + nz;
    PolicyHeads h{Eigen::VectorXd(blocks), Eigen::VectorXd(blocks), Eigen::MatrixXd(blocks, nz)};
    for (int b = 0; b < blocks; ++b) {
        const Index base = static_cast<Index>(b) * stride;
        h.mean(b) = std::tanh(x(base));
        h.stddev(b) = softplus(x(base + 1)) + kMinStddev;
        h.mode_probs.row(b) = softmax(x.segment(base + 2, nz)).transpose();
    }
    return h;
}

RawAction sample_action(const PolicyHeads& heads, Rng& rng)
{
    const Index blocks = heads.mean.size();
    RawAction a{Eigen::VectorXd(blocks), Eigen::VectorXi(blocks)};
    std::normal_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (Index b = 0; b < blocks; ++b) {
        a.order(b) = std::clamp(heads.mean(b) + heads.stddev(b) * unit(rng), -1.0, 1.0);
        // Inverse-CDF draw; zero-probability modes are never chosen.
        const double u = uniform(rng);
        const Index nz = heads.mode_probs.cols();
        double cum = 0.0;
        int chosen = -1;
        for (Index z = 0; z < nz; ++z) {
            const double pz = heads.mode_probs(b, z);
            cum += pz;
            if (pz > 0.0 && u < cum) {
                chosen = static_cast<int>(z);
                break;
            }
        }
        if (chosen < 0) {
            // Rounding left u above the running sum: take the last nonzero mode.
            for (Index z = nz - 1; z >= 0 && chosen < 0; --z)
                if (heads.mode_probs(b, z) > 0.0) chosen = static_cast<int>(z);
        }
        a.mode(b) = chosen;
    }
    return a;
}

ActionSet to_env_action(const RawAction& raw, const NetworkConfig& cfg)
{
    ActionSet out = ActionSet::zeros(cfg);
    Index b = 0;
    for (int m = 0; m < cfg.num_nodes; ++m)
        for (int p = 0; p < cfg.num_products; ++p, ++b) {
            const double hi = cfg.max_order(m);
            const double q = std::round(scale_order(std::clamp(raw.order(b), -1.0, 1.0), 0.0, hi));
            out.order(m, p) = static_cast<std::int64_t>(std::clamp(q, 0.0, hi));
            out.mode(m, p) = raw.mode(b);
        }
    return out;
}

ActionSet act(const Genome& g, const SimState& state, const NetworkConfig& cfg, Rng& rng)
{
    return to_env_action(sample_action(forward(g, observe(state, cfg)), rng), cfg);
}

}  // namespace morse
