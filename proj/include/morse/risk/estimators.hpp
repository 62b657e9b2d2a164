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

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "morse/common.hpp"

namespace morse {

/// Size of the lower tail, ceil(n (1 - alpha)), clamped to [1, n]. A small
/// slack absorbs representation error in 1 - alpha (e.g. 10 * (1 - 0.7)
/// evaluates to 3.0000000000000004).
inline Index tail_count(Index n, double alpha)
{
    require(n > 0, "risk estimate: empty sample");
    require(alpha > 0.0 && alpha < 1.0, "risk estimate: alpha must lie in (0, 1)");
    const double raw = static_cast<double>(n) * (1.0 - alpha);
    auto k = static_cast<Index>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
    return std::clamp<Index>(k, 1, n);
}

/// Lower-tail value at risk: the ceil(n (1 - alpha))-th smallest sample.
template <typename Scalar>
Scalar var_estimate(std::span<const Scalar> sorted, double alpha)
{
    const Index k = tail_count(static_cast<Index>(sorted.size()), alpha);
    require(std::is_sorted(sorted.begin(), sorted.end()), "var_estimate: samples must be sorted ascending");
    return sorted[static_cast<std::size_t>(k - 1)];
}

/// Mean of the ceil(n (1 - alpha)) smallest samples.
template <typename Scalar>
Scalar cvar_estimate(std::span<const Scalar> sorted, double alpha)
{
    const Index k = tail_count(static_cast<Index>(sorted.size()), alpha);
    require(std::is_sorted(sorted.begin(), sorted.end()), "cvar_estimate: samples must be sorted ascending");
    Scalar sum(0);
    for (Index i = 0; i < k; ++i) sum += sorted[static_cast<std::size_t>(i)];
    return sum / static_cast<Scalar>(k);
}

template <typename Scalar>
std::vector<Scalar> sorted_copy(std::span<const Scalar> samples)
{
    std::vector<Scalar> out(samples.begin(), samples.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// Per-objective VaR and CVaR over the columns of an episodes x objectives
/// return matrix.
struct RiskEstimate {
    double alpha = 0.9;
    Index samples = 0;
    Eigen::VectorXd var;
    Eigen::VectorXd cvar;
    Eigen::VectorXd mean;
};

inline RiskEstimate estimate_risk(const Eigen::MatrixXd& returns, double alpha)
{
    RiskEstimate r;
    r.alpha = alpha;
    r.samples = returns.rows();
    r.var.resize(returns.cols());
    r.cvar.resize(returns.cols());
    r.mean = returns.colwise().mean().transpose();
    for (Index j = 0; j < returns.cols(); ++j) {
        const Eigen::VectorXd col = returns.col(j);
        const auto sorted = sorted_copy<double>({col.data(), static_cast<std::size_t>(col.size())});
        r.var(j) = var_estimate<double>(sorted, alpha);
        r.cvar(j) = cvar_estimate<double>(sorted, alpha);
    }
    return r;
}

}  // namespace morse
