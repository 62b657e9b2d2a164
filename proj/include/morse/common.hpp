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
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace morse {

using Index = Eigen::Index;

/// Item counts laid out as nodes x products.
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using ModeMatrix = Eigen::MatrixXi;

/// Objective vector, always in maximize-all convention.
using FitnessVector = Eigen::VectorXd;

/// Per-period reward: (profit, -emissions, -lead time).
using RewardVector = Eigen::Vector3d;

inline constexpr int kNumObjectives = 3;
inline constexpr int kProfit = 0;
inline constexpr int kEmissions = 1;
inline constexpr int kLeadTime = 2;

/// Thrown when a caller breaks a documented precondition. Distinct from any
/// condition the simulation itself can signal.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require(bool condition, const char* what)
{
    if (!condition) throw ContractViolation(what);
}

inline void require(bool condition, const std::string& what)
{
    if (!condition) throw ContractViolation(what);
}

const char* version();

/// Version of every JSON document and CSV layout written by this library.
inline constexpr int kSchemaVersion = 1;

}  // namespace morse
