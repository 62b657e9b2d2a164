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

namespace morse {

/// One row per individual, one column per objective.
using FitnessMatrix = Eigen::MatrixXd;

using Front = std::vector<Index>;

/// Fronts F_1, F_2, ... as row indices, each sorted ascending. The fronts
/// partition 0..n-1.
std::vector<Front> non_dominated_sort(const FitnessMatrix& fitness);

/// 1-based front index per row.
Eigen::VectorXi front_ranks(const std::vector<Front>& fronts, Index n);

/// Crowding distance of each row of a front. Per objective the rows are
/// stable-sorted by value (ties keep row order); the first and last get
/// +inf and interior rows accrue (next - prev) / (max - min). Objectives
/// with max == min add nothing. Fronts of size <= 2 are all +inf.
Eigen::VectorXd crowding_distance(const FitnessMatrix& front);

/// Rows not dominated by any other row, ascending.
Front non_dominated_rows(const FitnessMatrix& fitness);

}  // namespace morse
