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

#include <Eigen/Core>

#include "morse/common.hpp"

namespace morse {

/// Lebesgue measure of the union of boxes [ref, p] over the rows p of
/// `points` (maximize-all). Exact, by recursive slicing along the last
/// objective down to a two-dimensional sweep. Every row must satisfy
/// p >= ref elementwise.
double hypervolume(const Eigen::MatrixXd& points, const Eigen::VectorXd& ref);

/// Rows of `points` that are >= ref in every objective.
Eigen::MatrixXd points_dominating(const Eigen::MatrixXd& points, const Eigen::VectorXd& ref);

}  // namespace morse
