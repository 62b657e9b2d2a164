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

/// True when `a` is at least as good as `b` in every objective and strictly
/// better in one (maximize-all). Exact floating-point comparison.
template <typename DerivedA, typename DerivedB>
bool dominates(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b)
{
    require(a.size() == b.size(), "dominates: fitness vectors differ in length");
    bool strictly = false;
    for (Index j = 0; j < a.size(); ++j) {
        if (a(j) < b(j)) return false;
        if (a(j) > b(j)) strictly = true;
    }
    return strictly;
}

}  // namespace morse
