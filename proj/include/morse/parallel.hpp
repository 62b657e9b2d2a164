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
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "morse/common.hpp"

namespace morse {

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Results must be
/// written to per-index slots; the first exception is rethrown after all
/// workers stop.
template <class Body>
void parallel_for(Index n, int jobs, Body&& body)
{
    const Index workers = std::clamp<Index>(jobs, 1, std::max<Index>(n, 1));
    if (workers == 1) {
        for (Index i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<Index> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (Index w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (Index i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next = n;
                    }
                }
            });
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace morse
