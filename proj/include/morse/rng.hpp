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
#include <initializer_list>
#include <random>
#include <string_view>

namespace morse {

/// The single engine type used for every random stream in the library.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable 64-bit tag for a stream name (FNV-1a).
constexpr std::uint64_t stream_tag(std::string_view name)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives a seed from a root seed and a path of keys, e.g.
/// (seed, generation, individual, episode). Pure function of its inputs, so
/// streams do not depend on evaluation order or thread count.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = splitmix64(root);
    for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

inline Rng derive_stream(std::uint64_t root, std::initializer_list<std::uint64_t> keys)
{
    return Rng(derive_seed(root, keys));
}

/// Environment noise and action noise are kept on separate streams so that
/// two policies driven by the same episode seed see the same demand and
/// lead-time draws.
struct EpisodeStreams {
    Rng env;
    Rng policy;

    explicit EpisodeStreams(std::uint64_t episode_seed)
        : env(derive_seed(episode_seed, {stream_tag("env")})),
          policy(derive_seed(episode_seed, {stream_tag("policy")}))
    {
    }
};

}  // namespace morse
