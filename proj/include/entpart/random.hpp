// Copyright 2026 The entpart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace entpart {

/// Pseudo-random stream used throughout. Streams are never shared between workers.
using Rng = std::mt19937_64;

/// Stream domains keep derived seeds for different purposes apart.
enum class StreamDomain : std::uint32_t {
    train_states = 1,
    test_states = 2,
    transition_states = 3,
    embedding = 4,
    transform = 5,
    measurement = 6,
};

/// Counter-based split of a master seed: the stream for (master, domain, index) is seeded
/// by std::seed_seq over the 32-bit words of the three values, so every (domain, index)
/// pair gets its own reproducible stream independent of scheduling.
inline Rng derive_stream(std::uint64_t master, StreamDomain domain, std::uint64_t index) {
    std::array<std::uint32_t, 5> words{
        static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
        static_cast<std::uint32_t>(domain), static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32)};
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

}  // namespace entpart
