// Copyright 2026 The qds-sim Authors
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

#include <cstddef>
#include <concepts>
#include <cstdint>
#include <random>

namespace qds {

/// Default random stream. Every operation that draws randomness takes the
/// stream by reference, so any UniformRandomBitGenerator producing 64-bit
/// words works.
using RandomStream = std::mt19937_64;

/// Generators emitting full 64-bit words; the bit-extraction helpers below
/// rely on that.
template <class Rng>
concept RandomBitStream = std::uniform_random_bit_generator<Rng> && (Rng::min() == 0) &&
                          (Rng::max() == UINT64_MAX);

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for trial `index` of a run started from `master_seed`. Depends only on
/// the pair, never on scheduling.
inline constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0xD1B54A32D192ED03ULL));
}

inline RandomStream trial_stream(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(trial_seed(master_seed, index));
}

template <RandomBitStream Rng>
bool coin(Rng &rng) {
    return (static_cast<std::uint64_t>(rng()) >> 63) != 0;
}

/// Uniform double in [0, 1) with 53 random bits.
template <RandomBitStream Rng>
double uniform01(Rng &rng) {
    return static_cast<double>(static_cast<std::uint64_t>(rng()) >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; n must be positive.
template <RandomBitStream Rng>
std::size_t uniform_index(Rng &rng, std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x;
    do {
        x = static_cast<std::uint64_t>(rng());
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

}  // namespace qds
