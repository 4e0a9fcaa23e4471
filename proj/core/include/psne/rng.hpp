// Copyright 2026 The psne-lab Authors
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

#ifndef PSNE_RNG_HPP_
#define PSNE_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace psne {

// All randomness flows through this engine so streams are reproducible
// given a seed. Distributions come from the standard library, so streams
// are stable per standard-library implementation, not across them.
using Rng = std::mt19937_64;

inline constexpr const char* kRngId = "mt19937_64";

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Order-sensitive combination of 64-bit words into one seed.
std::uint64_t hash_seed(std::initializer_list<std::uint64_t> words);

// Bit pattern of a double, for seeding from real-valued parameters.
std::uint64_t double_bits(double x);

}  // namespace psne

#endif  // PSNE_RNG_HPP_
