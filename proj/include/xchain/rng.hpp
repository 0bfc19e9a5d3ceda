// Copyright 2026 the xchainsim authors
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
#include <string_view>

namespace xchain {

// Deterministic SplitMix64 generator. Labeled substreams derive their state
// from SHA-256(seed_be8 || label), so draws are stable across platforms and
// independent of the order in which other streams are consumed.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label);
    explicit RngStream(std::uint64_t raw_state) : state_(raw_state) {}

    std::uint64_t next();

    // Uniform in [0, n); n = 0 returns 0.
    std::uint64_t below(std::uint64_t n);

    // Uniform in [lo, hi], both bounds included.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi);

    // Uniform in [0, 1).
    double unit();

private:
    std::uint64_t state_ = 0;
};

}  // namespace xchain
