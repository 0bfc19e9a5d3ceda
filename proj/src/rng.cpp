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

#include "xchain/rng.hpp"

#include "xchain/bytes.hpp"
#include "xchain/hash.hpp"

namespace xchain {

RngStream::RngStream(std::uint64_t seed, std::string_view label) {
    ByteWriter w;
    w.u64be(seed);
    w.raw(as_bytes(label));
    const Sha256Digest digest = sha256(w.bytes());
    std::uint64_t state = 0;
    for (int i = 0; i < 8; ++i) state = (state << 8) | digest[static_cast<std::size_t>(i)];
    state_ = state;
}

std::uint64_t RngStream::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t RngStream::below(std::uint64_t n) {
    if (n == 0) return 0;
    return next() % n;
}

std::uint64_t RngStream::range(std::uint64_t lo, std::uint64_t hi) {
    if (hi <= lo) return lo;
    return lo + below(hi - lo + 1);
}

double RngStream::unit() {
    return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace xchain
