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

#include "xchain/tsig.hpp"

#include <set>

#include "xchain/hash.hpp"
#include "xchain/rng.hpp"

namespace xchain::tsig {

GroupScalar GroupScalar::pow(std::uint64_t exponent) const {
    GroupScalar base = *this;
    GroupScalar acc{1};
    while (exponent != 0) {
        if (exponent & 1) acc = acc * base;
        base = base * base;
        exponent >>= 1;
    }
    return acc;
}

GroupScalar GroupScalar::inverse() const {
    if (value_ == 0) throw std::domain_error("GroupScalar: zero has no inverse");
    return pow(kOrder - 2);
}

GroupScalar hash_to_scalar(ByteView msg) {
    const Sha256Digest digest = sha256(msg);
    // Horner over the digest bytes; intermediate fits in 128 bits.
    unsigned __int128 acc = 0;
    for (std::uint8_t byte : digest) {
        acc = (acc << 8 | byte) % GroupScalar::kOrder;
    }
    return GroupScalar{static_cast<std::uint64_t>(acc)};
}

namespace {

GroupScalar random_scalar(RngStream& rng) {
    return GroupScalar{rng.next() % GroupScalar::kOrder};
}

// Horner evaluation of the coefficient list at x.
GroupScalar eval_poly(const std::vector<GroupScalar>& coeffs, GroupScalar x) {
    GroupScalar acc{0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace

DealerOutput dealer_keygen(const ThresholdConfig& cfg, std::uint64_t seed) {
    if (!cfg.valid()) throw InvalidConfig("dealer_keygen: require 1 <= m <= n");

    RngStream rng(seed, "tsig.dealer");
    std::vector<GroupScalar> f(cfg.m);
    std::vector<GroupScalar> g(cfg.m);
    for (auto& c : f) c = random_scalar(rng);
    for (auto& c : g) c = random_scalar(rng);

    DealerOutput out;
    out.dealer_secret = f[0];
    out.public_key = f[0] * kGeneratorG;
    out.commitments.entries.reserve(cfg.m);
    for (std::size_t j = 0; j < cfg.m; ++j) {
        out.commitments.entries.push_back(f[j] * kGeneratorG + g[j] * kGeneratorH);
    }
    out.shares.reserve(cfg.n);
    for (std::size_t i = 1; i <= cfg.n; ++i) {
        const GroupScalar x{static_cast<std::uint64_t>(i)};
        out.shares.push_back(KeyShare{i, eval_poly(f, x), eval_poly(g, x)});
    }
    return out;
}

bool verify_share(const KeyShare& share, const PedersenCommitments& commitments) {
    const GroupScalar lhs = share.secret_share * kGeneratorG + share.blinding_share * kGeneratorH;
    const GroupScalar x{static_cast<std::uint64_t>(share.index)};
    GroupScalar rhs{0};
    GroupScalar x_pow{1};
    for (const GroupScalar& c : commitments.entries) {
        rhs = rhs + x_pow * c;
        x_pow = x_pow * x;
    }
    return lhs == rhs;
}

SignatureShare sign_share(const KeyShare& share, ByteView msg) {
    return SignatureShare{share.index, share.secret_share * hash_to_scalar(msg)};
}

ThresholdSignature combine(std::span<const SignatureShare> shares, const ThresholdConfig& cfg) {
    if (!cfg.valid()) throw InvalidConfig("combine: require 1 <= m <= n");
    std::set<std::size_t> seen;
    for (const auto& s : shares) {
        if (!seen.insert(s.index).second)
            throw DuplicateIndex("combine: duplicate share index " + std::to_string(s.index));
    }
    if (shares.size() < cfg.m)
        throw InsufficientShares("combine: need " + std::to_string(cfg.m) + " shares, got " +
                                 std::to_string(shares.size()));

    const auto subset = shares.first(cfg.m);
    GroupScalar acc{0};
    for (const auto& si : subset) {
        const GroupScalar xi{static_cast<std::uint64_t>(si.index)};
        GroupScalar num{1};
        GroupScalar den{1};
        for (const auto& sj : subset) {
            if (sj.index == si.index) continue;
            const GroupScalar xj{static_cast<std::uint64_t>(sj.index)};
            num = num * xj;
            den = den * (xj - xi);
        }
        const GroupScalar lambda = num * den.inverse();
        acc = acc + lambda * si.value;
    }
    return ThresholdSignature{acc};
}

bool verify(GroupScalar public_key, ByteView msg, const ThresholdSignature& sig) {
    // Transparent pairing: e(sig, G2) == e(H(m), pk) reduces to
    // sig * 1 == hash_to_scalar(msg) * dlog(pk), and dlog(pk) is pk itself
    // because G = 1.
    return sig.value == hash_to_scalar(msg) * public_key;
}

}  // namespace xchain::tsig
