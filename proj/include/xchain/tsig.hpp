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
#include <stdexcept>
#include <vector>

#include "xchain/bytes.hpp"

// M-of-N threshold signatures with Pedersen verifiable secret sharing over a
// transparent group: every group element is represented by its discrete log
// mod q = 2^61 - 1, and the "pairing" check degenerates to scalar products.
// This keeps all of the Shamir/Lagrange/commitment arithmetic exact and
// portable. It is NOT cryptographically secure -- anyone can read the secret
// off the public key -- and exists purely so protocol behaviour above it can
// be simulated and tested deterministically.
namespace xchain::tsig {

// Field element of Z_q, q = 2^61 - 1 (a Mersenne prime).
class GroupScalar {
public:
    static constexpr std::uint64_t kOrder = (std::uint64_t{1} << 61) - 1;

    constexpr GroupScalar() = default;
    constexpr explicit GroupScalar(std::uint64_t v) : value_(v % kOrder) {}

    constexpr std::uint64_t value() const { return value_; }

    friend constexpr GroupScalar operator+(GroupScalar a, GroupScalar b) {
        std::uint64_t s = a.value_ + b.value_;  // < 2^62, no overflow
        if (s >= kOrder) s -= kOrder;
        return from_reduced(s);
    }

    friend constexpr GroupScalar operator-(GroupScalar a, GroupScalar b) {
        std::uint64_t s = a.value_ >= b.value_ ? a.value_ - b.value_ : a.value_ + kOrder - b.value_;
        return from_reduced(s);
    }

    friend constexpr GroupScalar operator*(GroupScalar a, GroupScalar b) {
        const auto p = static_cast<unsigned __int128>(a.value_) * b.value_;
        return from_reduced(static_cast<std::uint64_t>(p % kOrder));
    }

    constexpr GroupScalar negate() const {
        return from_reduced(value_ == 0 ? 0 : kOrder - value_);
    }

    GroupScalar pow(std::uint64_t exponent) const;

    // Multiplicative inverse via Fermat; requires a non-zero value.
    GroupScalar inverse() const;

    constexpr bool operator==(const GroupScalar&) const = default;

private:
    static constexpr GroupScalar from_reduced(std::uint64_t v) {
        GroupScalar s;
        s.value_ = v;
        return s;
    }

    std::uint64_t value_ = 0;
};

// Fixed public generators of the transparent group.
inline constexpr GroupScalar kGeneratorG{1};
inline constexpr GroupScalar kGeneratorH{2};

struct ThresholdConfig {
    std::size_t n = 0;  // total key shares
    std::size_t m = 0;  // signing threshold

    bool valid() const { return m >= 1 && m <= n; }
};

struct KeyShare {
    std::size_t index = 0;      // in [1, n]
    GroupScalar secret_share;   // f(index)
    GroupScalar blinding_share; // g(index), Pedersen blinding polynomial
};

using KeyShareSet = std::vector<KeyShare>;

// Entry j commits to the coefficient pair (a_j, b_j) as a_j*G + b_j*H.
// Exactly m entries, one per coefficient of the degree-(m-1) polynomials.
struct PedersenCommitments {
    std::vector<GroupScalar> entries;
};

struct SignatureShare {
    std::size_t index = 0;
    GroupScalar value;  // secret_share * hash_to_scalar(msg)
};

struct ThresholdSignature {
    GroupScalar value;
    bool operator==(const ThresholdSignature&) const = default;
};

struct DealerOutput {
    GroupScalar public_key;  // secret * G
    KeyShareSet shares;
    PedersenCommitments commitments;
    GroupScalar dealer_secret;  // retained for test oracles only
};

class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InsufficientShares : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DuplicateIndex : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// SHA-256(msg) read as a big-endian integer, reduced mod q.
GroupScalar hash_to_scalar(ByteView msg);

// Trusted-dealer key generation: samples random degree-(m-1) polynomials
// f, g with f(0) = secret (coefficients a_0..a_{m-1} then b_0..b_{m-1} from
// one seeded stream) and hands out evaluations at 1..n.
DealerOutput dealer_keygen(const ThresholdConfig& cfg, std::uint64_t seed);

// Pedersen check: s*G + t*H == sum_j index^j * commitments[j].
bool verify_share(const KeyShare& share, const PedersenCommitments& commitments);

SignatureShare sign_share(const KeyShare& share, ByteView msg);

// Lagrange-interpolates the first m shares (by input order) at x = 0. The
// result is the same for every m-subset of honest shares.
ThresholdSignature combine(std::span<const SignatureShare> shares, const ThresholdConfig& cfg);

bool verify(GroupScalar public_key, ByteView msg, const ThresholdSignature& sig);

}  // namespace xchain::tsig
