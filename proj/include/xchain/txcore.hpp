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

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xchain/bytes.hpp"

namespace xchain::txcore {

struct ChainId {
    std::uint64_t value = 0;
    auto operator<=>(const ChainId&) const = default;
};

struct Address {
    std::uint64_t value = 0;  // 8-byte identifier
    auto operator<=>(const Address&) const = default;
};

struct CrosschainTxId {
    std::uint64_t value = 0;
    auto operator<=>(const CrosschainTxId&) const = default;
};

enum class TxType : std::uint8_t {
    Originating = 0,
    Subordinate = 1,
    View = 2,
    Signalling = 3,
    SingleChain = 4,
};

const char* to_string(TxType type);

struct CallPayload {
    std::string function_name;
    std::vector<std::int64_t> args;
    auto operator<=>(const CallPayload&) const = default;
};

// One element of a nested crosschain transaction. The five coordination
// fields (coordination_chain, coordination_contract, timeout_block,
// crosschain_tx_id, originating_chain) are identical across every element
// of one nest; from_chain/from_address point at the element's caller.
struct CrosschainTransaction {
    TxType tx_type = TxType::SingleChain;
    std::uint64_t nonce = 0;
    std::uint64_t gas_price = 0;  // carried, unused
    std::uint64_t gas_limit = 0;  // carried, unused
    Address to;
    std::uint64_t value = 0;  // carried, unused
    CallPayload data;
    ChainId chain_id;    // chain this element executes on
    Address sender;      // submitting EOA (stands in for signature recovery)
    ChainId coordination_chain;
    Address coordination_contract;
    std::uint64_t timeout_block = 0;
    CrosschainTxId crosschain_tx_id;
    ChainId originating_chain;
    ChainId from_chain;
    Address from_address;
    std::vector<CrosschainTransaction> subordinates;

    bool operator==(const CrosschainTransaction&) const = default;
};

struct SignedEnvelope {
    CrosschainTransaction body;
    Bytes eoa_signature;  // keyed hash over the canonical encoding
    bool operator==(const SignedEnvelope&) const = default;
};

class MalformedEncoding : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Canonical byte encoding: integers as 8-byte big-endian, strings and lists
// length-prefixed with a 4-byte big-endian count, fields in declaration
// order, subordinates recursive. Bit-exact across implementations.
Bytes encode(const CrosschainTransaction& tx);

// Strict inverse of encode: rejects truncation, trailing bytes and
// oversized counts with MalformedEncoding.
CrosschainTransaction decode(ByteView bytes);

enum class ViolationKind {
    FieldMismatch,        // one of the five shared coordination fields differs
    FromChainMismatch,    // subordinate.from_chain != parent.chain_id
    FromAddressMismatch,  // subordinate.from_address != parent.to
    MisplacedType,        // Originating below root, or a nested Signalling/SingleChain
    NonViewUnderView,     // state-mutating subordinate beneath a View
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string field;              // for FieldMismatch
    std::vector<std::size_t> path;  // subordinate indices from the root
    std::string detail;
};

// Cross-field consistency checks over the whole nest; empty means valid.
std::vector<Violation> validate_nesting(const CrosschainTransaction& root);

// Debug rendering for traces: field names match the struct, integers are
// decimal strings.
nlohmann::ordered_json to_debug_json(const CrosschainTransaction& tx);

// EOA signature stand-in: SHA-256(secret_be8 || canonical encoding).
Bytes eoa_sign(const CrosschainTransaction& tx, std::uint64_t account_secret);
bool eoa_verify(const SignedEnvelope& env, std::uint64_t account_secret);

}  // namespace xchain::txcore
