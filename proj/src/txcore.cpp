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

#include "xchain/txcore.hpp"

#include <algorithm>

#include "xchain/hash.hpp"

namespace xchain::txcore {

const char* to_string(TxType type) {
    switch (type) {
        case TxType::Originating: return "Originating";
        case TxType::Subordinate: return "Subordinate";
        case TxType::View: return "View";
        case TxType::Signalling: return "Signalling";
        case TxType::SingleChain: return "SingleChain";
    }
    return "?";
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::FieldMismatch: return "FieldMismatch";
        case ViolationKind::FromChainMismatch: return "FromChainMismatch";
        case ViolationKind::FromAddressMismatch: return "FromAddressMismatch";
        case ViolationKind::MisplacedType: return "MisplacedType";
        case ViolationKind::NonViewUnderView: return "NonViewUnderView";
    }
    return "?";
}

namespace {

class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    std::uint64_t u64be() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_ + static_cast<std::size_t>(i)];
        pos_ += 8;
        return v;
    }

    std::uint32_t u32be() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + static_cast<std::size_t>(i)];
        pos_ += 4;
        return v;
    }

    std::string str() {
        const std::uint32_t len = u32be();
        need(len);
        std::string s(reinterpret_cast<const char*>(data_.data() + pos_), len);
        pos_ += len;
        return s;
    }

    std::size_t remaining() const { return data_.size() - pos_; }

    void need(std::size_t n) const {
        if (remaining() < n) throw MalformedEncoding("truncated encoding");
    }

private:
    ByteView data_;
    std::size_t pos_ = 0;
};

void encode_into(const CrosschainTransaction& tx, ByteWriter& w) {
    w.u64be(static_cast<std::uint64_t>(tx.tx_type));
    w.u64be(tx.nonce);
    w.u64be(tx.gas_price);
    w.u64be(tx.gas_limit);
    w.u64be(tx.to.value);
    w.u64be(tx.value);
    w.str(tx.data.function_name);
    w.u32be(static_cast<std::uint32_t>(tx.data.args.size()));
    for (std::int64_t a : tx.data.args) w.i64be(a);
    w.u64be(tx.chain_id.value);
    w.u64be(tx.sender.value);
    w.u64be(tx.coordination_chain.value);
    w.u64be(tx.coordination_contract.value);
    w.u64be(tx.timeout_block);
    w.u64be(tx.crosschain_tx_id.value);
    w.u64be(tx.originating_chain.value);
    w.u64be(tx.from_chain.value);
    w.u64be(tx.from_address.value);
    w.u32be(static_cast<std::uint32_t>(tx.subordinates.size()));
    for (const auto& sub : tx.subordinates) encode_into(sub, w);
}

CrosschainTransaction decode_one(ByteReader& r) {
    CrosschainTransaction tx;
    const std::uint64_t type_raw = r.u64be();
    if (type_raw > static_cast<std::uint64_t>(TxType::SingleChain))
        throw MalformedEncoding("unknown transaction type " + std::to_string(type_raw));
    tx.tx_type = static_cast<TxType>(type_raw);
    tx.nonce = r.u64be();
    tx.gas_price = r.u64be();
    tx.gas_limit = r.u64be();
    tx.to.value = r.u64be();
    tx.value = r.u64be();
    tx.data.function_name = r.str();
    const std::uint32_t argc = r.u32be();
    r.need(std::size_t{argc} * 8);  // oversized counts fail before allocating
    tx.data.args.reserve(argc);
    for (std::uint32_t i = 0; i < argc; ++i)
        tx.data.args.push_back(static_cast<std::int64_t>(r.u64be()));
    tx.chain_id.value = r.u64be();
    tx.sender.value = r.u64be();
    tx.coordination_chain.value = r.u64be();
    tx.coordination_contract.value = r.u64be();
    tx.timeout_block = r.u64be();
    tx.crosschain_tx_id.value = r.u64be();
    tx.originating_chain.value = r.u64be();
    tx.from_chain.value = r.u64be();
    tx.from_address.value = r.u64be();
    const std::uint32_t subs = r.u32be();
    tx.subordinates.reserve(std::min<std::uint32_t>(subs, 1024));
    for (std::uint32_t i = 0; i < subs; ++i) tx.subordinates.push_back(decode_one(r));
    return tx;
}

}  // namespace

Bytes encode(const CrosschainTransaction& tx) {
    ByteWriter w;
    encode_into(tx, w);
    return w.take();
}

CrosschainTransaction decode(ByteView bytes) {
    ByteReader r(bytes);
    CrosschainTransaction tx = decode_one(r);
    if (r.remaining() != 0) throw MalformedEncoding("trailing bytes after encoding");
    return tx;
}

namespace {

struct NestingChecker {
    const CrosschainTransaction& root;
    std::vector<Violation> violations;
    std::vector<std::size_t> path;

    void mismatch(ViolationKind kind, std::string field, std::string detail) {
        violations.push_back(Violation{kind, std::move(field), path, std::move(detail)});
    }

    void check_shared(const CrosschainTransaction& tx) {
        if (tx.coordination_chain != root.coordination_chain)
            mismatch(ViolationKind::FieldMismatch, "coordination_chain", "differs from root");
        if (tx.coordination_contract != root.coordination_contract)
            mismatch(ViolationKind::FieldMismatch, "coordination_contract", "differs from root");
        if (tx.timeout_block != root.timeout_block)
            mismatch(ViolationKind::FieldMismatch, "timeout_block", "differs from root");
        if (tx.crosschain_tx_id != root.crosschain_tx_id)
            mismatch(ViolationKind::FieldMismatch, "crosschain_tx_id", "differs from root");
        if (tx.originating_chain != root.originating_chain)
            mismatch(ViolationKind::FieldMismatch, "originating_chain", "differs from root");
    }

    void walk(const CrosschainTransaction& tx, const CrosschainTransaction* parent,
              bool under_view) {
        if (parent == nullptr) {
            if (tx.tx_type == TxType::Subordinate || tx.tx_type == TxType::View) {
                // acceptable roots when dispatched standalone; nothing to check
            } else if (tx.tx_type != TxType::Originating &&
                       tx.tx_type != TxType::SingleChain &&
                       tx.tx_type != TxType::Signalling) {
                mismatch(ViolationKind::MisplacedType, "", "unexpected root type");
            }
        } else {
            check_shared(tx);
            if (tx.tx_type == TxType::Originating)
                mismatch(ViolationKind::MisplacedType, "",
                         "Originating transaction below the root");
            else if (tx.tx_type != TxType::Subordinate && tx.tx_type != TxType::View)
                mismatch(ViolationKind::MisplacedType, "",
                         std::string(to_string(tx.tx_type)) + " nested as a subordinate");
            if (under_view && tx.tx_type != TxType::View)
                mismatch(ViolationKind::NonViewUnderView, "",
                         "state-mutating subordinate beneath a view");
            if (tx.from_chain != parent->chain_id)
                mismatch(ViolationKind::FromChainMismatch, "from_chain",
                         "does not match parent execution chain");
            if (tx.from_address != parent->to)
                mismatch(ViolationKind::FromAddressMismatch, "from_address",
                         "does not match parent To address");
        }
        const bool view_scope = under_view || tx.tx_type == TxType::View;
        for (std::size_t i = 0; i < tx.subordinates.size(); ++i) {
            path.push_back(i);
            walk(tx.subordinates[i], &tx, view_scope);
            path.pop_back();
        }
    }
};

}  // namespace

std::vector<Violation> validate_nesting(const CrosschainTransaction& root) {
    NestingChecker checker{root, {}, {}};
    checker.walk(root, nullptr, false);
    return std::move(checker.violations);
}

nlohmann::ordered_json to_debug_json(const CrosschainTransaction& tx) {
    nlohmann::ordered_json j;
    j["tx_type"] = to_string(tx.tx_type);
    j["nonce"] = std::to_string(tx.nonce);
    j["gas_price"] = std::to_string(tx.gas_price);
    j["gas_limit"] = std::to_string(tx.gas_limit);
    j["to"] = std::to_string(tx.to.value);
    j["value"] = std::to_string(tx.value);
    j["data"] = {{"function_name", tx.data.function_name}, {"args", nlohmann::ordered_json::array()}};
    for (std::int64_t a : tx.data.args) j["data"]["args"].push_back(std::to_string(a));
    j["chain_id"] = std::to_string(tx.chain_id.value);
    j["sender"] = std::to_string(tx.sender.value);
    j["coordination_chain"] = std::to_string(tx.coordination_chain.value);
    j["coordination_contract"] = std::to_string(tx.coordination_contract.value);
    j["timeout_block"] = std::to_string(tx.timeout_block);
    j["crosschain_tx_id"] = std::to_string(tx.crosschain_tx_id.value);
    j["originating_chain"] = std::to_string(tx.originating_chain.value);
    j["from_chain"] = std::to_string(tx.from_chain.value);
    j["from_address"] = std::to_string(tx.from_address.value);
    j["subordinates"] = nlohmann::ordered_json::array();
    for (const auto& sub : tx.subordinates) j["subordinates"].push_back(to_debug_json(sub));
    return j;
}

Bytes eoa_sign(const CrosschainTransaction& tx, std::uint64_t account_secret) {
    ByteWriter w;
    w.u64be(account_secret);
    w.raw(encode(tx));
    const Sha256Digest digest = sha256(w.bytes());
    return Bytes(digest.begin(), digest.end());
}

bool eoa_verify(const SignedEnvelope& env, std::uint64_t account_secret) {
    return env.eoa_signature == eoa_sign(env.body, account_secret);
}

}  // namespace xchain::txcore
