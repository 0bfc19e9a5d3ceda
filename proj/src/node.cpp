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

#include "xchain/node.hpp"

namespace xchain::proto {

const char* message_kind(const Message& msg) {
    struct Visitor {
        const char* operator()(const MsgDispatchSub&) const { return "dispatch_sub"; }
        const char* operator()(const MsgDispatchView&) const { return "dispatch_view"; }
        const char* operator()(const MsgViewResult&) const { return "view_result"; }
        const char* operator()(const MsgReady&) const { return "ready"; }
        const char* operator()(const MsgFailure&) const { return "failure"; }
        const char* operator()(const MsgSignalRequest&) const { return "signal_request"; }
    };
    return std::visit(Visitor{}, msg);
}

namespace {

void walk_requirements(const CrosschainTransaction& tx, std::map<ChainId, std::size_t>& out) {
    for (const auto& sub : tx.subordinates) {
        if (sub.tx_type == txcore::TxType::Subordinate) ++out[sub.chain_id];
        walk_requirements(sub, out);
    }
}

void walk_participants(const CrosschainTransaction& tx, std::set<ChainId>& out) {
    for (const auto& sub : tx.subordinates) {
        if (sub.tx_type == txcore::TxType::Subordinate) out.insert(sub.chain_id);
        walk_participants(sub, out);
    }
}

void walk_chains(const CrosschainTransaction& tx, std::set<ChainId>& out) {
    out.insert(tx.chain_id);
    for (const auto& sub : tx.subordinates) walk_chains(sub, out);
}

}  // namespace

std::map<ChainId, std::size_t> ready_requirements(const CrosschainTransaction& root) {
    std::map<ChainId, std::size_t> out;
    walk_requirements(root, out);
    return out;
}

std::set<ChainId> participating_chains(const CrosschainTransaction& root) {
    std::set<ChainId> out;
    out.insert(root.chain_id);
    walk_participants(root, out);
    return out;
}

std::set<ChainId> nest_chains(const CrosschainTransaction& root) {
    std::set<ChainId> out;
    walk_chains(root, out);
    return out;
}

}  // namespace xchain::proto
