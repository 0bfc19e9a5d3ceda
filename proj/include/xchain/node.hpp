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

#include <variant>

#include "xchain/contractvm.hpp"
#include "xchain/coord.hpp"
#include "xchain/tsig.hpp"
#include "xchain/txcore.hpp"

// Validator and coordinating-node behaviour: message formats, per-node
// protocol state, and the bookkeeping the coordinating node keeps per
// crosschain transaction. The event-driven handlers live in the simulator,
// which advances one node at a time.
namespace xchain::proto {

using txcore::Address;
using txcore::ChainId;
using txcore::CrosschainTransaction;
using txcore::CrosschainTxId;

struct NodeRef {
    ChainId chain;
    std::size_t node_id = 0;
    auto operator<=>(const NodeRef&) const = default;
};

enum class ByzStyle { Crash, CorruptShare };

struct ReadyMessage {
    CrosschainTxId tx_id;
    ChainId chain;
    tsig::ThresholdSignature sig;  // over ("READY", tx_id, chain)
};

struct SignedViewResult {
    CrosschainTxId tx_id;
    ChainId chain;
    std::uint64_t block_number = 0;
    std::int64_t value = 0;
    tsig::ThresholdSignature sig;  // over ("VIEWRESULT", tx_id, chain, block, value)
};

// Inter-node protocol messages carried by simulator events. Dispatches carry
// the multichain-node index so nested subordinates keep flowing through the
// same enterprise's members, plus the coordinating node for failure reports
// and Ready messages.
struct MsgDispatchSub {
    std::uint64_t dispatch_id = 0;
    std::size_t mnode = 0;
    NodeRef coordinator;
    CrosschainTransaction sub;
};

struct MsgDispatchView {
    std::uint64_t dispatch_id = 0;   // pending-trial key at the requester
    std::size_t sub_index = 0;       // position in the requester's subordinate list
    std::size_t mnode = 0;
    NodeRef coordinator;
    NodeRef reply_to;
    CrosschainTransaction view;
};

struct MsgViewResult {
    std::uint64_t dispatch_id = 0;
    std::size_t sub_index = 0;
    SignedViewResult result;
};

struct MsgReady {
    ReadyMessage ready;
};

struct MsgFailure {
    CrosschainTxId tx_id;
    ChainId chain;
    std::string reason;
};

struct MsgSignalRequest {
    CrosschainTxId tx_id;
};

using Message = std::variant<MsgDispatchSub, MsgDispatchView, MsgViewResult, MsgReady, MsgFailure,
                             MsgSignalRequest>;

const char* message_kind(const Message& msg);

// An element waiting for its subordinate views' threshold-signed results
// before trial execution can run (Listing-style lines 1-3).
struct PendingTrial {
    CrosschainTransaction element;
    bool is_view = false;
    std::size_t mnode = 0;
    NodeRef coordinator;
    // reply routing when this pending element is itself a dispatched view
    std::optional<NodeRef> reply_to;
    std::uint64_t reply_dispatch_id = 0;
    std::size_t reply_sub_index = 0;

    vm::ViewResultCache cache;
    std::size_t awaiting = 0;
};

// Coordinating-node bookkeeping for one crosschain transaction. Ready
// messages are counted per chain: a chain hosting k subordinate
// transactions must deliver k of them.
struct CoordinatorState {
    txcore::SignedEnvelope envelope;
    std::size_t mnode = 0;
    std::map<ChainId, std::size_t> ready_required;
    std::map<ChainId, std::size_t> ready_received;
    bool root_mined = false;
    bool resolution_done = false;
};

struct KeyCacheEntry {
    std::uint64_t version = 0;
    tsig::GroupScalar public_key;
};

struct ValidatorNode {
    ChainId chain;
    std::size_t node_id = 0;
    tsig::KeyShare key_share;
    bool byzantine = false;
    ByzStyle byz_style = ByzStyle::Crash;
    bool crashed = false;

    std::map<std::uint64_t, PendingTrial> pending;              // by dispatch id
    std::map<CrosschainTxId, CoordinatorState> coordinating;    // by tx id
    std::map<ChainId, KeyCacheEntry> key_cache;
    std::map<CrosschainTxId, std::uint64_t> local_timers;       // armed -> expiry tick
    std::set<CrosschainTxId> timers_done;                       // fired or cancelled
};

// Counts the Ready messages each chain owes: one per subordinate transaction
// hosted there, recursively.
std::map<ChainId, std::size_t> ready_requirements(const CrosschainTransaction& root);

// Chains that lock state for this nest: originating chain plus every chain
// hosting a subordinate transaction. Views do not participate.
std::set<ChainId> participating_chains(const CrosschainTransaction& root);

// All chains touched by the nest, views included; the submitting multichain
// node must have a member on each.
std::set<ChainId> nest_chains(const CrosschainTransaction& root);

}  // namespace xchain::proto
