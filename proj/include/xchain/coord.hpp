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

#include <map>
#include <optional>

#include "xchain/tsig.hpp"
#include "xchain/txcore.hpp"

// The Coordination Blockchain: a block clock, the Crosschain Coordination
// Contract state machine and the Blockchain Public Key registry.
namespace xchain::coord {

using txcore::Address;
using txcore::ChainId;
using txcore::CrosschainTxId;

enum class TxStatus { NotStarted, Started, Committed, Ignored };

const char* to_string(TxStatus status);

struct CoordinationRecord {
    CrosschainTxId tx_id;
    TxStatus status = TxStatus::Started;
    std::uint64_t timeout_block = 0;
    ChainId originating_chain;
};

struct KeyRegistryEntry {
    ChainId chain;
    std::uint64_t version = 0;  // strictly increasing per chain
    tsig::GroupScalar public_key;
    tsig::ThresholdConfig threshold_cfg;
};

// Maps simulation ticks onto coordination-chain block numbers: one block per
// `ticks_per_block` ticks, with the remainder carried between calls.
class CoordClock {
public:
    explicit CoordClock(std::uint64_t ticks_per_block) : delta_(ticks_per_block) {}

    std::uint64_t advance(std::uint64_t ticks) {
        carry_ += ticks;
        block_ += carry_ / delta_;
        carry_ %= delta_;
        return block_;
    }

    std::uint64_t current_block() const { return block_; }
    std::uint64_t delta() const { return delta_; }

    // First tick at which current_block exceeds timeout_block, assuming the
    // clock started at block 0 / tick 0 and is advanced every tick.
    std::uint64_t first_tick_after(std::uint64_t timeout_block) const {
        return (timeout_block + 1) * delta_;
    }

private:
    std::uint64_t delta_;
    std::uint64_t block_ = 0;
    std::uint64_t carry_ = 0;
};

enum class SubmitOutcome {
    Accepted,
    BadSignature,
    DuplicateTxId,
    TimeoutInPast,
    WrongState,
    PastTimeout,
    UnknownTxId,
    StaleVersion,
};

const char* to_string(SubmitOutcome outcome);

// Exact byte formats of the threshold-signed protocol messages: ASCII tag
// followed by 8-byte big-endian fields.
Bytes start_message(CrosschainTxId tx_id, std::uint64_t timeout_block, ChainId originating_chain);
Bytes commit_message(CrosschainTxId tx_id);
Bytes ignore_message(CrosschainTxId tx_id);
Bytes ready_message(CrosschainTxId tx_id, ChainId chain);
Bytes view_result_message(CrosschainTxId tx_id, ChainId chain, std::uint64_t block_number,
                          std::int64_t value);

class CoordinationContract {
public:
    explicit CoordinationContract(std::uint64_t ticks_per_block) : clock_(ticks_per_block) {}

    // Key registry. Versions per chain must strictly increase.
    SubmitOutcome register_key(const KeyRegistryEntry& entry);
    const KeyRegistryEntry* latest_key(ChainId chain) const;
    const KeyRegistryEntry* key_at(ChainId chain, std::uint64_t version) const;

    // Creates the record in Started state if the signature verifies under
    // the originating chain's latest key and the time-out lies ahead.
    SubmitOutcome submit_start(CrosschainTxId tx_id, ChainId originating_chain,
                               std::uint64_t timeout_block, const tsig::ThresholdSignature& sig);

    // Only the originating chain's key may commit or ignore, only from the
    // Started state, and only up to the time-out block.
    SubmitOutcome submit_commit(CrosschainTxId tx_id, const tsig::ThresholdSignature& sig);
    SubmitOutcome submit_ignore(CrosschainTxId tx_id, const tsig::ThresholdSignature& sig);

    // Status as observed at `at_block`: a Started record past its time-out
    // resolves as Ignored at the query level.
    TxStatus status(CrosschainTxId tx_id, std::uint64_t at_block) const;
    TxStatus status_now(CrosschainTxId tx_id) const { return status(tx_id, clock_.current_block()); }

    const CoordinationRecord* record(CrosschainTxId tx_id) const;
    const std::map<CrosschainTxId, CoordinationRecord>& records() const { return records_; }

    CoordClock& clock() { return clock_; }
    const CoordClock& clock() const { return clock_; }

private:
    SubmitOutcome resolve(CrosschainTxId tx_id, TxStatus target,
                          const tsig::ThresholdSignature& sig, const Bytes& message);

    CoordClock clock_;
    std::map<CrosschainTxId, CoordinationRecord> records_;
    std::map<ChainId, std::map<std::uint64_t, KeyRegistryEntry>> registry_;
};

}  // namespace xchain::coord
