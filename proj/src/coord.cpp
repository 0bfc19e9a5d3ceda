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

#include "xchain/coord.hpp"

namespace xchain::coord {

const char* to_string(TxStatus status) {
    switch (status) {
        case TxStatus::NotStarted: return "NotStarted";
        case TxStatus::Started: return "Started";
        case TxStatus::Committed: return "Committed";
        case TxStatus::Ignored: return "Ignored";
    }
    return "?";
}

const char* to_string(SubmitOutcome outcome) {
    switch (outcome) {
        case SubmitOutcome::Accepted: return "Accepted";
        case SubmitOutcome::BadSignature: return "BadSignature";
        case SubmitOutcome::DuplicateTxId: return "DuplicateTxId";
        case SubmitOutcome::TimeoutInPast: return "TimeoutInPast";
        case SubmitOutcome::WrongState: return "WrongState";
        case SubmitOutcome::PastTimeout: return "PastTimeout";
        case SubmitOutcome::UnknownTxId: return "UnknownTxId";
        case SubmitOutcome::StaleVersion: return "StaleVersion";
    }
    return "?";
}

Bytes start_message(CrosschainTxId tx_id, std::uint64_t timeout_block,
                    ChainId originating_chain) {
    ByteWriter w;
    w.raw(as_bytes("START"));
    w.u64be(tx_id.value);
    w.u64be(timeout_block);
    w.u64be(originating_chain.value);
    return w.take();
}

Bytes commit_message(CrosschainTxId tx_id) {
    ByteWriter w;
    w.raw(as_bytes("COMMIT"));
    w.u64be(tx_id.value);
    return w.take();
}

Bytes ignore_message(CrosschainTxId tx_id) {
    ByteWriter w;
    w.raw(as_bytes("IGNORE"));
    w.u64be(tx_id.value);
    return w.take();
}

Bytes ready_message(CrosschainTxId tx_id, ChainId chain) {
    ByteWriter w;
    w.raw(as_bytes("READY"));
    w.u64be(tx_id.value);
    w.u64be(chain.value);
    return w.take();
}

Bytes view_result_message(CrosschainTxId tx_id, ChainId chain, std::uint64_t block_number,
                          std::int64_t value) {
    ByteWriter w;
    w.raw(as_bytes("VIEWRESULT"));
    w.u64be(tx_id.value);
    w.u64be(chain.value);
    w.u64be(block_number);
    w.i64be(value);
    return w.take();
}

SubmitOutcome CoordinationContract::register_key(const KeyRegistryEntry& entry) {
    auto& versions = registry_[entry.chain];
    if (!versions.empty() && entry.version <= versions.rbegin()->first)
        return SubmitOutcome::StaleVersion;
    versions.emplace(entry.version, entry);
    return SubmitOutcome::Accepted;
}

const KeyRegistryEntry* CoordinationContract::latest_key(ChainId chain) const {
    auto it = registry_.find(chain);
    if (it == registry_.end() || it->second.empty()) return nullptr;
    return &it->second.rbegin()->second;
}

const KeyRegistryEntry* CoordinationContract::key_at(ChainId chain, std::uint64_t version) const {
    auto it = registry_.find(chain);
    if (it == registry_.end()) return nullptr;
    auto v = it->second.find(version);
    return v == it->second.end() ? nullptr : &v->second;
}

SubmitOutcome CoordinationContract::submit_start(CrosschainTxId tx_id, ChainId originating_chain,
                                                 std::uint64_t timeout_block,
                                                 const tsig::ThresholdSignature& sig) {
    const KeyRegistryEntry* key = latest_key(originating_chain);
    if (key == nullptr ||
        !tsig::verify(key->public_key, start_message(tx_id, timeout_block, originating_chain), sig))
        return SubmitOutcome::BadSignature;
    if (records_.contains(tx_id)) return SubmitOutcome::DuplicateTxId;
    if (timeout_block <= clock_.current_block()) return SubmitOutcome::TimeoutInPast;
    records_.emplace(tx_id, CoordinationRecord{tx_id, TxStatus::Started, timeout_block,
                                               originating_chain});
    return SubmitOutcome::Accepted;
}

SubmitOutcome CoordinationContract::resolve(CrosschainTxId tx_id, TxStatus target,
                                            const tsig::ThresholdSignature& sig,
                                            const Bytes& message) {
    auto it = records_.find(tx_id);
    if (it == records_.end()) return SubmitOutcome::UnknownTxId;
    CoordinationRecord& rec = it->second;
    const KeyRegistryEntry* key = latest_key(rec.originating_chain);
    if (key == nullptr || !tsig::verify(key->public_key, message, sig))
        return SubmitOutcome::BadSignature;
    if (rec.status != TxStatus::Started) return SubmitOutcome::WrongState;
    if (clock_.current_block() > rec.timeout_block) return SubmitOutcome::PastTimeout;
    rec.status = target;
    return SubmitOutcome::Accepted;
}

SubmitOutcome CoordinationContract::submit_commit(CrosschainTxId tx_id,
                                                  const tsig::ThresholdSignature& sig) {
    return resolve(tx_id, TxStatus::Committed, sig, commit_message(tx_id));
}

SubmitOutcome CoordinationContract::submit_ignore(CrosschainTxId tx_id,
                                                  const tsig::ThresholdSignature& sig) {
    return resolve(tx_id, TxStatus::Ignored, sig, ignore_message(tx_id));
}

TxStatus CoordinationContract::status(CrosschainTxId tx_id, std::uint64_t at_block) const {
    auto it = records_.find(tx_id);
    if (it == records_.end()) return TxStatus::NotStarted;
    const CoordinationRecord& rec = it->second;
    if (rec.status == TxStatus::Started && at_block > rec.timeout_block) return TxStatus::Ignored;
    return rec.status;
}

const CoordinationRecord* CoordinationContract::record(CrosschainTxId tx_id) const {
    auto it = records_.find(tx_id);
    return it == records_.end() ? nullptr : &it->second;
}

}  // namespace xchain::coord
