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

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>

#include "xchain/txcore.hpp"

// Deterministic application-contract runtime. Contracts are host-registered
// function bodies over 64-bit integer storage; there is no bytecode layer.
// State updates are staged into a provisional overlay when the transaction
// is mined and only merged into committed storage by unlock_commit.
namespace xchain::vm {

using txcore::Address;
using txcore::CallPayload;
using txcore::ChainId;
using txcore::CrosschainTransaction;
using txcore::CrosschainTxId;

using Storage = std::map<std::uint64_t, std::uint64_t>;

struct ContractInstance {
    Address address;
    bool lockable = false;
    std::string body;  // body name resolved through a BodyRegistry
    Storage committed_storage;
    std::optional<Storage> provisional_overlay;  // present iff lock_owner is
    std::optional<CrosschainTxId> lock_owner;

    bool locked() const { return lock_owner.has_value(); }
    std::uint64_t committed(std::uint64_t key) const;
};

enum class ExecMode { Construction, Trial };

// The crosschain precompile fields plus standard sender/origin semantics.
// For the root frame of any element msg_sender == tx_origin == the EOA; a
// local contract-to-contract call sets msg_sender to the calling contract.
struct ExecContext {
    Address msg_sender;
    Address tx_origin;
    Address from_address;
    ChainId from_chain;
    ChainId originating_chain;
    ChainId this_chain;
    ExecMode mode = ExecMode::Trial;
};

class CallFrame;
using BodyFn = std::function<std::int64_t(CallFrame&)>;

class BodyRegistry {
public:
    struct Entry {
        std::size_t arity = 0;
        BodyFn impl;
    };

    void add(const std::string& body, const std::string& function, std::size_t arity, BodyFn impl);
    const Entry* find(const std::string& body, const std::string& function) const;

private:
    std::map<std::string, std::map<std::string, Entry>> bodies_;
};

// Contract bodies used by the packaged scenarios and tests.
const BodyRegistry& builtin_bodies();

struct LockFault {
    enum class Kind { Nonlockable, AlreadyLocked };
    Kind kind;
    std::optional<CrosschainTxId> owner;  // set for AlreadyLocked
    std::string describe() const;
};

class AddressInUse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotLocked : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LockViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Committed state of one blockchain: contracts, EOA nonces and the set of
// contracts staged per crosschain transaction.
class ChainState {
public:
    ChainId id;
    std::uint64_t block_count = 0;
    std::map<Address, ContractInstance> contracts;
    std::map<Address, std::uint64_t> nonces;
    std::map<CrosschainTxId, std::set<Address>> staged_by_tx;

    ContractInstance& deploy(Address address, bool lockable, std::string body,
                             Storage initial_storage = {});
    const ContractInstance* find(Address address) const;
    ContractInstance* find(Address address);
};

// Pass iff the contract is lockable and unlocked. A contract locked by the
// same crosschain transaction still faults: the locking protocol forbids
// repeated contracts in one contract call graph.
std::optional<LockFault> check_lock(const ContractInstance& contract, CrosschainTxId tx_id);

void lock_and_stage(ContractInstance& contract, const Storage& writes, CrosschainTxId tx_id);
void unlock_commit(ContractInstance& contract);
void unlock_discard(ContractInstance& contract);

struct TrialResult {
    enum class Outcome { Ok, Reverted };
    enum class RevertKind {
        None,
        ParamMismatch,
        UnconsumedSubordinate,
        MissingViewResult,
        ContractFault,
    };

    Outcome outcome = Outcome::Ok;
    RevertKind revert_kind = RevertKind::None;
    std::string reason;
    std::map<Address, Storage> writes;  // cleared on revert
    std::vector<std::pair<Address, std::uint64_t>> reads;
    std::size_t consumed_subordinates = 0;
    std::optional<std::int64_t> return_value;

    bool ok() const { return outcome == Outcome::Ok; }
};

const char* to_string(TrialResult::RevertKind kind);

// Threshold-signed view results, keyed by position in the subordinate list.
using ViewResultCache = std::map<std::size_t, std::int64_t>;

// Interception point for crosschain calls made by executing bodies. Trial
// execution checks them against the signed subordinate list; construction
// records them.
class CrosschainHooks {
public:
    virtual ~CrosschainHooks() = default;
    virtual std::int64_t on_view(ChainId chain, Address contract, const std::string& function,
                                 std::span<const std::int64_t> args) = 0;
    virtual void on_tx(ChainId chain, Address contract, const std::string& function,
                       std::span<const std::int64_t> args) = 0;
};

// Runs `call` against committed state. Every crosschain transaction call is
// compared with the next unconsumed subordinate (target chain, address,
// function and actual argument values); crosschain view calls additionally
// return the cached threshold-signed result to the code. Any unconsumed
// subordinate after the body completes reverts the trial.
TrialResult execute_trial(const ChainState& chain, const BodyRegistry& registry, Address target,
                          const CallPayload& call, const ExecContext& ctx,
                          std::span<const CrosschainTransaction> subordinates,
                          const ViewResultCache& cached_view_results, bool is_view = false);

// Shared execution engine: runs the body with custom crosschain hooks.
TrialResult execute_with_hooks(const ChainState& chain, const BodyRegistry& registry,
                               Address target, const CallPayload& call, const ExecContext& ctx,
                               CrosschainHooks& hooks, bool is_view = false);

// Exposed to contract bodies during execution.
class CallFrame {
public:
    std::int64_t arg(std::size_t i) const;
    std::size_t arg_count() const;
    std::uint64_t load(std::uint64_t key);
    void store(std::uint64_t key, std::uint64_t value);
    bool contract_locked(Address contract) const;  // same-chain lock status
    std::int64_t call_view(ChainId chain, Address contract, const std::string& function,
                           std::vector<std::int64_t> args);
    void call_tx(ChainId chain, Address contract, const std::string& function,
                 std::vector<std::int64_t> args);
    const ExecContext& ctx() const { return ctx_; }
    Address self() const { return self_; }
    void require(bool condition, const std::string& reason);
    [[noreturn]] void fail(const std::string& reason);

private:
    friend class Engine;
    CallFrame(class Engine& engine, Address self, ExecContext ctx,
              std::vector<std::int64_t> args, bool view_frame)
        : engine_(engine), self_(self), ctx_(std::move(ctx)), args_(std::move(args)),
          view_frame_(view_frame) {}

    Engine& engine_;
    Address self_;
    ExecContext ctx_;
    std::vector<std::int64_t> args_;
    bool view_frame_;
};

}  // namespace xchain::vm
