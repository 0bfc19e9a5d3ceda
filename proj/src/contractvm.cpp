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

#include "xchain/contractvm.hpp"

#include <algorithm>

namespace xchain::vm {

std::uint64_t ContractInstance::committed(std::uint64_t key) const {
    auto it = committed_storage.find(key);
    return it == committed_storage.end() ? 0 : it->second;
}

void BodyRegistry::add(const std::string& body, const std::string& function, std::size_t arity,
                       BodyFn impl) {
    bodies_[body][function] = Entry{arity, std::move(impl)};
}

const BodyRegistry::Entry* BodyRegistry::find(const std::string& body,
                                              const std::string& function) const {
    auto b = bodies_.find(body);
    if (b == bodies_.end()) return nullptr;
    auto f = b->second.find(function);
    if (f == b->second.end()) return nullptr;
    return &f->second;
}

std::string LockFault::describe() const {
    switch (kind) {
        case Kind::Nonlockable:
            return "Nonlockable";
        case Kind::AlreadyLocked:
            return "AlreadyLocked(" + std::to_string(owner ? owner->value : 0) + ")";
    }
    return "?";
}

ContractInstance& ChainState::deploy(Address address, bool lockable, std::string body,
                                     Storage initial_storage) {
    if (contracts.contains(address))
        throw AddressInUse("deploy: address " + std::to_string(address.value) + " already in use");
    ContractInstance instance;
    instance.address = address;
    instance.lockable = lockable;
    instance.body = std::move(body);
    instance.committed_storage = std::move(initial_storage);
    return contracts.emplace(address, std::move(instance)).first->second;
}

const ContractInstance* ChainState::find(Address address) const {
    auto it = contracts.find(address);
    return it == contracts.end() ? nullptr : &it->second;
}

ContractInstance* ChainState::find(Address address) {
    auto it = contracts.find(address);
    return it == contracts.end() ? nullptr : &it->second;
}

std::optional<LockFault> check_lock(const ContractInstance& contract, CrosschainTxId) {
    if (!contract.lockable) return LockFault{LockFault::Kind::Nonlockable, std::nullopt};
    if (contract.lock_owner)
        return LockFault{LockFault::Kind::AlreadyLocked, contract.lock_owner};
    return std::nullopt;
}

void lock_and_stage(ContractInstance& contract, const Storage& writes, CrosschainTxId tx_id) {
    if (check_lock(contract, tx_id))
        throw LockViolation("lock_and_stage on contract " + std::to_string(contract.address.value));
    contract.provisional_overlay = writes;
    contract.lock_owner = tx_id;
}

void unlock_commit(ContractInstance& contract) {
    if (!contract.lock_owner) throw NotLocked("unlock_commit: contract is not locked");
    for (const auto& [key, value] : *contract.provisional_overlay)
        contract.committed_storage[key] = value;
    contract.provisional_overlay.reset();
    contract.lock_owner.reset();
}

void unlock_discard(ContractInstance& contract) {
    if (!contract.lock_owner) throw NotLocked("unlock_discard: contract is not locked");
    contract.provisional_overlay.reset();
    contract.lock_owner.reset();
}

const char* to_string(TrialResult::RevertKind kind) {
    switch (kind) {
        case TrialResult::RevertKind::None: return "None";
        case TrialResult::RevertKind::ParamMismatch: return "ParamMismatch";
        case TrialResult::RevertKind::UnconsumedSubordinate: return "UnconsumedSubordinate";
        case TrialResult::RevertKind::MissingViewResult: return "MissingViewResult";
        case TrialResult::RevertKind::ContractFault: return "ContractFault";
    }
    return "?";
}

namespace {

struct BodyFault {
    TrialResult::RevertKind kind;
    std::string reason;
};

}  // namespace

// Single execution engine shared by trial and construction passes. Writes go
// to a per-execution overlay (read-your-writes within the transaction) and
// are only surfaced through the TrialResult.
class Engine {
public:
    Engine(const ChainState& chain, const BodyRegistry& registry, CrosschainHooks& hooks)
        : chain_(chain), registry_(registry), hooks_(hooks) {}

    std::int64_t call(Address target, const std::string& function,
                      std::vector<std::int64_t> args, const ExecContext& ctx, bool view_frame) {
        if (++depth_ > kMaxDepth)
            throw BodyFault{TrialResult::RevertKind::ContractFault, "call depth limit"};
        const ContractInstance* contract = chain_.find(target);
        if (contract == nullptr)
            throw BodyFault{TrialResult::RevertKind::ContractFault,
                            "no contract at address " + std::to_string(target.value)};
        const BodyRegistry::Entry* entry = registry_.find(contract->body, function);
        if (entry == nullptr)
            throw BodyFault{TrialResult::RevertKind::ContractFault,
                            contract->body + " has no function " + function};
        if (entry->arity != args.size())
            throw BodyFault{TrialResult::RevertKind::ContractFault,
                            function + ": expected " + std::to_string(entry->arity) +
                                " args, got " + std::to_string(args.size())};
        CallFrame frame(*this, target, ctx, std::move(args), view_frame);
        const std::int64_t result = entry->impl(frame);
        --depth_;
        return result;
    }

    std::uint64_t load(Address self, std::uint64_t key) {
        reads_.emplace_back(self, key);
        auto w = writes_.find(self);
        if (w != writes_.end()) {
            auto it = w->second.find(key);
            if (it != w->second.end()) return it->second;
        }
        const ContractInstance* contract = chain_.find(self);
        return contract == nullptr ? 0 : contract->committed(key);
    }

    void store(Address self, std::uint64_t key, std::uint64_t value) {
        writes_[self][key] = value;
    }

    bool contract_locked(Address address) const {
        const ContractInstance* contract = chain_.find(address);
        return contract != nullptr && contract->locked();
    }

    const ChainState& chain() const { return chain_; }
    CrosschainHooks& hooks() { return hooks_; }

    std::map<Address, Storage> take_writes() { return std::move(writes_); }
    std::vector<std::pair<Address, std::uint64_t>> take_reads() { return std::move(reads_); }

private:
    static constexpr int kMaxDepth = 64;

    const ChainState& chain_;
    const BodyRegistry& registry_;
    CrosschainHooks& hooks_;
    std::map<Address, Storage> writes_;
    std::vector<std::pair<Address, std::uint64_t>> reads_;
    int depth_ = 0;
};

std::int64_t CallFrame::arg(std::size_t i) const {
    if (i >= args_.size())
        throw BodyFault{TrialResult::RevertKind::ContractFault,
                        "argument index " + std::to_string(i) + " out of range"};
    return args_[i];
}

std::size_t CallFrame::arg_count() const { return args_.size(); }

std::uint64_t CallFrame::load(std::uint64_t key) { return engine_.load(self_, key); }

void CallFrame::store(std::uint64_t key, std::uint64_t value) {
    if (view_frame_)
        throw BodyFault{TrialResult::RevertKind::ContractFault, "storage write inside a view"};
    engine_.store(self_, key, value);
}

bool CallFrame::contract_locked(Address contract) const {
    return engine_.contract_locked(contract);
}

std::int64_t CallFrame::call_view(ChainId chain, Address contract, const std::string& function,
                                  std::vector<std::int64_t> args) {
    if (chain == ctx_.this_chain) {
        ExecContext nested = ctx_;
        nested.msg_sender = self_;
        return engine_.call(contract, function, std::move(args), nested, /*view_frame=*/true);
    }
    return engine_.hooks().on_view(chain, contract, function, args);
}

void CallFrame::call_tx(ChainId chain, Address contract, const std::string& function,
                        std::vector<std::int64_t> args) {
    if (view_frame_)
        throw BodyFault{TrialResult::RevertKind::ContractFault,
                        "transaction call inside a view"};
    if (chain == ctx_.this_chain) {
        ExecContext nested = ctx_;
        nested.msg_sender = self_;
        engine_.call(contract, function, std::move(args), nested, /*view_frame=*/false);
        return;
    }
    engine_.hooks().on_tx(chain, contract, function, args);
}

void CallFrame::require(bool condition, const std::string& reason) {
    if (!condition) fail(reason);
}

void CallFrame::fail(const std::string& reason) {
    throw BodyFault{TrialResult::RevertKind::ContractFault, reason};
}

TrialResult execute_with_hooks(const ChainState& chain, const BodyRegistry& registry,
                               Address target, const CallPayload& call, const ExecContext& ctx,
                               CrosschainHooks& hooks, bool is_view) {
    Engine engine(chain, registry, hooks);
    TrialResult result;
    try {
        const std::int64_t value =
            engine.call(target, call.function_name, call.args, ctx, is_view);
        result.return_value = value;
        result.writes = engine.take_writes();
        result.reads = engine.take_reads();
    } catch (const BodyFault& fault) {
        result.outcome = TrialResult::Outcome::Reverted;
        result.revert_kind = fault.kind;
        result.reason = fault.reason;
        result.reads = engine.take_reads();
    }
    return result;
}

namespace {

// Listing-style expected-vs-actual checking: each crosschain call must match
// the next unconsumed signed subordinate exactly.
class CheckingHooks final : public CrosschainHooks {
public:
    CheckingHooks(std::span<const CrosschainTransaction> subordinates,
                  const ViewResultCache& cache)
        : subordinates_(subordinates), cache_(cache) {}

    std::int64_t on_view(ChainId chain, Address contract, const std::string& function,
                         std::span<const std::int64_t> args) override {
        const std::size_t index = cursor_;
        match(txcore::TxType::View, chain, contract, function, args);
        auto it = cache_.find(index);
        if (it == cache_.end())
            throw BodyFault{TrialResult::RevertKind::MissingViewResult,
                            "no cached result for subordinate view #" + std::to_string(index)};
        return it->second;
    }

    void on_tx(ChainId chain, Address contract, const std::string& function,
               std::span<const std::int64_t> args) override {
        match(txcore::TxType::Subordinate, chain, contract, function, args);
    }

    std::size_t consumed() const { return cursor_; }
    std::size_t total() const { return subordinates_.size(); }

private:
    void match(txcore::TxType want, ChainId chain, Address contract, const std::string& function,
               std::span<const std::int64_t> args) {
        if (cursor_ >= subordinates_.size())
            throw BodyFault{TrialResult::RevertKind::ParamMismatch,
                            "crosschain call to " + function +
                                " has no matching signed subordinate"};
        const CrosschainTransaction& expected = subordinates_[cursor_];
        const bool matches = expected.tx_type == want && expected.chain_id == chain &&
                             expected.to == contract &&
                             expected.data.function_name == function &&
                             std::equal(expected.data.args.begin(), expected.data.args.end(),
                                        args.begin(), args.end());
        if (!matches)
            throw BodyFault{TrialResult::RevertKind::ParamMismatch,
                            "actual call " + function + " does not match subordinate #" +
                                std::to_string(cursor_) + " (" +
                                expected.data.function_name + ")"};
        ++cursor_;
    }

    std::span<const CrosschainTransaction> subordinates_;
    const ViewResultCache& cache_;
    std::size_t cursor_ = 0;
};

}  // namespace

TrialResult execute_trial(const ChainState& chain, const BodyRegistry& registry, Address target,
                          const CallPayload& call, const ExecContext& ctx,
                          std::span<const CrosschainTransaction> subordinates,
                          const ViewResultCache& cached_view_results, bool is_view) {
    CheckingHooks hooks(subordinates, cached_view_results);
    TrialResult result = execute_with_hooks(chain, registry, target, call, ctx, hooks, is_view);
    result.consumed_subordinates = hooks.consumed();
    if (result.ok() && hooks.consumed() != subordinates.size()) {
        result.outcome = TrialResult::Outcome::Reverted;
        result.revert_kind = TrialResult::RevertKind::UnconsumedSubordinate;
        result.reason = std::to_string(subordinates.size() - hooks.consumed()) +
                        " signed subordinate(s) were never called";
    }
    if (!result.ok()) {
        result.writes.clear();
        result.return_value.reset();
    }
    if (is_view) result.writes.clear();  // views never stage state
    return result;
}

}  // namespace xchain::vm
